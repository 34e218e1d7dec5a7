#include "starq/noise.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <mutex>

#include "starq/rng.hpp"

namespace starq {

namespace {

std::mutex fftw_plan_mutex;  // FFTW planning is not thread-safe

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

// One realization of length n with covariance sigma^2 exp(-(k dt)^2/tau_n^2)
// via circulant embedding of period p >= n + 8 tau_n/dt.
std::vector<double> circulant_realization(double sigma, double tau_n, double dt,
                                          std::size_t n, RngStream& rng) {
    if (sigma == 0.0) return std::vector<double>(n, 0.0);
    const std::size_t pad = std::size_t(std::ceil(8.0 * tau_n / dt));
    const std::size_t p = next_pow2(std::max<std::size_t>(2 * (n + pad), 8));

    // circulant covariance row and its eigenvalues
    std::vector<double> lambda(p);
    {
        fftw_complex* buf;
        fftw_plan plan;
        {
            std::lock_guard<std::mutex> lock(fftw_plan_mutex);
            buf = fftw_alloc_complex(p);
            plan = fftw_plan_dft_1d(int(p), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
        }
        for (std::size_t k = 0; k < p; ++k) {
            double lag = dt * double(std::min(k, p - k));
            double u = lag / tau_n;
            buf[k][0] = sigma * sigma * std::exp(-u * u);
            buf[k][1] = 0.0;
        }
        fftw_execute(plan);
        for (std::size_t k = 0; k < p; ++k) lambda[k] = std::max(buf[k][0], 0.0);
        std::lock_guard<std::mutex> lock(fftw_plan_mutex);
        fftw_destroy_plan(plan);
        fftw_free(buf);
    }

    fftw_complex* spec;
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(fftw_plan_mutex);
        spec = fftw_alloc_complex(p);
        plan = fftw_plan_dft_1d(int(p), spec, spec, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    const std::size_t half = p / 2;
    spec[0][0] = std::sqrt(lambda[0] / double(p)) * rng.next_normal();
    spec[0][1] = 0.0;
    spec[half][0] = std::sqrt(lambda[half] / double(p)) * rng.next_normal();
    spec[half][1] = 0.0;
    for (std::size_t k = 1; k < half; ++k) {
        double a = std::sqrt(lambda[k] / (2.0 * double(p)));
        double re = a * rng.next_normal();
        double im = a * rng.next_normal();
        spec[k][0] = re;
        spec[k][1] = im;
        spec[p - k][0] = re;
        spec[p - k][1] = -im;
    }
    fftw_execute(plan);

    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = spec[k][0];
    {
        std::lock_guard<std::mutex> lock(fftw_plan_mutex);
        fftw_destroy_plan(plan);
        fftw_free(spec);
    }
    return out;
}

}  // namespace

double NoiseTrace::value(std::size_t q, double t) const {
    const auto& s = samples[q];
    const std::size_t n = s.size();
    double u = t / dt;
    if (u <= 0.0) return s.front();
    if (u >= double(n - 1)) return s.back();
    std::size_t i = std::size_t(u);
    if (i >= n - 1) i = n - 2;
    double x = u - double(i);
    double y0 = (i > 0) ? s[i - 1] : 2.0 * s[0] - s[1];
    double y1 = s[i];
    double y2 = s[i + 1];
    double y3 = (i + 2 < n) ? s[i + 2] : 2.0 * s[n - 1] - s[n - 2];
    double a = -0.5 * y0 + 1.5 * y1 - 1.5 * y2 + 0.5 * y3;
    double b = y0 - 2.5 * y1 + 2.0 * y2 - 0.5 * y3;
    double c = -0.5 * y0 + 0.5 * y2;
    return ((a * x + b) * x + c) * x + y1;
}

NoiseTrace sample_trace(const NoiseSpec& spec, int n_qubits, double duration, double dt) {
    if (duration <= 0.0) throw parameter_error("sample_trace: duration must be positive");
    if (dt <= 0.0) throw parameter_error("sample_trace: dt must be positive");
    if (spec.sigma < 0.0) throw parameter_error("sample_trace: sigma must be >= 0");
    if (spec.tau_n <= 0.0) throw parameter_error("sample_trace: tau_n must be positive");

    const std::size_t n = std::size_t(std::ceil(duration / dt)) + 1;
    NoiseTrace trace;
    trace.dt = dt;
    trace.samples.resize(std::size_t(n_qubits));
    for (int q = 0; q < n_qubits; ++q) {
        RngStream rng(spec.seed, 0x6e6f6973ULL, std::uint64_t(q));
        trace.samples[std::size_t(q)] =
            circulant_realization(spec.sigma, spec.tau_n, dt, n, rng);
    }
    return trace;
}

NoiseTrace compose_traces(const NoiseTrace& a, const NoiseTrace& b) {
    if (a.dt != b.dt || a.n_samples() != b.n_samples() || a.n_qubits() != b.n_qubits())
        throw parameter_error("compose_traces: grid mismatch");
    NoiseTrace out = a;
    for (std::size_t q = 0; q < out.samples.size(); ++q)
        for (std::size_t k = 0; k < out.samples[q].size(); ++k)
            out.samples[q][k] += b.samples[q][k];
    return out;
}

T2Estimate estimate_t2(const NoiseSpec& spec, int n_realizations) {
    if (n_realizations < 100)
        throw parameter_error("estimate_t2: need at least 100 realizations");
    if (spec.sigma == 0.0) return {0.0, true};

    const double duration = 5.0 * spec.tau_n;
    const double dt = spec.tau_n / 64.0;
    const std::size_t n = std::size_t(std::ceil(duration / dt)) + 1;

    // accumulate phase mean and second moment on the grid; each realization
    // draws a full 6-qubit trace, so it contributes six independent
    // free-induction trajectories
    const int n_streams = 6;
    std::vector<double> m1(n, 0.0), m2(n, 0.0);
    for (int r = 0; r < n_realizations; ++r) {
        NoiseSpec s = spec;
        s.seed = stream_key(spec.seed, 0x74320000ULL, std::uint64_t(r));
        NoiseTrace tr = sample_trace(s, n_streams, duration, dt);
        for (int q = 0; q < n_streams; ++q) {
            const auto& a = tr.samples[std::size_t(q)];
            double phi = 0.0;
            for (std::size_t k = 1; k < n; ++k) {
                phi += 0.5 * dt * (a[k - 1] + a[k]);  // trapezoid
                m1[k] += phi;
                m2[k] += phi * phi;
            }
        }
    }
    const long long n_traj = (long long)n_realizations * n_streams;

    // coherence |<e^{-i phi}>| = exp(-var/2) for Gaussian phi;
    // fit log-coherence slope on the asymptotic window.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int cnt = 0;
    bool any_decay = false;
    for (std::size_t k = 1; k < n; ++k) {
        double t = dt * double(k);
        double mean = m1[k] / double(n_traj);
        double var = m2[k] / double(n_traj) - mean * mean;
        double logc = -0.5 * var;
        if (logc < -0.1) any_decay = true;
        if (t < 1.5 * spec.tau_n) continue;
        sx += t;
        sy += logc;
        sxx += t * t;
        sxy += t * logc;
        ++cnt;
    }
    if (!any_decay) return {0.0, true};
    if (cnt < 4) throw fit_failure("estimate_t2: no usable fit window");
    double denom = double(cnt) * sxx - sx * sx;
    double slope = (double(cnt) * sxy - sx * sy) / denom;
    if (slope >= -1e-12) throw fit_failure("estimate_t2: non-decaying tail, slope >= 0");
    return {-1.0 / slope, false};
}

void dump_trace(const NoiseTrace& trace, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw std::runtime_error("dump_trace: cannot open " + path);
    std::uint32_t nq = std::uint32_t(trace.n_qubits());
    std::uint64_t ns = trace.n_samples();
    std::fwrite(&nq, sizeof nq, 1, f);
    std::fwrite(&ns, sizeof ns, 1, f);
    std::fwrite(&trace.dt, sizeof trace.dt, 1, f);
    for (const auto& s : trace.samples) std::fwrite(s.data(), sizeof(double), s.size(), f);
    std::fclose(f);
}

NoiseTrace load_trace(const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "rb");
    if (!f) throw std::runtime_error("load_trace: cannot open " + path);
    std::uint32_t nq = 0;
    std::uint64_t ns = 0;
    NoiseTrace trace;
    if (std::fread(&nq, sizeof nq, 1, f) != 1 || std::fread(&ns, sizeof ns, 1, f) != 1 ||
        std::fread(&trace.dt, sizeof trace.dt, 1, f) != 1) {
        std::fclose(f);
        throw std::runtime_error("load_trace: truncated header");
    }
    trace.samples.assign(nq, std::vector<double>(ns));
    for (auto& s : trace.samples) {
        if (std::fread(s.data(), sizeof(double), s.size(), f) != s.size()) {
            std::fclose(f);
            throw std::runtime_error("load_trace: truncated data");
        }
    }
    std::fclose(f);
    return trace;
}

}  // namespace starq
