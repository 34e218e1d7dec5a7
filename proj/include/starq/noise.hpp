#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace starq {

// All times are in units of the nominal pulse length tau_p, field amplitudes
// in 1/tau_p.

struct NoiseSpec {
    double sigma = 0.0;   // r.m.s. field amplitude
    double tau_n = 1.0;   // Gaussian correlation time
    std::uint64_t seed = 0;
};

class parameter_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Per-qubit samples of the classical dephasing field A_i(t) on a uniform
// grid t_k = k*dt, k = 0..n_samples-1, n_samples = ceil(duration/dt)+1.
struct NoiseTrace {
    double dt = 0.0;
    std::vector<std::vector<double>> samples;  // [qubit][k]

    std::size_t n_qubits() const { return samples.size(); }
    std::size_t n_samples() const { return samples.empty() ? 0 : samples[0].size(); }
    double duration() const { return n_samples() ? dt * double(n_samples() - 1) : 0.0; }

    // Cubic (Catmull-Rom) interpolation of qubit q's field at time t.
    // The sampled process is band-limited well below the grid Nyquist rate,
    // so the interpolant error is negligible against the 5% covariance
    // tolerances; it also gives the integrator a smooth field between nodes.
    double value(std::size_t q, double t) const;
};

// Stationary zero-mean Gaussian process with covariance
//   <A(t) A(t')> = sigma^2 exp(-(t-t')^2 / tau_n^2),
// synthesized by circulant embedding (exact target covariance on the
// periodic grid; the embedding period carries >= 8*tau_n of padding so
// wrap-around correlations are below 1e-27). Streams are independent per
// qubit and deterministic in (spec.seed, qubit).
NoiseTrace sample_trace(const NoiseSpec& spec, int n_qubits, double duration, double dt);

// Pointwise sum of two traces on identical grids.
NoiseTrace compose_traces(const NoiseTrace& a, const NoiseTrace& b);

struct T2Estimate {
    double t2 = 0.0;      // fitted dephasing time
    bool no_decay = false;
};

class fit_failure : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Free-induction decay of a single uncontrolled, uncoupled qubit: per
// realization the accumulated phase is phi(t) = int_0^t A, and the ensemble
// coherence |<exp(-i phi)>| = exp(-var(phi)/2) for Gaussian noise.  The
// variance form is used as the estimator (it stays measurable deep in the
// tail); T2 comes from a least-squares fit of log coherence over the
// asymptotic window t in [1.5 tau_n, 5 tau_n].
T2Estimate estimate_t2(const NoiseSpec& spec, int n_realizations);

// Debug dump: header {u32 n_qubits, u64 n_samples, f64 dt} then per-qubit
// sample arrays, all little-endian 64-bit floats.
void dump_trace(const NoiseTrace& trace, const std::string& path);
NoiseTrace load_trace(const std::string& path);

}  // namespace starq
