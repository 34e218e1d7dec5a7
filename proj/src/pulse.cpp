#include "starq/pulse.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <fstream>
#include <mutex>
#include <sstream>

#include "starq/rng.hpp"

namespace starq {

bool PulseShape::is_zero() const {
    if (a0 != 0.0) return false;
    for (double a : harmonics)
        if (a != 0.0) return false;
    return true;
}

double PulseShape::profile_unit(double u) const {
    double v = a0;
    for (std::size_t k = 0; k < harmonics.size(); ++k)
        v += harmonics[k] * (1.0 - std::cos(2.0 * M_PI * double(k + 1) * u));
    return v;
}

PulseShape PulseShape::zero() {
    PulseShape s;
    s.name = "zero";
    return s;
}

PulseShape PulseShape::rectangular(double angle) {
    PulseShape s;
    s.name = "rect";
    s.nominal_angle = angle;
    s.a0 = angle;
    return s;
}

double phase_profile(const PulseShape& shape, double t) {
    if (t < -1e-12 || t > shape.duration + 1e-12)
        throw std::invalid_argument("phase_profile: t outside pulse support");
    double u = t / shape.duration;
    double phi = shape.a0 * u;
    for (std::size_t k = 0; k < shape.harmonics.size(); ++k) {
        double w = 2.0 * M_PI * double(k + 1);
        phi += shape.harmonics[k] * (u - std::sin(w * u) / w);
    }
    return phi;
}

namespace {

double phase_unit(const PulseShape& shape, double u) {
    double phi = shape.a0 * u;
    for (std::size_t k = 0; k < shape.harmonics.size(); ++k) {
        double w = 2.0 * M_PI * double(k + 1);
        phi += shape.harmonics[k] * (u - std::sin(w * u) / w);
    }
    return phi;
}

}  // namespace

ShapeResiduals residuals(const PulseShape& shape) {
    // RK4 on (C, S, D)' = (cos phi, sin phi, sin phi * C - cos phi * S)
    const int n = 4096;
    const double h = 1.0 / n;
    double C = 0.0, S = 0.0, D = 0.0;
    auto deriv = [&](double u, double c, double s, double* dc, double* ds, double* dd) {
        double phi = phase_unit(shape, u);
        double cp = std::cos(phi), sp = std::sin(phi);
        *dc = cp;
        *ds = sp;
        *dd = sp * c - cp * s;
    };
    for (int i = 0; i < n; ++i) {
        double u = i * h;
        double k1c, k1s, k1d, k2c, k2s, k2d, k3c, k3s, k3d, k4c, k4s, k4d;
        deriv(u, C, S, &k1c, &k1s, &k1d);
        deriv(u + 0.5 * h, C + 0.5 * h * k1c, S + 0.5 * h * k1s, &k2c, &k2s, &k2d);
        deriv(u + 0.5 * h, C + 0.5 * h * k2c, S + 0.5 * h * k2s, &k3c, &k3s, &k3d);
        deriv(u + h, C + h * k3c, S + h * k3s, &k4c, &k4s, &k4d);
        C += h / 6.0 * (k1c + 2 * k2c + 2 * k3c + k4c);
        S += h / 6.0 * (k1s + 2 * k2s + 2 * k3s + k4s);
        D += h / 6.0 * (k1d + 2 * k2d + 2 * k3d + k4d);
    }
    return {C, S, D};
}

double max_amplitude(const PulseShape& shape) {
    double m = 0.0;
    const int n = 4096;
    for (int i = 0; i <= n; ++i)
        m = std::max(m, std::abs(shape.amplitude(shape.duration * i / n, shape.duration)));
    return m;
}

namespace {

Eigen::VectorXd residual_vector(const PulseShape& s, double angle, int order) {
    ShapeResiduals r = residuals(s);
    double total = s.a0;
    for (double a : s.harmonics) total += a;
    Eigen::VectorXd v(order >= 2 ? 4 : 3);
    v(0) = total - angle;
    v(1) = r.s1;
    v(2) = r.c1;
    if (order >= 2) v(3) = r.d2;
    return v;
}

}  // namespace

PulseShape calibrate(double nominal_angle, int order, int n_harmonics) {
    if (order < 1 || order > 2) throw calibration_error("calibrate: order must be 1 or 2");
    if (n_harmonics < order + 1)
        throw calibration_error("calibrate: need at least order+1 harmonics");

    auto solve_from = [&](const Eigen::VectorXd& start, PulseShape* out) -> bool {
        PulseShape s;
        s.nominal_angle = nominal_angle;
        s.order = order;
        s.harmonics.assign(std::size_t(n_harmonics), 0.0);
        Eigen::VectorXd a = start;
        for (int iter = 0; iter < 200; ++iter) {
            for (int k = 0; k < n_harmonics; ++k) s.harmonics[std::size_t(k)] = a(k);
            Eigen::VectorXd r = residual_vector(s, nominal_angle, order);
            if (r.lpNorm<Eigen::Infinity>() <= 1e-12) {
                *out = s;
                return true;
            }
            const int m = int(r.size());
            Eigen::MatrixXd J(m, n_harmonics);
            const double h = 1e-6;
            for (int k = 0; k < n_harmonics; ++k) {
                PulseShape sp = s, sm = s;
                sp.harmonics[std::size_t(k)] += h;
                sm.harmonics[std::size_t(k)] -= h;
                J.col(k) = (residual_vector(sp, nominal_angle, order) -
                            residual_vector(sm, nominal_angle, order)) /
                           (2.0 * h);
            }
            Eigen::VectorXd step = J.completeOrthogonalDecomposition().solve(-r);
            double lambda = 1.0;
            double r0 = r.norm();
            bool accepted = false;
            for (int ls = 0; ls < 20; ++ls) {
                Eigen::VectorXd trial = a + lambda * step;
                for (int k = 0; k < n_harmonics; ++k) s.harmonics[std::size_t(k)] = trial(k);
                if (residual_vector(s, nominal_angle, order).norm() < r0) {
                    a = trial;
                    accepted = true;
                    break;
                }
                lambda *= 0.5;
            }
            if (!accepted) return false;
        }
        return false;
    };

    PulseShape best;
    bool have_best = false;
    RngStream rng(0x70756c7365ULL, std::uint64_t(order),
                  std::uint64_t(n_harmonics), std::uint64_t(nominal_angle * 1e6));
    for (int attempt = 0; attempt < 12; ++attempt) {
        Eigen::VectorXd start = Eigen::VectorXd::Zero(n_harmonics);
        start(0) = nominal_angle;
        if (attempt > 0)
            for (int k = 0; k < n_harmonics; ++k)
                start(k) += 2.0 * nominal_angle * rng.next_normal();
        PulseShape cand;
        if (solve_from(start, &cand) &&
            (!have_best || max_amplitude(cand) < max_amplitude(best))) {
            best = cand;
            have_best = true;
        }
    }
    if (!have_best) {
        PulseShape probe;
        probe.nominal_angle = nominal_angle;
        probe.order = order;
        probe.harmonics.assign(std::size_t(n_harmonics), 0.0);
        probe.harmonics[0] = nominal_angle;
        std::ostringstream msg;
        msg << "calibrate: no convergence for angle=" << nominal_angle << " order=" << order
            << " n_harmonics=" << n_harmonics
            << " (start residual=" << residual_vector(probe, nominal_angle, order).norm() << ")";
        throw calibration_error(msg.str());
    }
    return best;
}

const PulseShape& ShapeLibrary::get(const std::string& name) const {
    for (const auto& s : shapes)
        if (s.name == name) return s;
    throw std::out_of_range("ShapeLibrary: no shape named " + name);
}

ShapeLibrary default_shape_library() {
    static ShapeLibrary lib;
    static std::once_flag once;
    std::call_once(once, [] {
        auto add = [&](const char* name, double angle, int order, int nh, double dur) {
            PulseShape s = calibrate(angle, order, nh);
            s.name = name;
            s.duration = dur;
            lib.shapes.push_back(std::move(s));
        };
        add("sr2_pi", M_PI, 2, 3, 1.0);
        add("sr2_half_pi", M_PI / 2, 2, 3, 1.0);
        add("sr1_pi", M_PI, 1, 2, 1.0);
        add("sr1_half_pi", M_PI / 2, 1, 2, 1.0);
        PulseShape z = PulseShape::zero();
        lib.shapes.push_back(z);
    });
    return lib;
}

void save_shape_library(const ShapeLibrary& lib, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("save_shape_library: cannot open " + path);
    f.precision(17);
    for (const auto& s : lib.shapes) {
        f << s.name << ' ' << s.nominal_angle << ' ' << s.order;
        for (double a : s.harmonics) f << ' ' << a;
        f << '\n';
    }
}

ShapeLibrary load_shape_library(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("load_shape_library: cannot open " + path);
    ShapeLibrary lib;
    std::string line;
    while (std::getline(f, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        PulseShape s;
        ss >> s.name >> s.nominal_angle >> s.order;
        double a;
        while (ss >> a) s.harmonics.push_back(a);
        lib.shapes.push_back(std::move(s));
    }
    return lib;
}

}  // namespace starq
