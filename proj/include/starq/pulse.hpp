#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace starq {

// Symmetric one-axis amplitude profile on [0, duration].  The profile is
// stored on the unit interval,
//   v(u) = a0 + sum_k a_k (1 - cos(2 pi k u)),   u = t/duration,
// and scaled by 1/duration at evaluation time, so the accumulated angle
// phi(duration) = a0 + sum a_k is independent of the duration.  The cosine
// basis vanishes at the endpoints and is symmetric about the midpoint by
// construction; a0 is nonzero only for the rectangular test shape.
struct PulseShape {
    std::string name;
    double nominal_angle = 0.0;
    double duration = 1.0;  // nominal duration in tau_p (1 or 2)
    int order = 0;          // self-refocusing order
    double a0 = 0.0;
    std::vector<double> harmonics;  // a_1, a_2, ...

    bool is_zero() const;

    // v(u) on the unit interval (duration-independent normalization)
    double profile_unit(double u) const;
    // amplitude V(t) for a placement of the given duration
    double amplitude(double t, double dur) const { return profile_unit(t / dur) / dur; }

    static PulseShape zero();
    static PulseShape rectangular(double angle);
};

// phi(t) = int_0^t V, via the exact antiderivative of the basis.
double phase_profile(const PulseShape& shape, double t);

struct ShapeResiduals {
    double c1 = 0.0;  // <cos phi>
    double s1 = 0.0;  // <sin phi>
    // Double integral int_0^1 du int_0^u du' sin(phi(u) - phi(u')), the
    // coefficient of the second-order average-Hamiltonian term generated by
    // a static sigma_z field during the pulse.
    double d2 = 0.0;
};

ShapeResiduals residuals(const PulseShape& shape);

class calibration_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Solve {angle normalization} + {first-order conditions} (+ {second-order
// condition} for order 2) by damped Newton iteration over the harmonic
// coefficients; residual infinity-norm <= 1e-11 on success.  Among the roots
// reached from the multi-start schedule, the one with smallest max|V| wins.
PulseShape calibrate(double nominal_angle, int order, int n_harmonics);

double max_amplitude(const PulseShape& shape);

// Shape library: named calibrated shapes, one per line
// "name angle order a1 a2 ...".
struct ShapeLibrary {
    std::vector<PulseShape> shapes;
    const PulseShape& get(const std::string& name) const;
};

ShapeLibrary default_shape_library();
void save_shape_library(const ShapeLibrary& lib, const std::string& path);
ShapeLibrary load_shape_library(const std::string& path);

}  // namespace starq
