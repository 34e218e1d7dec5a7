#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstdio>

#include "starq/evolve.hpp"
#include "starq/pulse.hpp"
#include "starq/schedule.hpp"

using namespace starq;

TEST_CASE("phase profile: endpoints and midpoint symmetry") {
    PulseShape s = calibrate(M_PI, 1, 2);
    CHECK(phase_profile(s, 0.0) == 0.0);
    CHECK(phase_profile(s, s.duration) == doctest::Approx(M_PI).epsilon(1e-12));
    // symmetric shape: half the angle at the midpoint
    CHECK(phase_profile(s, 0.5 * s.duration) == doctest::Approx(M_PI / 2).epsilon(1e-12));
    CHECK_THROWS(phase_profile(s, -0.5));
    CHECK_THROWS(phase_profile(s, 2.0 * s.duration));
}

TEST_CASE("profile symmetry V(t) = V(tau_p - t)") {
    for (const PulseShape& s : default_shape_library().shapes) {
        for (int i = 0; i <= 50; ++i) {
            double u = double(i) / 50.0;
            CHECK(s.profile_unit(u) == doctest::Approx(s.profile_unit(1.0 - u)).epsilon(1e-13));
        }
        CHECK(s.profile_unit(0.0) == doctest::Approx(s.a0));
    }
}

TEST_CASE("rectangular pi pulse residual oracle: c1 = 0, s1 = 2/pi") {
    PulseShape rect = PulseShape::rectangular(M_PI);
    ShapeResiduals r = residuals(rect);
    CHECK(std::abs(r.c1) < 1e-12);
    CHECK(r.s1 == doctest::Approx(2.0 / M_PI).epsilon(1e-10));
}

TEST_CASE("calibration residuals") {
    SUBCASE("order 1, pi") {
        PulseShape s = calibrate(M_PI, 1, 2);
        ShapeResiduals r = residuals(s);
        CHECK(std::abs(r.c1) < 1e-10);
        CHECK(std::abs(r.s1) < 1e-10);
        double total = s.a0;
        for (double a : s.harmonics) total += a;
        CHECK(total == doctest::Approx(M_PI).epsilon(1e-12));
    }
    SUBCASE("order 2, pi") {
        PulseShape s = calibrate(M_PI, 2, 3);
        ShapeResiduals r = residuals(s);
        CHECK(std::abs(r.c1) < 1e-10);
        CHECK(std::abs(r.s1) < 1e-10);
        CHECK(std::abs(r.d2) < 1e-10);
    }
    SUBCASE("order 2, pi/2") {
        PulseShape s = calibrate(M_PI / 2, 2, 3);
        ShapeResiduals r = residuals(s);
        CHECK(std::abs(r.c1) < 1e-10);
        CHECK(std::abs(r.s1) < 1e-10);
        CHECK(std::abs(r.d2) < 1e-10);
    }
    SUBCASE("input validation") {
        CHECK_THROWS_AS(calibrate(M_PI, 3, 4), calibration_error);
        CHECK_THROWS_AS(calibrate(M_PI, 2, 2), calibration_error);
    }
}

namespace {

// evolution of one isolated pulse on a single qubit with a constant
// dephasing field eps; returns the deviation from the ideal rotation
double pulse_error(const PulseShape& shape, Axis axis, double eps, int steps = 1024) {
    QubitGraph g = make_graph(1, {}, 0.0);
    PulseSchedule sched;
    sched.total_duration = std::ceil(shape.duration);
    sched.placements.push_back({1, axis, shape, 1.0, 0.0, shape.duration, Role::rotation});
    NoiseTrace noise;
    noise.dt = 1.0;
    noise.samples = {std::vector<double>(std::size_t(sched.total_duration) + 1, eps)};
    HamiltonianContext ctx{&g, &noise, &sched};
    ReducedEvolution V = ReducedEvolution::basis_columns(1, {0, 1});
    integrate_reference(V, ctx, sched.total_duration, steps);

    // ideal rotation by the nominal angle about the pulse axis
    const double a = shape.nominal_angle;
    Eigen::Matrix2cd R;
    using cd = std::complex<double>;
    if (axis == Axis::x)
        R << cd(std::cos(a / 2), 0), cd(0, -std::sin(a / 2)), cd(0, -std::sin(a / 2)),
            cd(std::cos(a / 2), 0);
    else
        R << cd(std::cos(a / 2), 0), cd(-std::sin(a / 2), 0), cd(std::sin(a / 2), 0),
            cd(std::cos(a / 2), 0);
    const cd tr = (R.adjoint() * V.V).trace();
    return std::sqrt(std::max(0.0, 1.0 - std::norm(tr) / 4.0));
}

}  // namespace

TEST_CASE("self-refocusing order shows up as the error-scaling exponent") {
    // deviation ~ (eps*tau)^(order+1): fitted log-log slope vs eps
    const double e1 = 0.02, e2 = 0.08;
    SUBCASE("order 1 pi pulse: slope 2") {
        PulseShape s = calibrate(M_PI, 1, 2);
        double d1 = pulse_error(s, Axis::x, e1);
        double d2 = pulse_error(s, Axis::x, e2);
        double slope = std::log(d2 / d1) / std::log(e2 / e1);
        CHECK(slope == doctest::Approx(2.0).epsilon(0.1));
    }
    SUBCASE("order 2 pi pulse: slope 3") {
        // the cubic deviation is tiny; larger eps and a finer grid keep
        // the signal above the integrator's own error floor
        PulseShape s = calibrate(M_PI, 2, 3);
        double d1 = pulse_error(s, Axis::x, 0.15, 8192);
        double d2 = pulse_error(s, Axis::x, 0.30, 8192);
        double slope = std::log(d2 / d1) / std::log(2.0);
        CHECK(slope == doctest::Approx(3.0).epsilon(0.07));
    }
    SUBCASE("rectangular pulse: slope 1") {
        PulseShape s = PulseShape::rectangular(M_PI);
        double d1 = pulse_error(s, Axis::x, e1);
        double d2 = pulse_error(s, Axis::x, e2);
        double slope = std::log(d2 / d1) / std::log(e2 / e1);
        CHECK(slope == doctest::Approx(1.0).epsilon(0.1));
    }
}

TEST_CASE("default shape library and file round-trip") {
    const ShapeLibrary& lib = default_shape_library();
    CHECK_NOTHROW(lib.get("sr2_pi"));
    CHECK_NOTHROW(lib.get("sr2_half_pi"));
    CHECK_NOTHROW(lib.get("zero"));
    CHECK_THROWS(lib.get("nonexistent"));
    CHECK(lib.get("zero").is_zero());
    CHECK(lib.get("sr2_pi").nominal_angle == doctest::Approx(M_PI));

    const char* path = "shapes_roundtrip.txt";
    save_shape_library(lib, path);
    ShapeLibrary back = load_shape_library(path);
    std::remove(path);
    REQUIRE(back.shapes.size() == lib.shapes.size());
    for (std::size_t i = 0; i < lib.shapes.size(); ++i) {
        CHECK(back.shapes[i].name == lib.shapes[i].name);
        CHECK(back.shapes[i].harmonics == lib.shapes[i].harmonics);
    }
}
