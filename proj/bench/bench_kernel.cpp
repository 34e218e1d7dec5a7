#include <chrono>
#include <cmath>
#include <iostream>

#include "starq/evolve.hpp"
#include "starq/protocol.hpp"

using namespace starq;
using clk = std::chrono::steady_clock;

namespace {

double seconds_since(clk::time_point t0) {
    return std::chrono::duration<double>(clk::now() - t0).count();
}

}  // namespace

int main() {
    const QubitGraph g = star_graph(5, M_PI / 80.0);
    const ShapeLibrary& lib = default_shape_library();

    // workload: one generator-measurement block compiled to pulses, with
    // noise, M = 2 logical columns
    PulseSchedule sched = compile(generator_measurement(1), g, lib);
    NoiseSpec spec;
    spec.sigma = 0.02;
    spec.tau_n = 128.0;
    spec.seed = 1;
    NoiseTrace noise = sample_trace(spec, 6, sched.total_duration, 8.0);
    HamiltonianContext ctx{&g, &noise, &sched};
    const int steps = 1024;
    const double total_steps = sched.total_duration * steps;

    std::cout << "workload: " << sched.total_duration << " tau_p, " << steps
              << " steps/tau_p, 64x2 state\n\n";

    auto run = [&](auto&& integrator) {
        ReducedEvolution V = ReducedEvolution::basis_columns(6, {0, 32});
        auto t0 = clk::now();
        integrator(V, ctx, sched.total_duration, steps);
        double dt = seconds_since(t0);
        std::cout.precision(4);
        return std::pair<double, Eigen::MatrixXcd>(dt, V.V);
    };

    auto [t_fast, v_fast] = run([](auto&... a) { integrate(a...); });
    auto [t_ref, v_ref] = run([](auto&... a) { integrate_reference(a...); });
    double dev = (v_fast - v_ref).cwiseAbs().maxCoeff();

    std::cout << "table-driven kernel : " << t_fast << " s  ("
              << 1e9 * t_fast / total_steps << " ns/step)\n";
    std::cout << "reference integrator: " << t_ref << " s  ("
              << 1e9 * t_ref / total_steps << " ns/step)\n";
    std::cout << "speedup x" << t_ref / t_fast << ", max deviation " << dev << "\n\n";
    if (dev > 1e-10) {
        std::cout << "KERNELS DISAGREE\n";
        return 1;
    }

    // ensemble scaling: serial vs parallel over realizations
    RunConfig cfg;
    cfg.noise = spec;
    cfg.mode = RunMode::qec;
    cfg.n_cycles = 1;
    cfg.steps_per_tau_p = 256;
    cfg.seed = 3;
    const int n_real = 4;
    auto t0 = clk::now();
    EnsembleTrace serial = run_ensemble(cfg, n_real, false, 1, false);
    double t_serial = seconds_since(t0);
    t0 = clk::now();
    EnsembleTrace par = run_ensemble(cfg, n_real, false, 0, false);
    double t_par = seconds_since(t0);
    bool same = serial.F_full == par.F_full;
    std::cout << "ensemble (" << n_real << " realizations, 1 cycle): serial " << t_serial
              << " s, parallel " << t_par << " s, speedup x" << t_serial / t_par
              << (same ? "" : "  RESULTS DIFFER") << "\n";
    return same ? 0 : 1;
}
