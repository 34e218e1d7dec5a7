#include "starq/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace starq {

namespace {

constexpr std::uint64_t kNoiseTag = 0x6e6f6973652d7231ULL;
constexpr std::uint64_t kNoise2Tag = 0x6e6f6973652d7232ULL;
constexpr std::uint64_t kOutcomeTag = 0x6f7574636f6d6573ULL;

NoiseTrace build_noise(const RunConfig& cfg, double duration) {
    // one grid for both components so bimodal traces compose exactly
    double tau_min = cfg.noise.tau_n;
    if (cfg.noise2) tau_min = std::min(tau_min, cfg.noise2->tau_n);
    const double dt = std::clamp(tau_min / 8.0, 0.125, 8.0);

    NoiseSpec slow = cfg.noise;
    slow.seed = stream_key(cfg.seed, kNoiseTag, std::uint64_t(cfg.realization));
    NoiseTrace trace = sample_trace(slow, 6, duration, dt);
    if (cfg.noise2) {
        NoiseSpec fast = *cfg.noise2;
        fast.seed = stream_key(cfg.seed, kNoise2Tag, std::uint64_t(cfg.realization));
        trace = compose_traces(trace, sample_trace(fast, 6, duration, dt));
    }
    return trace;
}

// ideal encoded columns for logical inputs m = 0, 1 (center carries m)
Eigen::MatrixXcd encoded_targets() {
    Eigen::MatrixXcd U = ideal_unitary(encoding_circuit(Layout::star), 6);
    Eigen::MatrixXcd V0(64, 2);
    V0.col(0) = U.col(0);
    V0.col(1) = U.col(32);
    return V0;
}

Eigen::MatrixXcd decoded_targets() {
    Eigen::MatrixXcd V0 = Eigen::MatrixXcd::Zero(64, 2);
    V0(0, 0) = 1.0;
    V0(32, 1) = 1.0;
    return V0;
}

// deterministic coupling phases of the bare initial columns: leaves all up,
// center z = +-1, energy (1/2) J sum_l z_l z_c = +-(5/2) J
Eigen::MatrixXcd free_targets(double J, double t) {
    Eigen::MatrixXcd V0 = Eigen::MatrixXcd::Zero(64, 2);
    V0(0, 0) = std::polar(1.0, -2.5 * J * t);
    V0(32, 1) = std::polar(1.0, +2.5 * J * t);
    return V0;
}

PauliString leaf_pauli(int qubit, char symbol) {
    PauliString p;
    p.ops.assign(5, 'I');
    p.ops[std::size_t(qubit - 1)] = symbol;
    return p;
}

}  // namespace

double recovery_fidelity(const Eigen::MatrixXcd& V, const Eigen::MatrixXcd& V0) {
    double f = fidelity(V, V0);
    for (const auto& err : recovery_errors()) f += fidelity(V, err.apply(V0, 6));
    return f;
}

const char* mode_name(RunMode mode) {
    switch (mode) {
        case RunMode::zeno: return "zeno";
        case RunMode::qec: return "qec";
        case RunMode::dd_only: return "dd_only";
        case RunMode::free_evolution: return "free";
    }
    return "?";
}

RunMode mode_from_name(const std::string& name) {
    if (name == "zeno") return RunMode::zeno;
    if (name == "qec") return RunMode::qec;
    if (name == "dd_only") return RunMode::dd_only;
    if (name == "free") return RunMode::free_evolution;
    throw std::invalid_argument("unknown run mode: " + name);
}

MetricsTrace run_protocol(const RunConfig& cfg) {
    if (cfg.n_cycles < 1) throw std::invalid_argument("run_protocol: n_cycles < 1");
    const double J = (M_PI / 16.0) / cfg.n_rep;
    QubitGraph g = star_graph(5, J);
    const ShapeLibrary& lib = default_shape_library();

    Circuit circuit = encoding_circuit(Layout::star);
    Circuit cycle = measurement_cycle();
    for (int c = 0; c < cfg.n_cycles; ++c)
        circuit.layers.insert(circuit.layers.end(), cycle.layers.begin(),
                              cycle.layers.end());
    Circuit dec = decoding_circuit();
    circuit.layers.insert(circuit.layers.end(), dec.layers.begin(), dec.layers.end());

    PulseSchedule sched = compile(circuit, g, lib);
    const bool free_mode = cfg.mode == RunMode::free_evolution;
    if (free_mode) sched.placements.clear();

    NoiseTrace noise = build_noise(cfg, sched.total_duration);
    HamiltonianContext ctx{&g, &noise, &sched};

    const Eigen::MatrixXcd V0enc = encoded_targets();
    const Eigen::MatrixXcd V0dec = decoded_targets();
    ReducedEvolution V = ReducedEvolution::basis_columns(6, {0, 32});
    RngStream outcomes(stream_key(cfg.seed, kOutcomeTag, std::uint64_t(cfg.realization)));

    MetricsTrace trace;
    trace.mode = cfg.mode;
    double sp = 1.0;
    bool in_window = false;
    unsigned window_bits = 0;
    int window_count = 0;
    int meas_index = 0;

    for (const Marker& m : sched.markers) {
        integrate(V, ctx, m.t, cfg.steps_per_tau_p);

        MeasurementRecord rec;
        rec.t = m.t;
        rec.gen = m.tag;
        const Eigen::MatrixXcd ref = free_mode ? free_targets(J, m.t) : V0enc;
        rec.F_b = fidelity(V.V, ref) / sp;
        rec.Fp_b = recovery_fidelity(V.V, ref) / sp;

        switch (cfg.mode) {
            case RunMode::zeno: {
                double sp_next = project(V, 6, 0, ProjectMode::postselect);
                rec.p0 = sp > 0.0 ? sp_next / sp : 0.0;
                sp = sp_next;
                rec.sp = sp;
                break;
            }
            case RunMode::qec: {
                rec.outcome = sample_outcome(V, 6, outcomes);
                reset_ancilla(V, 6, rec.outcome);
                if (!in_window && rec.outcome != 0) {
                    in_window = true;
                    window_bits = 0;
                    window_count = 0;
                }
                if (in_window) {
                    rec.trigger = true;
                    window_bits |= unsigned(rec.outcome) << (rec.gen - 1);
                    if (++window_count == 4) {
                        const auto& corr = syndrome_table().lookup(window_bits);
                        if (corr.qubit > 0)
                            V.V = leaf_pauli(corr.qubit, corr.symbol).apply(V.V, 6);
                        in_window = false;
                        ++trace.n_triggers;
                    }
                }
                break;
            }
            case RunMode::dd_only:
            case RunMode::free_evolution:
                break;
        }

        if (cfg.fault_qubit > 0 && meas_index == cfg.fault_after)
            V.V = leaf_pauli(cfg.fault_qubit, 'X').apply(V.V, 6);
        ++meas_index;

        rec.F_a = fidelity(V.V, ref) / sp;
        rec.Fp_a = recovery_fidelity(V.V, ref) / sp;
        if (cfg.mode != RunMode::zeno) rec.sp = 1.0;
        trace.records.push_back(rec);
    }

    integrate(V, ctx, sched.total_duration, cfg.steps_per_tau_p);

    const Eigen::MatrixXcd ref_end =
        free_mode ? free_targets(J, sched.total_duration) : V0dec;
    trace.F_full = fidelity(V.V, ref_end) / sp;
    Eigen::MatrixXcd Vn = V.V;
    if (cfg.mode == RunMode::zeno && sp > 0.0) Vn /= std::sqrt(sp);
    trace.F_single = single_qubit_fidelity(Vn, ref_end, 6, 6);
    trace.Fp_end = trace.records.empty() ? 0.0 : trace.records.back().Fp_a;
    trace.sp_final = sp;
    trace.F_succ = trace.F_full;
    return trace;
}

EnsembleTrace run_ensemble(const RunConfig& cfg, int n_realizations, bool exclusion,
                           int n_jobs, bool with_dd_companion) {
    if (n_realizations < 1)
        throw std::invalid_argument("run_ensemble: n_realizations < 1");
    EnsembleTrace ens;
    ens.n_realizations = n_realizations;
    ens.exclusion = exclusion;
    ens.runs.resize(std::size_t(n_realizations));
    if (with_dd_companion) ens.dd_runs.resize(std::size_t(n_realizations));

#ifdef _OPENMP
    if (n_jobs > 0) omp_set_num_threads(n_jobs);
#pragma omp parallel for schedule(dynamic)
#endif
    for (int r = 0; r < n_realizations; ++r) {
        RunConfig rc = cfg;
        rc.realization = r;
        ens.runs[std::size_t(r)] = run_protocol(rc);
        if (with_dd_companion) {
            rc.mode = RunMode::dd_only;
            ens.dd_runs[std::size_t(r)] = run_protocol(rc);
        }
    }

    const std::size_t n_rec = ens.runs[0].records.size();
    ens.records.assign(n_rec, {});
    for (std::size_t i = 0; i < n_rec; ++i) {
        EnsembleRecord& e = ens.records[i];
        e.t = ens.runs[0].records[i].t;
        e.gen = ens.runs[0].records[i].gen;
        int n_d = 0;
        for (int r = 0; r < n_realizations; ++r) {
            const MeasurementRecord& m = ens.runs[std::size_t(r)].records[i];
            if (!exclusion || !m.trigger) {
                e.F_b += m.F_b;
                e.F_a += m.F_a;
                e.Fp_b += m.Fp_b;
                e.Fp_a += m.Fp_a;
                ++e.n;
            }
            if (with_dd_companion) {
                const MeasurementRecord& d = ens.dd_runs[std::size_t(r)].records[i];
                e.F_d += d.F_a;
                e.Fp_d += d.Fp_a;
                ++n_d;
            }
        }
        if (e.n > 0) {
            e.F_b /= e.n;
            e.F_a /= e.n;
            e.Fp_b /= e.n;
            e.Fp_a /= e.n;
        }
        if (n_d > 0) {
            e.F_d /= n_d;
            e.Fp_d /= n_d;
        }
    }

    for (int r = 0; r < n_realizations; ++r) {
        const MetricsTrace& t = ens.runs[std::size_t(r)];
        ens.F_full += t.F_full;
        ens.F_single += t.F_single;
        ens.Fp_end += t.Fp_end;
        ens.sp_final += t.sp_final;
        ens.F_succ += t.F_succ;
        if (with_dd_companion) {
            const MetricsTrace& d = ens.dd_runs[std::size_t(r)];
            ens.F_full_d += d.F_full;
            ens.F_single_d += d.F_single;
            ens.Fp_end_d += d.Fp_end;
        }
    }
    ens.F_full /= n_realizations;
    ens.F_single /= n_realizations;
    ens.Fp_end /= n_realizations;
    ens.sp_final /= n_realizations;
    ens.F_succ /= n_realizations;
    if (with_dd_companion) {
        ens.F_full_d /= n_realizations;
        ens.F_single_d /= n_realizations;
        ens.Fp_end_d /= n_realizations;
    }
    return ens;
}

void write_trace_csv(const MetricsTrace& trace, int realization, std::ostream& out,
                     bool header) {
    if (header) out << "realization,t,kind,F_b,F_a,Fp_b,Fp_a,outcome,trigger\n";
    out.precision(12);
    for (const auto& r : trace.records)
        out << realization << ',' << r.t << ",g" << r.gen << ',' << r.F_b << ',' << r.F_a
            << ',' << r.Fp_b << ',' << r.Fp_a << ',' << r.outcome << ','
            << (r.trigger ? 1 : 0) << '\n';
    // end row: F_full and F_single in the fidelity slots, sp in Fp_a
    out << realization << ',' << (trace.records.empty() ? 0.0 : trace.records.back().t)
        << ",end," << trace.F_full << ',' << trace.F_single << ',' << trace.Fp_end << ','
        << trace.sp_final << ",-1,0\n";
}

namespace {

struct MeanSe {
    double mean = 0.0, se = 0.0;
};

template <typename Get>
MeanSe reduce(const std::vector<MetricsTrace>& runs, std::size_t i, bool exclusion,
              Get get) {
    double s = 0.0, s2 = 0.0;
    int n = 0;
    for (const auto& t : runs) {
        const MeasurementRecord& m = t.records[i];
        if (exclusion && m.trigger) continue;
        double v = get(m);
        s += v;
        s2 += v * v;
        ++n;
    }
    MeanSe r;
    if (n > 0) r.mean = s / n;
    if (n > 1) r.se = std::sqrt(std::max(0.0, (s2 - s * s / n) / (n - 1.0) / n));
    return r;
}

}  // namespace

void write_ensemble_csv(const EnsembleTrace& ens, std::ostream& out) {
    out << "t,gen,n,F_b,F_b_se,F_a,F_a_se,Fp_b,Fp_b_se,Fp_a,Fp_a_se,F_d,F_d_se,Fp_d,"
           "Fp_d_se\n";
    out.precision(12);
    const bool has_dd = !ens.dd_runs.empty();
    for (std::size_t i = 0; i < ens.records.size(); ++i) {
        const EnsembleRecord& e = ens.records[i];
        const bool excl = ens.exclusion;
        MeanSe fb = reduce(ens.runs, i, excl, [](const MeasurementRecord& m) { return m.F_b; });
        MeanSe fa = reduce(ens.runs, i, excl, [](const MeasurementRecord& m) { return m.F_a; });
        MeanSe pb = reduce(ens.runs, i, excl, [](const MeasurementRecord& m) { return m.Fp_b; });
        MeanSe pa = reduce(ens.runs, i, excl, [](const MeasurementRecord& m) { return m.Fp_a; });
        MeanSe fd, pd;
        if (has_dd) {
            fd = reduce(ens.dd_runs, i, false, [](const MeasurementRecord& m) { return m.F_a; });
            pd = reduce(ens.dd_runs, i, false, [](const MeasurementRecord& m) { return m.Fp_a; });
        }
        out << e.t << ',' << e.gen << ',' << e.n << ',' << fb.mean << ',' << fb.se << ','
            << fa.mean << ',' << fa.se << ',' << pb.mean << ',' << pb.se << ',' << pa.mean
            << ',' << pa.se << ',' << fd.mean << ',' << fd.se << ',' << pd.mean << ','
            << pd.se << '\n';
    }
    out << "# end F_full " << ens.F_full << " F_single " << ens.F_single << " Fp_end "
        << ens.Fp_end << " F_full_d " << ens.F_full_d << " F_single_d " << ens.F_single_d
        << " Fp_end_d " << ens.Fp_end_d << " sp_final " << ens.sp_final << " F_succ "
        << ens.F_succ << "\n";
}

}  // namespace starq
