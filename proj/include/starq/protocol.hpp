#pragma once

#include <optional>
#include <string>
#include <vector>

#include "starq/code513.hpp"
#include "starq/evolve.hpp"
#include "starq/noise.hpp"

namespace starq {

enum class RunMode { zeno, qec, dd_only, free_evolution };

struct RunConfig {
    NoiseSpec noise;
    std::optional<NoiseSpec> noise2;  // second (fast) component of bimodal noise
    int n_cycles = 4;
    RunMode mode = RunMode::qec;
    int n_rep = 5;                    // fixes J through n_rep * J * tau_p = pi/16
    int steps_per_tau_p = 1024;
    std::uint64_t seed = 0;
    int realization = 0;              // selects the noise and outcome streams
    // fault injection: an instantaneous sigma_x on this leaf right after the
    // given measurement index (0-based); fault_qubit = 0 disables it
    int fault_qubit = 0;
    int fault_after = 0;
};

// One record per center measurement.  Fidelities are against the static
// ideal encoded columns; in zeno mode they are conditioned on survival
// (divided by the cumulative success probability) and sp carries the
// cumulative probability itself.
struct MeasurementRecord {
    double t = 0.0;
    int gen = 0;          // generator tag of the marker
    double F_b = 0.0, F_a = 0.0;    // regular fidelity before / after
    double Fp_b = 0.0, Fp_a = 0.0;  // recovery fidelity before / after
    double p0 = 1.0;      // conditional zero-branch probability (zeno)
    int outcome = -1;     // sampled bit (qec), -1 where not applicable
    bool trigger = false; // inside a syndrome-collection window
    double sp = 1.0;      // cumulative success probability (zeno)
};

struct MetricsTrace {
    RunMode mode = RunMode::qec;
    std::vector<MeasurementRecord> records;
    // end-of-decoding metrics
    double F_full = 0.0;        // against the decoded ideal columns
    double F_single = 0.0;      // center-qubit state fidelity
    double Fp_end = 0.0;        // recovery fidelity at the last measurement
    double sp_final = 1.0;      // zeno cumulative success probability
    double F_succ = 0.0;        // zeno conditioned fidelity at the end
    int n_triggers = 0;
};

// F'(V, V0) = F(V, V0) + sum_i F(V, E_i V0) over the 15 single-qubit
// recovery errors acting on the code qubits (leaves 1..5).
double recovery_fidelity(const Eigen::MatrixXcd& V, const Eigen::MatrixXcd& V0);

// Runs one noise realization of the configured protocol at pulse level:
// encode, n_cycles measurement cycles, decode.  zeno replaces every
// measurement by a postselected zero-outcome projection; qec samples
// outcomes, resets the ancilla, and applies table corrections through the
// trigger window; dd_only runs the identical pulse schedule with the
// measurements ignored; free_evolution drops all pulses and compares
// against the deterministic coupling phases.
MetricsTrace run_protocol(const RunConfig& cfg);

// Pointwise ensemble average plus matched DD-only companions (same noise
// streams).  With exclusion on, records inside a trigger window are left
// out of the mean at their index.
struct EnsembleRecord {
    double t = 0.0;
    int gen = 0;
    double F_b = 0.0, F_a = 0.0, Fp_b = 0.0, Fp_a = 0.0;
    double F_d = 0.0, Fp_d = 0.0;  // DD-only companions at the same marker
    int n = 0;                     // realizations contributing after exclusion
};

struct EnsembleTrace {
    std::vector<EnsembleRecord> records;
    double F_full = 0.0, F_single = 0.0, Fp_end = 0.0;
    double F_full_d = 0.0, F_single_d = 0.0, Fp_end_d = 0.0;
    double sp_final = 1.0, F_succ = 0.0;
    int n_realizations = 0;
    bool exclusion = false;
    std::vector<MetricsTrace> runs;      // per-realization traces (protocol)
    std::vector<MetricsTrace> dd_runs;   // matched companions
};

EnsembleTrace run_ensemble(const RunConfig& cfg, int n_realizations, bool exclusion,
                           int n_jobs = 0, bool with_dd_companion = true);

// CSV emission; columns per row:
// realization,t,kind,F_b,F_a,Fp_b,Fp_a,outcome,trigger
void write_trace_csv(const MetricsTrace& trace, int realization, std::ostream& out,
                     bool header = true);
void write_ensemble_csv(const EnsembleTrace& ens, std::ostream& out);

const char* mode_name(RunMode mode);
RunMode mode_from_name(const std::string& name);

}  // namespace starq
