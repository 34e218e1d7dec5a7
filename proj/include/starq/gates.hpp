#pragma once

#include <Eigen/Core>
#include <set>
#include <string>
#include <vector>

#include "starq/schedule.hpp"

namespace starq {

class compile_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

enum class GateKind { rot, hadamard, cnot, cy, cz, swap_g };

struct GateSpec {
    GateKind kind = GateKind::rot;
    int q1 = 0;          // rotation/Hadamard target, or two-qubit control/first operand
    int q2 = 0;          // two-qubit target/second operand
    Axis axis = Axis::x;  // rot only
    double angle = 0.0;   // rot only
    int n_rep = 5;        // ZZ-core repetitions for two-qubit gates
};

// A layer is either a marker (measure-and-reset on one qubit) or a set of
// gates executed in the same time window: any number of mutually
// non-adjacent single-qubit gates, or exactly one two-qubit gate.
struct Layer {
    std::vector<GateSpec> gates;
    bool is_marker = false;
    int marker_qubit = 0;
    int marker_tag = 0;
};

struct Circuit {
    std::vector<Layer> layers;
};

Layer marker_layer(int qubit, int tag);

// Individual gate schedules.  Every window decouples the whole graph: idle
// qubits run their sublattice's pi_x pattern.
PulseSchedule rotation_gate(const QubitGraph& g, int qubit, Axis axis, double angle,
                            const ShapeLibrary& lib);
PulseSchedule hadamard_gate(const QubitGraph& g, const std::set<int>& qubits,
                            const ShapeLibrary& lib);
PulseSchedule cnot_gate(const QubitGraph& g, int control, int target, int n_rep,
                        const ShapeLibrary& lib);
PulseSchedule cz_gate(const QubitGraph& g, int j, int k, int n_rep, const ShapeLibrary& lib);
PulseSchedule cy_gate(const QubitGraph& g, int j, int k, int n_rep, const ShapeLibrary& lib);
PulseSchedule swap_gate(const QubitGraph& g, int j, int k, int n_rep, const ShapeLibrary& lib);

// Concatenates the layer schedules; markers become timestamped entries in
// the compiled schedule.
PulseSchedule compile(const Circuit& circuit, const QubitGraph& g, const ShapeLibrary& lib);

// Exact textbook unitaries embedded in 2^n dimensions (markers skipped).
Eigen::MatrixXcd ideal_unitary(const GateSpec& gate, int n);
Eigen::MatrixXcd ideal_unitary(const Circuit& circuit, int n);

// One layer per line, gate tokens separated by " | ", markers as "M q tag".
std::string circuit_to_text(const Circuit& circuit);

}  // namespace starq
