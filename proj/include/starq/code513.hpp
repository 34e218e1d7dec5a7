#pragma once

#include <Eigen/Core>
#include <array>
#include <string>

#include "starq/gates.hpp"

namespace starq {

// Pauli operator as a symbol string with an overall factor i^phase_k.
// ops[k] acts on qubit k+1 (bit k of the basis index).
struct PauliString {
    std::string ops;   // over {I, X, Y, Z}
    int phase_k = 0;   // coefficient i^phase_k, k in 0..3

    int n() const { return int(ops.size()); }
    int weight() const;
    bool commutes_with(const PauliString& other) const;
    PauliString operator*(const PauliString& other) const;

    // acts on columns of dimension 2^n_total, n_total >= n(); qubits above
    // n() are untouched
    Eigen::MatrixXcd apply(const Eigen::MatrixXcd& columns, int n_total) const;
};

// Stabilizer generators XZZXI, IXZZX, XIXZZ, ZXIXZ.
std::array<PauliString, 4> generators();
PauliString logical_x();  // -XXXXX
PauliString logical_z();  // ZZZZZ

// Normalized 32-dim logical basis states: +1 eigenvectors of every
// generator with Z-bar eigenvalue (-1)^m.
std::pair<Eigen::VectorXcd, Eigen::VectorXcd> logical_states();

enum class Layout { conceptual, star };

// Encoding circuits.  The conceptual variant acts on five qubits with the
// information qubit at position 5 (inputs |0000m>).  The star variant acts
// on six qubits with the information qubit at the center (qubit 6, inputs
// leaves |00000> x center |m>) and uses only (leaf, center) two-qubit
// gates; it ends with the ancilla at the center in |0> and code qubit k on
// leaf k.
Circuit encoding_circuit(Layout layout);

// Exact inverse of the star encoding circuit (all its gates are
// self-inverse, so this is the layer-reversed circuit).
Circuit decoding_circuit();

// One syndrome-measurement cycle: for each generator, Hadamards on its
// X-support leaves, four CNOTs (leaf control, center target) over its
// support, undo-Hadamards, then measure-and-reset the center.  640 tau_p
// per generator, 2560 tau_p per cycle.
Circuit measurement_cycle();
// the same block for a single generator (1-based)
Circuit generator_measurement(int gen);

struct SyndromeTable {
    struct Correction {
        int qubit = 0;      // 0 = identity
        char symbol = 'I';
    };
    std::array<Correction, 16> entries;  // indexed by syndrome bits, bit i-1 = G_i outcome

    const Correction& lookup(unsigned syndrome) const { return entries[syndrome & 15u]; }
};

// Built by brute force from anticommutation with the generators; asserts
// the 15 nonzero syndromes map bijectively onto the 15 weight-1 errors.
SyndromeTable syndrome_table();

// The 15 single-qubit errors on the code qubits, X/Y/Z on qubits 1..5.
std::array<PauliString, 15> recovery_errors();

}  // namespace starq
