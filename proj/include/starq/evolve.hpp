#pragma once

#include <Eigen/Core>
#include <vector>

#include "starq/hamiltonian.hpp"
#include "starq/rng.hpp"

namespace starq {

class degenerate_branch_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Reduced evolution matrix: the 2^n x M slice of the full propagator acting
// on the M-dimensional input subspace.  Columns start as orthonormal basis
// vectors; norm_log accumulates log renormalization factors applied by
// projections in renormalize mode.
struct ReducedEvolution {
    int n_qubits = 0;
    Eigen::MatrixXcd V;
    double t = 0.0;
    double norm_log = 0.0;

    static ReducedEvolution basis_columns(int n_qubits,
                                          const std::vector<Eigen::Index>& indices);
    // (1/M) Tr(V' V); 1 for unitary evolution of orthonormal columns
    double mean_norm() const;
};

enum class ProjectMode { postselect, renormalize };

// Fixed-step propagation at steps_per_tau_p (power of two >= 256).  Both
// routines advance V from V.t to t_end under H(t) from the context; t and
// t_end must be integer multiples of tau_p.
//
// The drive terms commute among themselves at all times (fixed axis per
// placement, one placement per qubit at a time), so their propagator R(t)
// is evaluated exactly from the closed-form pulse phase integral.  The
// integrators step the interaction-picture residual i W' = R'DR W with RK4,
// where D is the small diagonal part (Ising couplings + noise fields); the
// large pulse rotations therefore carry no time-stepping error at all.
//
// `integrate` is the production kernel: per-tau_p-slot rotation lookup
// tables on the half-step grid, incremental diagonal assembly, and exact
// diagonal propagation through pulse-free slots.
// `integrate_reference` evaluates the pulse phases and the diagonal
// directly at every stage; it is the serial implementation the kernel is
// tested and benchmarked against.
void integrate(ReducedEvolution& V, const HamiltonianContext& ctx, double t_end,
               int steps_per_tau_p);
void integrate_reference(ReducedEvolution& V, const HamiltonianContext& ctx, double t_end,
                         int steps_per_tau_p);

// Projection onto the given z outcome of one qubit.  Returns the averaged
// branch probability (1/M) Tr(V' P V) computed before modification.
// postselect: V <- P V (unnormalized); renormalize: V <- P V / sqrt(prob).
double project(ReducedEvolution& V, int qubit, int outcome, ProjectMode mode);

// Draws the outcome with the averaged branch probabilities, projects in
// renormalize mode; V must be unit-normalized on entry.
int sample_outcome(ReducedEvolution& V, int qubit, RngStream& rng);

// Applies sigma_x on the qubit if the recorded outcome was 1, restoring the
// ancilla to |0>.
void reset_ancilla(ReducedEvolution& V, int qubit, int outcome);

// F = [Tr(V0' V V' V0) + |Tr(V0' V)|^2] / [M(M+1)]; global-phase invariant.
double fidelity(const Eigen::MatrixXcd& V, const Eigen::MatrixXcd& V0);

// Column-averaged single-qubit reduced density matrix of the kept qubit.
Eigen::Matrix2cd reduced_density(const Eigen::MatrixXcd& V, int keep_qubit, int n_qubits);

// State fidelity [Tr sqrt(sqrt(rho) sigma sqrt(rho))]^2 between the kept
// qubit's reduced states of V and V0 (2x2 closed form).
double single_qubit_fidelity(const Eigen::MatrixXcd& V, const Eigen::MatrixXcd& V0,
                             int keep_qubit, int n_qubits);

}  // namespace starq
