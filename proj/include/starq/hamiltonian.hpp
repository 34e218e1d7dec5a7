#pragma once

#include <Eigen/Core>

#include "starq/graph.hpp"
#include "starq/noise.hpp"
#include "starq/schedule.hpp"

namespace starq {

// Everything needed to evaluate H(t): static Ising couplings from the
// graph, the sampled dephasing fields, and the control schedule.  The noise
// grid must cover the schedule duration.
struct HamiltonianContext {
    const QubitGraph* graph = nullptr;
    const NoiseTrace* noise = nullptr;      // may be null (noise off)
    const PulseSchedule* schedule = nullptr;  // may be null (free evolution)
};

// H(t) * columns with
//   H(t) = 1/2 sum_edges J sz_i sz_j + 1/2 sum_i A_i(t) sz_i
//        + 1/2 sum_active V(t) sigma^mu,
// applied term-by-term without assembling the 2^n x 2^n matrix.  Throws
// schedule_error if two adjacent qubits carry overlapping nonzero pulses.
// V(t) is discontinuous where a pulse starts or ends; `left_limit` selects
// which one-sided value an on-grid evaluation returns, so a stepper can use
// the correct limit on each side of the jump.
Eigen::MatrixXcd hamiltonian_apply(const HamiltonianContext& ctx, double t,
                                   const Eigen::MatrixXcd& columns,
                                   bool left_limit = false);

}  // namespace starq
