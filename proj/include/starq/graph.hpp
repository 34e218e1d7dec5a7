#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

namespace starq {

class graph_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Coupling graph.  Qubits are 1-based; the basis-state bit for qubit k is
// bit k-1.  Sublattice labels 0 (A) and 1 (B) two-color the graph; every
// edge joins A to B.
struct QubitGraph {
    int n = 0;
    double J = 0.0;                           // uniform coupling, units 1/tau_p
    std::vector<std::pair<int, int>> edges;   // (i, j) with i < j
    std::vector<int> sublattice;              // [1..n], 0 = A, 1 = B

    bool adjacent(int i, int j) const;
    std::vector<int> neighbors(int q) const;
};

// Builds a graph and two-colors it by breadth-first search; throws
// graph_error on an odd cycle or an out-of-range endpoint.
QubitGraph make_graph(int n, std::vector<std::pair<int, int>> edges, double J);

// Center qubit n_leaves+1 on sublattice B adjacent to leaves 1..n_leaves on
// sublattice A.
QubitGraph star_graph(int n_leaves, double J);

}  // namespace starq
