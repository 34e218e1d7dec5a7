#include "starq/graph.hpp"

#include <complex>
#include <deque>
#include <sstream>

#include "starq/hamiltonian.hpp"

namespace starq {

bool QubitGraph::adjacent(int i, int j) const {
    if (i > j) std::swap(i, j);
    for (const auto& e : edges)
        if (e.first == i && e.second == j) return true;
    return false;
}

std::vector<int> QubitGraph::neighbors(int q) const {
    std::vector<int> out;
    for (const auto& e : edges) {
        if (e.first == q) out.push_back(e.second);
        if (e.second == q) out.push_back(e.first);
    }
    return out;
}

QubitGraph make_graph(int n, std::vector<std::pair<int, int>> edges, double J) {
    QubitGraph g;
    g.n = n;
    g.J = J;
    for (auto& e : edges) {
        if (e.first > e.second) std::swap(e.first, e.second);
        if (e.first < 1 || e.second > n || e.first == e.second)
            throw graph_error("make_graph: bad edge");
    }
    g.edges = std::move(edges);

    // two-coloring by BFS; an odd cycle shows up as a color clash
    g.sublattice.assign(std::size_t(n) + 1, -1);
    for (int root = 1; root <= n; ++root) {
        if (g.sublattice[std::size_t(root)] != -1) continue;
        g.sublattice[std::size_t(root)] = 0;
        std::deque<int> queue{root};
        while (!queue.empty()) {
            int q = queue.front();
            queue.pop_front();
            for (int r : g.neighbors(q)) {
                if (g.sublattice[std::size_t(r)] == -1) {
                    g.sublattice[std::size_t(r)] = 1 - g.sublattice[std::size_t(q)];
                    queue.push_back(r);
                } else if (g.sublattice[std::size_t(r)] == g.sublattice[std::size_t(q)]) {
                    std::ostringstream msg;
                    msg << "make_graph: odd cycle through edge (" << q << "," << r << ")";
                    throw graph_error(msg.str());
                }
            }
        }
    }
    return g;
}

QubitGraph star_graph(int n_leaves, double J) {
    if (n_leaves < 1) throw graph_error("star_graph: need at least one leaf");
    std::vector<std::pair<int, int>> edges;
    for (int l = 1; l <= n_leaves; ++l) edges.emplace_back(l, n_leaves + 1);
    QubitGraph g = make_graph(n_leaves + 1, std::move(edges), J);
    // fixed convention: leaves on A, center on B (BFS from qubit 1 already
    // yields this; assert rather than trust traversal order)
    for (int l = 1; l <= n_leaves; ++l) g.sublattice[std::size_t(l)] = 0;
    g.sublattice[std::size_t(n_leaves + 1)] = 1;
    return g;
}

Eigen::MatrixXcd hamiltonian_apply(const HamiltonianContext& ctx, double t,
                                   const Eigen::MatrixXcd& columns, bool left_limit) {
    const QubitGraph& g = *ctx.graph;
    const Eigen::Index dim = Eigen::Index(1) << g.n;
    if (columns.rows() != dim)
        throw std::invalid_argument("hamiltonian_apply: column dimension mismatch");

    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, columns.cols());

    // diagonal part: Ising couplings + dephasing fields
    for (Eigen::Index b = 0; b < dim; ++b) {
        double d = 0.0;
        for (const auto& e : g.edges) {
            int zi = (b >> (e.first - 1)) & 1 ? -1 : 1;
            int zj = (b >> (e.second - 1)) & 1 ? -1 : 1;
            d += 0.5 * g.J * zi * zj;
        }
        if (ctx.noise)
            for (int q = 1; q <= g.n; ++q) {
                int z = (b >> (q - 1)) & 1 ? -1 : 1;
                d += 0.5 * ctx.noise->value(std::size_t(q - 1), t) * z;
            }
        out.row(b) = d * columns.row(b);
    }

    // control pulses
    if (ctx.schedule) {
        std::vector<int> active_qubit;
        for (const auto& p : ctx.schedule->placements) {
            if (left_limit ? (t <= p.start || t > p.start + p.duration)
                           : (t < p.start || t >= p.start + p.duration))
                continue;
            double v = p.sign * p.shape.amplitude(t - p.start, p.duration);
            if (v == 0.0) continue;
            for (int q : active_qubit)
                if (g.adjacent(q, p.qubit))
                    throw schedule_error("hamiltonian_apply: adjacent qubits pulsed together");
            active_qubit.push_back(p.qubit);

            const Eigen::Index bit = Eigen::Index(1) << (p.qubit - 1);
            const std::complex<double> half(0.5 * v, 0.0);
            for (Eigen::Index b = 0; b < dim; ++b) {
                Eigen::Index flip = b ^ bit;
                switch (p.axis) {
                    case Axis::x:
                        out.row(b) += half * columns.row(flip);
                        break;
                    case Axis::y: {
                        // sigma_y |0> = i|1>, sigma_y |1> = -i|0>
                        std::complex<double> f = (b & bit) ? std::complex<double>(0, 1)
                                                           : std::complex<double>(0, -1);
                        out.row(b) += half * f * columns.row(flip);
                        break;
                    }
                    case Axis::z: {
                        double z = (b & bit) ? -1.0 : 1.0;
                        out.row(b) += half * z * columns.row(b);
                        break;
                    }
                }
            }
        }
    }
    return out;
}

}  // namespace starq
