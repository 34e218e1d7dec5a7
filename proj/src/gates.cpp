#include "starq/gates.hpp"

#include <cmath>
#include <complex>
#include <map>
#include <sstream>

namespace starq {

namespace {

using cd = std::complex<double>;

void check_design_equation(const QubitGraph& g, int n_rep) {
    if (std::abs(double(n_rep) * g.J - M_PI / 16.0) > 1e-12)
        throw compile_error("two-qubit gate requires n_rep * J * tau_p = pi/16");
}

PulseSchedule rotation_window(const QubitGraph& g,
                              const std::map<int, std::pair<Axis, double>>& rotations,
                              const ShapeLibrary& lib) {
    return build_single_qubit_gate(g, rotations, lib);
}

PulseSchedule zz_core(const QubitGraph& g, int j, int k, int n_rep, const ShapeLibrary& lib) {
    PulseSchedule core;
    PulseSchedule rep = build_zz_sequence(g, {{j, k}}, 0.5, lib);
    for (int r = 0; r < n_rep; ++r) append_schedule(core, rep);
    return core;
}

}  // namespace

Layer marker_layer(int qubit, int tag) {
    Layer l;
    l.is_marker = true;
    l.marker_qubit = qubit;
    l.marker_tag = tag;
    return l;
}

PulseSchedule rotation_gate(const QubitGraph& g, int qubit, Axis axis, double angle,
                            const ShapeLibrary& lib) {
    if (angle <= -2.0 * M_PI || angle > 2.0 * M_PI)
        throw compile_error("rotation_gate: angle out of (-2pi, 2pi]");
    PulseSchedule s = rotation_window(g, {{qubit, {axis, angle}}}, lib);
    s.label = "rot";
    return s;
}

PulseSchedule hadamard_gate(const QubitGraph& g, const std::set<int>& qubits,
                            const ShapeLibrary& lib) {
    // H = R_x(pi) R_y(pi/2) up to a global phase; R_y first in time
    std::map<int, std::pair<Axis, double>> ry, rx;
    for (int q : qubits) {
        ry[q] = {Axis::y, M_PI / 2};
        rx[q] = {Axis::x, M_PI};
    }
    PulseSchedule s = rotation_window(g, ry, lib);
    append_schedule(s, rotation_window(g, rx, lib));
    s.label = "hadamard";
    return s;
}

PulseSchedule cnot_gate(const QubitGraph& g, int control, int target, int n_rep,
                        const ShapeLibrary& lib) {
    if (!g.adjacent(control, target)) throw compile_error("cnot_gate: operands not adjacent");
    check_design_equation(g, n_rep);
    // CNOT = e^{-i pi/4} Rz_c(pi/2) Rx_t(pi/2) Ry_t(-pi/2) ZZ(pi/4) Ry_t(pi/2)
    PulseSchedule s = rotation_window(g, {{target, {Axis::y, M_PI / 2}}}, lib);
    append_schedule(s, zz_core(g, control, target, n_rep, lib));
    append_schedule(s, rotation_window(g, {{target, {Axis::y, -M_PI / 2}}}, lib));
    append_schedule(s, rotation_window(g, {{target, {Axis::x, M_PI / 2}}}, lib));
    append_schedule(s, rotation_window(g, {{control, {Axis::z, M_PI / 2}}}, lib));
    s.label = "cnot";
    return s;
}

PulseSchedule cz_gate(const QubitGraph& g, int j, int k, int n_rep, const ShapeLibrary& lib) {
    if (!g.adjacent(j, k)) throw compile_error("cz_gate: operands not adjacent");
    check_design_equation(g, n_rep);
    // CZ = e^{-i pi/4} Rz_j(-pi/2) Rz_k(-pi/2) ZZ(pi/4); two idle windows
    // pad the duration to match the other two-qubit gates
    PulseSchedule s = zz_core(g, j, k, n_rep, lib);
    append_schedule(s, rotation_window(g, {{j, {Axis::z, -M_PI / 2}}}, lib));
    append_schedule(s, rotation_window(g, {{k, {Axis::z, -M_PI / 2}}}, lib));
    append_schedule(s, rotation_window(g, {}, lib));
    append_schedule(s, rotation_window(g, {}, lib));
    s.label = "cz";
    return s;
}

PulseSchedule cy_gate(const QubitGraph& g, int j, int k, int n_rep, const ShapeLibrary& lib) {
    if (!g.adjacent(j, k)) throw compile_error("cy_gate: operands not adjacent");
    check_design_equation(g, n_rep);
    // CY = e^{-i pi/4} Rx_k(-pi/2) Rz_j(-pi/2) Rz_k(-pi/2) ZZ(pi/4) Rx_k(pi/2)
    PulseSchedule s = rotation_window(g, {{k, {Axis::x, M_PI / 2}}}, lib);
    append_schedule(s, zz_core(g, j, k, n_rep, lib));
    append_schedule(s, rotation_window(g, {{k, {Axis::z, -M_PI / 2}}}, lib));
    append_schedule(s, rotation_window(g, {{j, {Axis::z, -M_PI / 2}}}, lib));
    append_schedule(s, rotation_window(g, {{k, {Axis::x, -M_PI / 2}}}, lib));
    s.label = "cy";
    return s;
}

PulseSchedule swap_gate(const QubitGraph& g, int j, int k, int n_rep, const ShapeLibrary& lib) {
    PulseSchedule s = cnot_gate(g, j, k, n_rep, lib);
    append_schedule(s, cnot_gate(g, k, j, n_rep, lib));
    append_schedule(s, cnot_gate(g, j, k, n_rep, lib));
    s.label = "swap";
    return s;
}

PulseSchedule compile(const Circuit& circuit, const QubitGraph& g, const ShapeLibrary& lib) {
    PulseSchedule out;
    out.label = "circuit";
    for (const auto& layer : circuit.layers) {
        if (layer.is_marker) {
            out.markers.push_back({out.total_duration, layer.marker_qubit, layer.marker_tag});
            continue;
        }
        if (layer.gates.empty()) {
            append_schedule(out, build_single_qubit_gate(g, {}, lib));
            continue;
        }
        bool all_single = true, all_had = true;
        for (const auto& gs : layer.gates) {
            if (gs.kind != GateKind::rot) all_single = false;
            if (gs.kind != GateKind::hadamard) all_had = false;
        }
        if (all_single) {
            std::map<int, std::pair<Axis, double>> rot;
            for (const auto& gs : layer.gates) {
                if (rot.count(gs.q1)) throw compile_error("compile: duplicate target in layer");
                rot[gs.q1] = {gs.axis, gs.angle};
            }
            append_schedule(out, build_single_qubit_gate(g, rot, lib));
        } else if (all_had) {
            std::set<int> qs;
            for (const auto& gs : layer.gates) qs.insert(gs.q1);
            if (qs.size() != layer.gates.size())
                throw compile_error("compile: duplicate target in layer");
            append_schedule(out, hadamard_gate(g, qs, lib));
        } else if (layer.gates.size() == 1) {
            const auto& gs = layer.gates[0];
            switch (gs.kind) {
                case GateKind::cnot:
                    append_schedule(out, cnot_gate(g, gs.q1, gs.q2, gs.n_rep, lib));
                    break;
                case GateKind::cy:
                    append_schedule(out, cy_gate(g, gs.q1, gs.q2, gs.n_rep, lib));
                    break;
                case GateKind::cz:
                    append_schedule(out, cz_gate(g, gs.q1, gs.q2, gs.n_rep, lib));
                    break;
                case GateKind::swap_g:
                    append_schedule(out, swap_gate(g, gs.q1, gs.q2, gs.n_rep, lib));
                    break;
                default:
                    throw compile_error("compile: unsupported layer");
            }
        } else {
            throw compile_error("compile: mixed or multi-two-qubit layer");
        }
    }
    return out;
}

namespace {

Eigen::Matrix2cd rot2(Axis axis, double angle) {
    const double c = std::cos(angle / 2), s = std::sin(angle / 2);
    Eigen::Matrix2cd m;
    switch (axis) {
        case Axis::x:
            m << cd(c, 0), cd(0, -s), cd(0, -s), cd(c, 0);
            break;
        case Axis::y:
            m << cd(c, 0), cd(-s, 0), cd(s, 0), cd(c, 0);
            break;
        case Axis::z:
            m << cd(c, -s), cd(0, 0), cd(0, 0), cd(c, s);
            break;
    }
    return m;
}

Eigen::MatrixXcd embed1(const Eigen::Matrix2cd& u, int qubit, int n) {
    const Eigen::Index dim = Eigen::Index(1) << n;
    const Eigen::Index bit = Eigen::Index(1) << (qubit - 1);
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
    for (Eigen::Index b = 0; b < dim; ++b) {
        int zb = (b & bit) ? 1 : 0;
        out(b, b) = u(zb, zb);
        out(b ^ bit, b) = u(1 - zb, zb);
    }
    return out;
}

}  // namespace

Eigen::MatrixXcd ideal_unitary(const GateSpec& gate, int n) {
    const Eigen::Index dim = Eigen::Index(1) << n;
    const auto bit = [&](int q) { return Eigen::Index(1) << (q - 1); };
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
    switch (gate.kind) {
        case GateKind::rot:
            return embed1(rot2(gate.axis, gate.angle), gate.q1, n);
        case GateKind::hadamard: {
            Eigen::Matrix2cd h;
            h << 1, 1, 1, -1;
            return embed1(h / std::sqrt(2.0), gate.q1, n);
        }
        case GateKind::cnot:
            for (Eigen::Index b = 0; b < dim; ++b)
                out((b & bit(gate.q1)) ? b ^ bit(gate.q2) : b, b) = 1.0;
            return out;
        case GateKind::cz:
            for (Eigen::Index b = 0; b < dim; ++b)
                out(b, b) = ((b & bit(gate.q1)) && (b & bit(gate.q2))) ? -1.0 : 1.0;
            return out;
        case GateKind::cy:
            for (Eigen::Index b = 0; b < dim; ++b) {
                if (b & bit(gate.q1)) {
                    // sigma_y on target: |0> -> i|1>, |1> -> -i|0>
                    cd f = (b & bit(gate.q2)) ? cd(0, -1) : cd(0, 1);
                    out(b ^ bit(gate.q2), b) = f;
                } else {
                    out(b, b) = 1.0;
                }
            }
            return out;
        case GateKind::swap_g:
            for (Eigen::Index b = 0; b < dim; ++b) {
                int z1 = (b & bit(gate.q1)) ? 1 : 0;
                int z2 = (b & bit(gate.q2)) ? 1 : 0;
                Eigen::Index o = b & ~(bit(gate.q1) | bit(gate.q2));
                if (z2) o |= bit(gate.q1);
                if (z1) o |= bit(gate.q2);
                out(o, b) = 1.0;
            }
            return out;
    }
    throw compile_error("ideal_unitary: unknown gate");
}

Eigen::MatrixXcd ideal_unitary(const Circuit& circuit, int n) {
    const Eigen::Index dim = Eigen::Index(1) << n;
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(dim, dim);
    for (const auto& layer : circuit.layers) {
        if (layer.is_marker) continue;
        for (const auto& gs : layer.gates) u = ideal_unitary(gs, n) * u;
    }
    return u;
}

std::string circuit_to_text(const Circuit& circuit) {
    std::ostringstream out;
    for (const auto& layer : circuit.layers) {
        if (layer.is_marker) {
            out << "M " << layer.marker_qubit << ' ' << layer.marker_tag << '\n';
            continue;
        }
        bool first = true;
        for (const auto& gs : layer.gates) {
            if (!first) out << " | ";
            first = false;
            switch (gs.kind) {
                case GateKind::rot:
                    out << "rot(" << gs.q1 << ',' << axis_char(gs.axis) << ',' << gs.angle << ')';
                    break;
                case GateKind::hadamard:
                    out << "h(" << gs.q1 << ')';
                    break;
                case GateKind::cnot:
                    out << "cnot(" << gs.q1 << ',' << gs.q2 << ')';
                    break;
                case GateKind::cy:
                    out << "cy(" << gs.q1 << ',' << gs.q2 << ')';
                    break;
                case GateKind::cz:
                    out << "cz(" << gs.q1 << ',' << gs.q2 << ')';
                    break;
                case GateKind::swap_g:
                    out << "swap(" << gs.q1 << ',' << gs.q2 << ')';
                    break;
            }
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace starq
