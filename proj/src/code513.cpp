#include "starq/code513.hpp"

#include <complex>
#include <stdexcept>

namespace starq {

namespace {

using cd = std::complex<double>;

int symbol_index(char c) {
    switch (c) {
        case 'I': return 0;
        case 'X': return 1;
        case 'Y': return 2;
        case 'Z': return 3;
    }
    throw std::invalid_argument("PauliString: bad symbol");
}

// single-site products: P_a * P_b = i^phase * P_c
constexpr char kProd[4][4] = {{'I', 'X', 'Y', 'Z'},
                              {'X', 'I', 'Z', 'Y'},
                              {'Y', 'Z', 'I', 'X'},
                              {'Z', 'Y', 'X', 'I'}};
constexpr int kProdPhase[4][4] = {{0, 0, 0, 0},
                                  {0, 0, 1, 3},
                                  {0, 3, 0, 1},
                                  {0, 1, 3, 0}};

const cd kI(0.0, 1.0);

}  // namespace

int PauliString::weight() const {
    int w = 0;
    for (char c : ops)
        if (c != 'I') ++w;
    return w;
}

bool PauliString::commutes_with(const PauliString& other) const {
    int anti = 0;
    const std::size_t m = std::min(ops.size(), other.ops.size());
    for (std::size_t k = 0; k < m; ++k)
        if (ops[k] != 'I' && other.ops[k] != 'I' && ops[k] != other.ops[k]) ++anti;
    return anti % 2 == 0;
}

PauliString PauliString::operator*(const PauliString& other) const {
    PauliString out;
    const std::size_t m = std::max(ops.size(), other.ops.size());
    out.ops.assign(m, 'I');
    out.phase_k = (phase_k + other.phase_k) % 4;
    for (std::size_t k = 0; k < m; ++k) {
        int a = k < ops.size() ? symbol_index(ops[k]) : 0;
        int b = k < other.ops.size() ? symbol_index(other.ops[k]) : 0;
        out.ops[k] = kProd[a][b];
        out.phase_k = (out.phase_k + kProdPhase[a][b]) % 4;
    }
    return out;
}

Eigen::MatrixXcd PauliString::apply(const Eigen::MatrixXcd& columns, int n_total) const {
    if (n() > n_total) throw std::invalid_argument("PauliString::apply: operator too long");
    const Eigen::Index dim = Eigen::Index(1) << n_total;
    if (columns.rows() != dim)
        throw std::invalid_argument("PauliString::apply: dimension mismatch");

    Eigen::Index xmask = 0;
    for (int k = 0; k < n(); ++k)
        if (ops[std::size_t(k)] == 'X' || ops[std::size_t(k)] == 'Y')
            xmask |= Eigen::Index(1) << k;

    cd base(1.0, 0.0);
    for (int p = 0; p < (phase_k % 4 + 4) % 4; ++p) base *= kI;

    Eigen::MatrixXcd out(columns.rows(), columns.cols());
    for (Eigen::Index b = 0; b < dim; ++b) {
        cd f = base;
        for (int k = 0; k < n(); ++k) {
            const bool bit = (b >> k) & 1;
            switch (ops[std::size_t(k)]) {
                case 'Y': f *= bit ? -kI : kI;  // sigma_y |1> = -i|0>, |0> = i|1>
                    break;
                case 'Z':
                    if (bit) f = -f;
                    break;
                default: break;
            }
        }
        out.row(b ^ xmask) = f * columns.row(b);
    }
    return out;
}

std::array<PauliString, 4> generators() {
    return {PauliString{"XZZXI", 0}, PauliString{"IXZZX", 0}, PauliString{"XIXZZ", 0},
            PauliString{"ZXIXZ", 0}};
}

PauliString logical_x() { return PauliString{"XXXXX", 2}; }  // i^2 = -1
PauliString logical_z() { return PauliString{"ZZZZZ", 0}; }

namespace {

void add_term(Eigen::VectorXcd& v, const char* bits, int last, double coeff) {
    Eigen::Index idx = 0;
    for (int k = 0; k < 4; ++k)
        if (bits[k] == '1') idx |= Eigen::Index(1) << k;
    if (last) idx |= Eigen::Index(1) << 4;
    v(idx) += coeff;
}

}  // namespace

std::pair<Eigen::VectorXcd, Eigen::VectorXcd> logical_states() {
    std::pair<Eigen::VectorXcd, Eigen::VectorXcd> out{Eigen::VectorXcd::Zero(32),
                                                      Eigen::VectorXcd::Zero(32)};
    for (int m = 0; m < 2; ++m) {
        Eigen::VectorXcd& v = m ? out.second : out.first;
        const int mb = 1 - m;
        const double s = m ? 1.0 : -1.0;  // -(-1)^m
        add_term(v, "0000", m, 0.25);
        add_term(v, "0110", m, -0.25);
        add_term(v, "1001", m, 0.25);
        add_term(v, "1111", m, -0.25);
        add_term(v, "0010", mb, 0.25);
        add_term(v, "0100", mb, 0.25);
        add_term(v, "1101", mb, -0.25);
        add_term(v, "1011", mb, -0.25);
        add_term(v, "0001", mb, s * 0.25);
        add_term(v, "1110", mb, s * 0.25);
        add_term(v, "0111", mb, s * 0.25);
        add_term(v, "1000", mb, s * 0.25);
        add_term(v, "0011", m, s * 0.25);
        add_term(v, "0101", m, -s * 0.25);
        add_term(v, "1010", m, -s * 0.25);
        add_term(v, "1100", m, s * 0.25);
    }
    return out;
}

namespace {

Layer gate1(GateKind kind, int q1, int q2 = 0) {
    Layer l;
    GateSpec g;
    g.kind = kind;
    g.q1 = q1;
    g.q2 = q2;
    l.gates.push_back(g);
    return l;
}

Layer hadamards(std::initializer_list<int> qs) {
    Layer l;
    for (int q : qs) {
        GateSpec g;
        g.kind = GateKind::hadamard;
        g.q1 = q;
        l.gates.push_back(g);
    }
    return l;
}

}  // namespace

Circuit encoding_circuit(Layout layout) {
    Circuit c;
    if (layout == Layout::conceptual) {
        // five qubits, information qubit at position 5: Hadamard on 5, CNOT
        // fan 5 -> 1..4, Hadamards on all, controlled-phase pentagon
        c.layers.push_back(hadamards({5}));
        for (int t : {1, 2, 3, 4}) c.layers.push_back(gate1(GateKind::cnot, 5, t));
        c.layers.push_back(hadamards({1, 2, 3, 4, 5}));
        for (auto [a, b] : {std::pair{1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 1}})
            c.layers.push_back(gate1(GateKind::cz, a, b));
        return c;
    }
    // star layout: center (qubit 6) initially holds the information qubit,
    // code qubits assigned leaf1=1, leaf5=2, leaf2=3, leaf4=4, leaf3 is the
    // ancilla.  The SWAPs walk the pentagon's controlled-phase chain through
    // the center and finish with the ancilla back there.
    c.layers.push_back(hadamards({6}));
    for (int t : {1, 5, 2, 4}) c.layers.push_back(gate1(GateKind::cnot, 6, t));
    c.layers.push_back(hadamards({1, 5, 2, 4}));
    c.layers.push_back(hadamards({6}));
    c.layers.push_back(gate1(GateKind::cz, 6, 4));
    c.layers.push_back(gate1(GateKind::cz, 6, 1));
    c.layers.push_back(gate1(GateKind::swap_g, 6, 5));
    c.layers.push_back(gate1(GateKind::cz, 6, 1));
    c.layers.push_back(gate1(GateKind::cz, 6, 2));
    c.layers.push_back(gate1(GateKind::swap_g, 6, 2));
    c.layers.push_back(gate1(GateKind::cz, 6, 4));
    c.layers.push_back(gate1(GateKind::swap_g, 6, 3));
    return c;
}

Circuit decoding_circuit() {
    Circuit enc = encoding_circuit(Layout::star);
    Circuit dec;
    // every gate in the star circuit is self-inverse
    for (auto it = enc.layers.rbegin(); it != enc.layers.rend(); ++it) dec.layers.push_back(*it);
    return dec;
}

Circuit generator_measurement(int gen) {
    if (gen < 1 || gen > 4) throw std::invalid_argument("generator_measurement: gen in 1..4");
    const PauliString g = generators()[std::size_t(gen - 1)];
    Layer hs;
    std::vector<int> support;
    for (int q = 1; q <= 5; ++q) {
        char c = g.ops[std::size_t(q - 1)];
        if (c == 'I') continue;
        support.push_back(q);
        if (c == 'X') {
            GateSpec gs;
            gs.kind = GateKind::hadamard;
            gs.q1 = q;
            hs.gates.push_back(gs);
        }
    }
    Circuit c;
    c.layers.push_back(hs);
    for (int q : support) c.layers.push_back(gate1(GateKind::cnot, q, 6));
    c.layers.push_back(hs);
    c.layers.push_back(marker_layer(6, gen));
    return c;
}

Circuit measurement_cycle() {
    Circuit c;
    for (int gen = 1; gen <= 4; ++gen) {
        Circuit block = generator_measurement(gen);
        c.layers.insert(c.layers.end(), block.layers.begin(), block.layers.end());
    }
    return c;
}

SyndromeTable syndrome_table() {
    SyndromeTable t;
    for (auto& e : t.entries) e = {0, 'I'};
    const auto gens = generators();
    for (int q = 1; q <= 5; ++q) {
        for (char sym : {'X', 'Y', 'Z'}) {
            PauliString e;
            e.ops.assign(5, 'I');
            e.ops[std::size_t(q - 1)] = sym;
            unsigned syn = 0;
            for (int i = 0; i < 4; ++i)
                if (!e.commutes_with(gens[std::size_t(i)])) syn |= 1u << i;
            if (syn == 0 || t.entries[syn].qubit != 0)
                throw std::logic_error("syndrome_table: syndromes not bijective");
            t.entries[syn] = {q, sym};
        }
    }
    return t;
}

std::array<PauliString, 15> recovery_errors() {
    std::array<PauliString, 15> out;
    std::size_t i = 0;
    for (int q = 1; q <= 5; ++q)
        for (char sym : {'X', 'Y', 'Z'}) {
            out[i].ops.assign(5, 'I');
            out[i].ops[std::size_t(q - 1)] = sym;
            out[i].phase_k = 0;
            ++i;
        }
    return out;
}

}  // namespace starq
