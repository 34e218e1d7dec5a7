#include "starq/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace starq {

char axis_char(Axis a) {
    switch (a) {
        case Axis::x: return 'x';
        case Axis::y: return 'y';
        case Axis::z: return 'z';
    }
    return '?';
}

void append_schedule(PulseSchedule& dst, const PulseSchedule& src) {
    const double t0 = dst.total_duration;
    for (PulsePlacement p : src.placements) {
        p.start += t0;
        dst.placements.push_back(std::move(p));
    }
    for (Marker m : src.markers) {
        m.t += t0;
        dst.markers.push_back(m);
    }
    dst.total_duration += src.total_duration;
}

std::string schedule_to_text(const PulseSchedule& s) {
    std::ostringstream out;
    out << "# " << s.label << " duration " << s.total_duration << "\n";
    std::vector<PulsePlacement> sorted = s.placements;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const PulsePlacement& a, const PulsePlacement& b) {
                         if (a.start != b.start) return a.start < b.start;
                         return a.qubit < b.qubit;
                     });
    for (const auto& p : sorted)
        out << p.qubit << ' ' << axis_char(p.axis) << ' ' << (p.sign < 0 ? '-' : '+') << ' '
            << p.shape.name << ' ' << p.start << ' ' << p.duration << '\n';
    for (const auto& m : s.markers) out << "M " << m.qubit << ' ' << m.tag << ' ' << m.t << '\n';
    return out.str();
}

std::pair<const PulseShape*, double> shape_for_angle(const ShapeLibrary& lib, double angle) {
    const double a = std::abs(angle);
    const double sign = angle < 0 ? -1.0 : 1.0;
    if (a < 1e-15) return {&lib.get("zero"), 1.0};
    if (std::abs(a - M_PI) < 1e-12) return {&lib.get("sr2_pi"), sign};
    if (std::abs(a - M_PI / 2) < 1e-12) return {&lib.get("sr2_half_pi"), sign};
    throw schedule_error("shape_for_angle: unsupported angle (need 0, +-pi/2, +-pi)");
}

namespace {

// pi_x slot assignments inside the 16-slot single-qubit gate window; the
// two sublattices interleave so neighbors never pulse together, and each
// pattern has a vanishing toggling average on its own and against the
// other.
constexpr int kGateSlotsA[4] = {2, 4, 9, 15};
constexpr int kGateSlotsB[4] = {3, 5, 6, 12};
// composite-identity windows shared by both sublattices (targets only)
constexpr int kCompositeStarts[3] = {7, 10, 13};

}  // namespace

PulseSchedule build_single_qubit_gate(const QubitGraph& g,
                                      const std::map<int, std::pair<Axis, double>>& rotations,
                                      const ShapeLibrary& lib) {
    for (auto it = rotations.begin(); it != rotations.end(); ++it) {
        if (it->first < 1 || it->first > g.n)
            throw schedule_error("build_single_qubit_gate: qubit out of range");
        for (auto jt = std::next(it); jt != rotations.end(); ++jt)
            if (it->second.second != 0.0 && jt->second.second != 0.0 &&
                g.adjacent(it->first, jt->first))
                throw schedule_error("build_single_qubit_gate: adjacent rotation targets");
    }

    PulseSchedule s;
    s.total_duration = 16.0;
    s.label = "gate1q";
    const PulseShape& pi_x = lib.get("sr2_pi");

    for (int q = 1; q <= g.n; ++q) {
        const int* slots = g.sublattice[std::size_t(q)] == 0 ? kGateSlotsA : kGateSlotsB;
        for (int i = 0; i < 4; ++i)
            s.placements.push_back({q, Axis::x, pi_x, 1.0, double(slots[i]), 1.0, Role::dd_pi});

        auto it = rotations.find(q);
        if (it == rotations.end() || it->second.second == 0.0) continue;
        auto [shape, sign] = shape_for_angle(lib, it->second.second);
        const Axis axis = it->second.first;
        // stretched rotation pulse P on [0,2)
        s.placements.push_back({q, axis, *shape, sign, 0.0, 2.0, Role::rotation});
        // composite identities: half-time double-amplitude P, then reversed
        for (int w : kCompositeStarts) {
            s.placements.push_back({q, axis, *shape, sign, double(w), 1.0, Role::composite});
            s.placements.push_back({q, axis, *shape, -sign, double(w + 1), 1.0, Role::composite});
        }
    }
    return s;
}

PulseSchedule build_zz_sequence(const QubitGraph& g,
                                const std::vector<std::pair<int, int>>& coupled_pairs,
                                double f, const ShapeLibrary& lib) {
    if (f != 0.5) throw schedule_error("build_zz_sequence: only f = 1/2 supported");
    std::vector<int> paired;
    for (auto [i, j] : coupled_pairs) {
        if (!g.adjacent(i, j)) throw schedule_error("build_zz_sequence: pair is not an edge");
        for (int q : {i, j}) {
            if (std::find(paired.begin(), paired.end(), q) != paired.end())
                throw schedule_error("build_zz_sequence: pairs not disjoint");
            paired.push_back(q);
        }
    }

    PulseSchedule s;
    s.total_duration = 16.0;
    s.label = "zz_seq";
    const PulseShape& pi_x = lib.get("sr2_pi");

    for (int q = 1; q <= g.n; ++q) {
        bool coupled = std::find(paired.begin(), paired.end(), q) != paired.end();
        std::vector<int> slots;
        if (g.sublattice[std::size_t(q)] == 1)
            slots = {3, 11};  // B pattern keeps <s>=0 whether coupled or idle
        else if (coupled)
            slots = {1, 9};  // overlap with the B pattern is f = 1/2
        else
            slots = {1, 5, 9, 13};  // idle A pattern, orthogonal to B
        for (int k : slots)
            s.placements.push_back({q, Axis::x, pi_x, 1.0, double(k), 1.0, Role::dd_pi});
    }
    return s;
}

double TogglingProfile::sign_at(int q, double t) const {
    const auto& fl = flips_half[std::size_t(q)];
    int th = int(std::lround(2.0 * t));
    int c = 0;
    for (int f : fl)
        if (f <= th) ++c;
    return c % 2 ? -1.0 : 1.0;
}

namespace {

// integral of the product of sign functions over [0, total] in tau_p/2
// units, exact integer arithmetic
long long signed_area(const std::vector<int>& fa, const std::vector<int>& fb, int total) {
    std::vector<int> cuts{0, total};
    cuts.insert(cuts.end(), fa.begin(), fa.end());
    cuts.insert(cuts.end(), fb.begin(), fb.end());
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    long long area = 0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        int t = cuts[i];
        auto parity = [&](const std::vector<int>& f) {
            return int(std::count_if(f.begin(), f.end(), [&](int x) { return x <= t; })) % 2;
        };
        int sign = (parity(fa) + parity(fb)) % 2 ? -1 : 1;
        area += (long long)sign * (cuts[i + 1] - cuts[i]);
    }
    return area;
}

}  // namespace

double TogglingProfile::avg_s(int q) const {
    return double(signed_area(flips_half[std::size_t(q)], {}, total_half)) / total_half;
}

double TogglingProfile::avg_ss(int i, int j) const {
    return double(signed_area(flips_half[std::size_t(i)], flips_half[std::size_t(j)],
                              total_half)) /
           total_half;
}

TogglingProfile toggling_profile(const PulseSchedule& s, int n_qubits) {
    TogglingProfile p;
    p.total_half = int(std::lround(2.0 * s.total_duration));
    p.flips_half.assign(std::size_t(n_qubits) + 1, {});
    for (const auto& pl : s.placements) {
        if (pl.role != Role::dd_pi) continue;
        if (pl.axis == Axis::z)
            throw profile_error("toggling_profile: z-axis pulse in decoupling role");
        if (std::abs(std::abs(pl.shape.nominal_angle) - M_PI) > 1e-9)
            throw profile_error("toggling_profile: decoupling pulse is not a pi pulse");
        p.flips_half[std::size_t(pl.qubit)].push_back(
            int(std::lround(2.0 * (pl.start + 0.5 * pl.duration))));
    }
    for (auto& f : p.flips_half) std::sort(f.begin(), f.end());
    return p;
}

ValidationReport validate_schedule(const PulseSchedule& s, const QubitGraph& g,
                                   const DecouplingTargets& targets) {
    ValidationReport rep;
    auto fail = [&](const std::string& m) {
        rep.pass = false;
        rep.failures.push_back(m);
    };

    for (const auto& p : s.placements) {
        double st = p.start;
        if (std::abs(st - std::round(st)) > 1e-12)
            fail("placement start not aligned to tau_p grid");
        if (p.duration != 1.0 && p.duration != 2.0) fail("placement duration not 1 or 2 tau_p");
        if (p.start + p.duration > s.total_duration + 1e-12)
            fail("placement extends past schedule end");
    }

    // adjacency: nonzero pulses on neighboring qubits must not overlap
    for (std::size_t i = 0; i < s.placements.size(); ++i) {
        const auto& a = s.placements[i];
        if (a.shape.is_zero()) continue;
        for (std::size_t j = i + 1; j < s.placements.size(); ++j) {
            const auto& b = s.placements[j];
            if (b.shape.is_zero()) continue;
            if (a.qubit == b.qubit) {
                if (a.start < b.start + b.duration && b.start < a.start + a.duration)
                    fail("overlapping pulses on one qubit");
            } else if (g.adjacent(a.qubit, b.qubit)) {
                if (a.start < b.start + b.duration && b.start < a.start + a.duration)
                    fail("simultaneous pulses on adjacent qubits");
            }
        }
    }

    // averages are exact rationals; the tolerance only absorbs the final
    // double rounding of numerator/denominator
    const double tol = 1e-12;
    TogglingProfile prof = toggling_profile(s, g.n);
    for (int q = 1; q <= g.n; ++q) {
        double m = prof.avg_s(q);
        if (std::abs(m) > tol) {
            std::ostringstream msg;
            msg << "<s_" << q << "> = " << m << " (want 0)";
            fail(msg.str());
        }
    }
    for (const auto& e : g.edges) {
        auto it = targets.pair_avg.find(e);
        double want = it == targets.pair_avg.end() ? 0.0 : it->second;
        double got = prof.avg_ss(e.first, e.second);
        if (std::abs(got - want) > tol) {
            std::ostringstream msg;
            msg << "<s_" << e.first << " s_" << e.second << "> = " << got << " (want " << want
                << ", residual " << std::abs(got - want) << ")";
            fail(msg.str());
        }
    }
    return rep;
}

}  // namespace starq
