#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "starq/graph.hpp"
#include "starq/pulse.hpp"

namespace starq {

class schedule_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class profile_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

enum class Axis { x, y, z };

char axis_char(Axis a);

// What a placement is for.  Decoupling pi pulses define the toggling frame;
// rotation pulses (the stretched 2 tau_p slot P) and the halves of the
// composite identity do not.
enum class Role { dd_pi, rotation, composite };

struct PulsePlacement {
    int qubit = 0;
    Axis axis = Axis::x;
    PulseShape shape;
    double sign = 1.0;
    double start = 0.0;     // integer multiple of tau_p
    double duration = 1.0;  // 1 or 2 tau_p
    Role role = Role::dd_pi;
};

// Measure-and-reset point on a qubit; tag identifies the stabilizer
// generator being read out.
struct Marker {
    double t = 0.0;
    int qubit = 0;
    int tag = 0;
};

struct PulseSchedule {
    double total_duration = 0.0;
    std::vector<PulsePlacement> placements;
    std::vector<Marker> markers;
    std::string label;
};

// Appends src at the current end of dst, shifting all times.
void append_schedule(PulseSchedule& dst, const PulseSchedule& src);

// One line per placement: "qubit axis sign shape start dur", then markers.
std::string schedule_to_text(const PulseSchedule& s);

// Picks a library shape realizing the angle (0, +-pi/2, +-pi) and the sign
// it should be played with.
std::pair<const PulseShape*, double> shape_for_angle(const ShapeLibrary& lib, double angle);

// 16 tau_p decoupled single-qubit gate window.  Rotation targets must be
// pairwise non-adjacent; all qubits of the graph get their sublattice's
// four pi_x slots, targets additionally get the stretched rotation pulse P
// on [0,2) and three composite-identity windows (half-time double-amplitude
// P followed by its reverse).
PulseSchedule build_single_qubit_gate(const QubitGraph& g,
                                      const std::map<int, std::pair<Axis, double>>& rotations,
                                      const ShapeLibrary& lib);

// 16 tau_p sequence of pi_x pulses decoupling all qubits and all couplings
// except the listed pairs, which retain the fraction f = 1/2 of their
// Ising coupling.
PulseSchedule build_zz_sequence(const QubitGraph& g,
                                const std::vector<std::pair<int, int>>& coupled_pairs,
                                double f, const ShapeLibrary& lib);

// Piecewise-constant sign functions s_i(t) in the delta-pulse idealization:
// each decoupling pi pulse flips the sign at its midpoint.  Times are held
// as integers in units of tau_p/2 so averages are exact rationals.
struct TogglingProfile {
    int total_half = 0;                        // schedule length in tau_p/2
    std::vector<std::vector<int>> flips_half;  // [qubit 1..n] sorted flip times

    double sign_at(int q, double t) const;
    // exact averages (numerator over total_half is an integer)
    double avg_s(int q) const;
    double avg_ss(int i, int j) const;
};

TogglingProfile toggling_profile(const PulseSchedule& s, int n_qubits);

// Expected <s_i s_j> per edge; edges not listed must average to zero, and
// every <s_i> must vanish.
struct DecouplingTargets {
    std::map<std::pair<int, int>, double> pair_avg;
};

struct ValidationReport {
    bool pass = true;
    std::vector<std::string> failures;
};

ValidationReport validate_schedule(const PulseSchedule& s, const QubitGraph& g,
                                   const DecouplingTargets& targets);

}  // namespace starq
