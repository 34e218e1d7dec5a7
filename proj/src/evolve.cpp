#include "starq/evolve.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <sstream>

namespace starq {

namespace {

using cd = std::complex<double>;

bool is_pow2(int x) { return x > 0 && (x & (x - 1)) == 0; }

void check_steps(int steps_per_tau_p) {
    if (!is_pow2(steps_per_tau_p) || steps_per_tau_p < 256)
        throw parameter_error("integrate: steps_per_tau_p must be a power of two >= 256");
}

long long aligned_slot(double t) {
    double r = std::round(t);
    if (std::abs(t - r) > 1e-9)
        throw parameter_error("integrate: time not aligned to the tau_p grid");
    return (long long)r;
}

}  // namespace

ReducedEvolution ReducedEvolution::basis_columns(int n_qubits,
                                                 const std::vector<Eigen::Index>& indices) {
    ReducedEvolution r;
    r.n_qubits = n_qubits;
    const Eigen::Index dim = Eigen::Index(1) << n_qubits;
    r.V = Eigen::MatrixXcd::Zero(dim, Eigen::Index(indices.size()));
    for (std::size_t m = 0; m < indices.size(); ++m) r.V(indices[m], Eigen::Index(m)) = 1.0;
    return r;
}

double ReducedEvolution::mean_norm() const { return V.squaredNorm() / double(V.cols()); }

// Exact accumulated drive angle of a placement at absolute time t, clamped
// to the pulse support; includes the placement sign.  Closed form from the
// harmonic profile, so pulse rotations carry no quadrature error.
static double theta_at(const PulsePlacement& p, double t) {
    double u = (t - p.start) / p.duration;
    u = std::clamp(u, 0.0, 1.0);
    double phi = p.shape.a0 * u;
    for (std::size_t k = 0; k < p.shape.harmonics.size(); ++k) {
        const double w = 2.0 * M_PI * double(k + 1);
        phi += p.shape.harmonics[k] * (u - std::sin(w * u) / w);
    }
    return p.sign * phi;
}

namespace {

struct SlotPulse {
    const PulsePlacement* p;
    Eigen::Index bit;
    double theta0;  // angle already accumulated before the slot
};

// Placements overlapping [slot, slot+1).  The exact drive frame requires the
// drive terms to commute, which holds with at most one pulse per qubit at a
// time; overlapping pulses on one qubit are rejected.
std::vector<SlotPulse> collect_slot(const HamiltonianContext& ctx, long long slot) {
    std::vector<SlotPulse> out;
    if (!ctx.schedule) return out;
    for (const auto& p : ctx.schedule->placements) {
        if (p.shape.is_zero()) continue;
        if (p.start >= double(slot + 1) || p.start + p.duration <= double(slot)) continue;
        for (const auto& q : out)
            if (q.p->qubit == p.qubit && p.start < q.p->start + q.p->duration &&
                q.p->start < p.start + p.duration)
                throw schedule_error("integrate: overlapping pulses on one qubit");
        out.push_back({&p, Eigen::Index(1) << (p.qubit - 1), theta_at(p, double(slot))});
    }
    return out;
}

}  // namespace

void integrate_reference(ReducedEvolution& Vred, const HamiltonianContext& ctx, double t_end,
                         int steps_per_tau_p) {
    check_steps(steps_per_tau_p);
    const long long k_begin = aligned_slot(Vred.t);
    const long long k_end = aligned_slot(t_end);
    if (k_end < k_begin)
        throw parameter_error("integrate_reference: t_end before current time");

    const QubitGraph& g = *ctx.graph;
    const Eigen::Index dim = Eigen::Index(1) << g.n;
    if (Vred.V.rows() != dim)
        throw parameter_error("integrate_reference: dimension mismatch");
    const double h = 1.0 / steps_per_tau_p;
    const cd mi(0.0, -1.0);

    for (long long slot = k_begin; slot < k_end; ++slot) {
        const std::vector<SlotPulse> pulses = collect_slot(ctx, slot);

        // R(t): drive rotations accumulated since the slot start.  The z
        // rotations are diagonal and commute through D, so the interaction
        // picture only needs the x/y factors; the z phases enter when the
        // frame is folded back at the slot end.
        auto apply_R = [&](double t, Eigen::MatrixXcd& y, bool dagger, bool with_z) {
            for (const auto& sp : pulses) {
                double th = theta_at(*sp.p, t) - sp.theta0;
                if (th == 0.0) continue;
                if (dagger) th = -th;
                if (sp.p->axis == Axis::z) {
                    if (!with_z) continue;
                    const cd ph0 = std::polar(1.0, -0.5 * th);
                    const cd ph1 = std::polar(1.0, 0.5 * th);
                    for (Eigen::Index b = 0; b < dim; ++b)
                        y.row(b) *= (b & sp.bit) ? ph1 : ph0;
                    continue;
                }
                const double c = std::cos(0.5 * th), s = std::sin(0.5 * th);
                for (Eigen::Index b = 0; b < dim; ++b) {
                    if (b & sp.bit) continue;
                    const Eigen::Index b1 = b | sp.bit;
                    for (Eigen::Index m = 0; m < y.cols(); ++m) {
                        const cd y0 = y(b, m), y1 = y(b1, m);
                        if (sp.p->axis == Axis::x) {
                            y(b, m) = c * y0 + cd(0, -s) * y1;
                            y(b1, m) = cd(0, -s) * y0 + c * y1;
                        } else {
                            y(b, m) = c * y0 - s * y1;
                            y(b1, m) = s * y0 + c * y1;
                        }
                    }
                }
            }
        };

        // interaction-picture residual R'(t) D(t) R(t) applied to columns
        auto htilde = [&](double t, const Eigen::MatrixXcd& in) {
            Eigen::MatrixXcd z = in;
            apply_R(t, z, /*dagger=*/false, /*with_z=*/false);
            for (Eigen::Index b = 0; b < dim; ++b) {
                double d = 0.0;
                for (const auto& e : g.edges) {
                    const double zi = (b >> (e.first - 1)) & 1 ? -1.0 : 1.0;
                    const double zj = (b >> (e.second - 1)) & 1 ? -1.0 : 1.0;
                    d += 0.5 * g.J * zi * zj;
                }
                if (ctx.noise)
                    for (int q = 1; q <= g.n; ++q) {
                        const double zq = (b >> (q - 1)) & 1 ? -1.0 : 1.0;
                        d += 0.5 * ctx.noise->value(std::size_t(q - 1), t) * zq;
                    }
                z.row(b) *= d;
            }
            apply_R(t, z, /*dagger=*/true, /*with_z=*/false);
            return z;
        };

        for (int i = 0; i < steps_per_tau_p; ++i) {
            const double t = double(slot) + double(i) * h;
            Eigen::MatrixXcd k1 = mi * htilde(t, Vred.V);
            Eigen::MatrixXcd k2 = mi * htilde(t + 0.5 * h, Vred.V + 0.5 * h * k1);
            Eigen::MatrixXcd k3 = mi * htilde(t + 0.5 * h, Vred.V + 0.5 * h * k2);
            Eigen::MatrixXcd k4 = mi * htilde(t + h, Vred.V + h * k3);
            Vred.V += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        apply_R(double(slot + 1), Vred.V, /*dagger=*/false, /*with_z=*/true);
    }
    Vred.t = t_end;
}

namespace {

// Per-slot drive rotation lookup on the half-step grid: cos and sin of half
// the angle accumulated since the slot start.  Shared across slots with the
// same shape, duration, in-placement offset, sign and resolution.
struct RotTab {
    std::vector<double> c, s;
};

const RotTab& rot_table(const PulsePlacement& p, long long slot, int S) {
    thread_local std::map<std::string, RotTab> cache;
    std::ostringstream key;
    key.precision(17);
    key << p.shape.name << '|' << p.shape.nominal_angle << '|' << p.shape.order << '|'
        << p.shape.a0;
    for (double a : p.shape.harmonics) key << ',' << a;
    key << '|' << p.duration << '|' << double(slot) - p.start << '|' << p.sign << '|' << S;
    auto [it, inserted] = cache.try_emplace(key.str());
    if (inserted) {
        const int n_half = 2 * S;
        RotTab& tab = it->second;
        tab.c.resize(std::size_t(n_half) + 1);
        tab.s.resize(std::size_t(n_half) + 1);
        const double th0 = theta_at(p, double(slot));
        for (int j = 0; j <= n_half; ++j) {
            const double th = theta_at(p, double(slot) + 0.5 * double(j) / S) - th0;
            tab.c[std::size_t(j)] = std::cos(0.5 * th);
            tab.s[std::size_t(j)] = std::sin(0.5 * th);
        }
    }
    return it->second;
}

struct DriveRef {
    Eigen::Index bit = 0;
    Axis axis = Axis::x;
    const RotTab* tab = nullptr;
};

}  // namespace

void integrate(ReducedEvolution& Vred, const HamiltonianContext& ctx, double t_end,
               int steps_per_tau_p) {
    check_steps(steps_per_tau_p);
    const long long k_begin = aligned_slot(Vred.t);
    const long long k_end = aligned_slot(t_end);
    if (k_end < k_begin) throw parameter_error("integrate: t_end before current time");

    const QubitGraph& g = *ctx.graph;
    const int n = g.n;
    const Eigen::Index dim = Eigen::Index(1) << n;
    const Eigen::Index M = Vred.V.cols();
    if (Vred.V.rows() != dim) throw parameter_error("integrate: dimension mismatch");
    const int S = steps_per_tau_p;
    const int H2 = 2 * S;  // half-steps per tau_p slot
    const double h = 1.0 / S;

    // static Ising diagonal and per-qubit z signs
    std::vector<double> zz(std::size_t(dim), 0.0);
    for (Eigen::Index b = 0; b < dim; ++b)
        for (const auto& e : g.edges) {
            double zi = (b >> (e.first - 1)) & 1 ? -1.0 : 1.0;
            double zj = (b >> (e.second - 1)) & 1 ? -1.0 : 1.0;
            zz[std::size_t(b)] += 0.5 * g.J * zi * zj;
        }
    std::vector<std::vector<double>> zsign{std::size_t(n)};
    for (int q = 0; q < n; ++q) {
        zsign[std::size_t(q)].resize(std::size_t(dim));
        for (Eigen::Index b = 0; b < dim; ++b)
            zsign[std::size_t(q)][std::size_t(b)] = (b >> q) & 1 ? -1.0 : 1.0;
    }

    // row-major state copy: y[b*M + m]
    std::vector<cd> y(std::size_t(dim * M));
    for (Eigen::Index b = 0; b < dim; ++b)
        for (Eigen::Index m = 0; m < M; ++m) y[std::size_t(b * M + m)] = Vred.V(b, m);

    std::vector<double> D(std::size_t(dim) * (std::size_t(H2) + 1));  // diagonal / half-step
    std::vector<cd> k1(y.size()), k2(y.size()), k3(y.size()), k4(y.size()), yt(y.size());

    std::vector<DriveRef> drives;
    auto rotate = [&](std::vector<cd>& v, int j, bool dagger) {
        for (const auto& d : drives) {
            const double c = d.tab->c[std::size_t(j)];
            double s = d.tab->s[std::size_t(j)];
            if (s == 0.0 && c == 1.0) continue;
            if (dagger) s = -s;
            for (Eigen::Index b = 0; b < dim; ++b) {
                if (b & d.bit) continue;
                cd* r0 = v.data() + std::size_t(b * M);
                cd* r1 = v.data() + std::size_t((b | d.bit) * M);
                if (d.axis == Axis::x) {
                    for (Eigen::Index m = 0; m < M; ++m) {
                        const cd y0 = r0[m], y1 = r1[m];
                        r0[m] = c * y0 + cd(0, -s) * y1;
                        r1[m] = cd(0, -s) * y0 + c * y1;
                    }
                } else {
                    for (Eigen::Index m = 0; m < M; ++m) {
                        const cd y0 = r0[m], y1 = r1[m];
                        r0[m] = c * y0 - s * y1;
                        r1[m] = s * y0 + c * y1;
                    }
                }
            }
        }
    };

    // k = -i R'(j) D(j) R(j) in at half-step index j
    auto stage = [&](int j, const std::vector<cd>& in, std::vector<cd>& out) {
        out = in;
        rotate(out, j, /*dagger=*/false);
        const double* Dj = D.data() + std::size_t(j) * std::size_t(dim);
        for (Eigen::Index b = 0; b < dim; ++b)
            for (Eigen::Index m = 0; m < M; ++m) out[std::size_t(b * M + m)] *= Dj[b];
        rotate(out, j, /*dagger=*/true);
        const cd mi(0.0, -1.0);
        for (auto& o : out) o *= mi;
    };

    for (long long slot = k_begin; slot < k_end; ++slot) {
        const std::vector<SlotPulse> pulses = collect_slot(ctx, slot);

        if (pulses.empty()) {
            // pulse-free slot: H is diagonal; propagate with exact phases,
            // noise phase integrated by composite Simpson on the step grid
            std::vector<double> phi(std::size_t(n), 0.0);
            if (ctx.noise)
                for (int q = 0; q < n; ++q) {
                    double acc = 0.0;
                    double f0 = ctx.noise->value(std::size_t(q), double(slot));
                    for (int i = 0; i < S; ++i) {
                        double fm =
                            ctx.noise->value(std::size_t(q), double(slot) + (i + 0.5) * h);
                        double f1 = ctx.noise->value(std::size_t(q), double(slot) + (i + 1) * h);
                        acc += h / 6.0 * (f0 + 4.0 * fm + f1);
                        f0 = f1;
                    }
                    phi[std::size_t(q)] = 0.5 * acc;
                }
            for (Eigen::Index b = 0; b < dim; ++b) {
                double ph = zz[std::size_t(b)];
                for (int q = 0; q < n; ++q)
                    ph += zsign[std::size_t(q)][std::size_t(b)] * phi[std::size_t(q)];
                const cd rot = std::polar(1.0, -ph);
                for (Eigen::Index m = 0; m < M; ++m) y[std::size_t(b * M + m)] *= rot;
            }
            continue;
        }

        drives.clear();
        for (const auto& sp : pulses)
            if (sp.p->axis != Axis::z)
                drives.push_back({sp.bit, sp.p->axis, &rot_table(*sp.p, slot, S)});

        // diagonal (couplings + noise) on the half-step grid
        for (int j = 0; j <= H2; ++j) {
            double* Dj = D.data() + std::size_t(j) * std::size_t(dim);
            std::copy(zz.begin(), zz.end(), Dj);
            if (!ctx.noise) continue;
            const double t = double(slot) + 0.5 * h * j;
            for (int q = 0; q < n; ++q) {
                const double a = 0.5 * ctx.noise->value(std::size_t(q), t);
                if (a == 0.0) continue;
                const double* zs = zsign[std::size_t(q)].data();
                for (Eigen::Index b = 0; b < dim; ++b) Dj[b] += a * zs[b];
            }
        }

        for (int i = 0; i < S; ++i) {
            const int j0 = 2 * i, j1 = 2 * i + 1, j2 = 2 * i + 2;
            stage(j0, y, k1);
            for (std::size_t p = 0; p < y.size(); ++p) yt[p] = y[p] + 0.5 * h * k1[p];
            stage(j1, yt, k2);
            for (std::size_t p = 0; p < y.size(); ++p) yt[p] = y[p] + 0.5 * h * k2[p];
            stage(j1, yt, k3);
            for (std::size_t p = 0; p < y.size(); ++p) yt[p] = y[p] + h * k3[p];
            stage(j2, yt, k4);
            const double w = h / 6.0;
            for (std::size_t p = 0; p < y.size(); ++p)
                y[p] += w * (k1[p] + 2.0 * k2[p] + 2.0 * k3[p] + k4[p]);
        }

        // fold the drive frame back into the state at the slot end
        rotate(y, H2, /*dagger=*/false);
        for (const auto& sp : pulses) {
            if (sp.p->axis != Axis::z) continue;
            const double th = theta_at(*sp.p, double(slot + 1)) - sp.theta0;
            if (th == 0.0) continue;
            const cd ph0 = std::polar(1.0, -0.5 * th);
            const cd ph1 = std::polar(1.0, 0.5 * th);
            for (Eigen::Index b = 0; b < dim; ++b) {
                const cd ph = (b & sp.bit) ? ph1 : ph0;
                for (Eigen::Index m = 0; m < M; ++m) y[std::size_t(b * M + m)] *= ph;
            }
        }
    }

    for (Eigen::Index b = 0; b < dim; ++b)
        for (Eigen::Index m = 0; m < M; ++m) Vred.V(b, m) = y[std::size_t(b * M + m)];
    Vred.t = t_end;
}

double project(ReducedEvolution& Vred, int qubit, int outcome, ProjectMode mode) {
    const Eigen::Index dim = Vred.V.rows();
    const Eigen::Index bit = Eigen::Index(1) << (qubit - 1);
    const Eigen::Index M = Vred.V.cols();
    double prob = 0.0;
    for (Eigen::Index b = 0; b < dim; ++b) {
        const bool keep = ((b & bit) != 0) == (outcome != 0);
        if (keep)
            for (Eigen::Index m = 0; m < M; ++m) prob += std::norm(Vred.V(b, m));
    }
    prob /= double(M);
    if (mode == ProjectMode::renormalize && prob <= 1e-15)
        throw degenerate_branch_error("project: branch probability vanishes");
    const double scale = mode == ProjectMode::renormalize ? 1.0 / std::sqrt(prob) : 1.0;
    for (Eigen::Index b = 0; b < dim; ++b) {
        const bool keep = ((b & bit) != 0) == (outcome != 0);
        if (keep)
            Vred.V.row(b) *= scale;
        else
            Vred.V.row(b).setZero();
    }
    if (mode == ProjectMode::renormalize) Vred.norm_log += std::log(prob);
    return prob;
}

int sample_outcome(ReducedEvolution& Vred, int qubit, RngStream& rng) {
    const Eigen::Index dim = Vred.V.rows();
    const Eigen::Index bit = Eigen::Index(1) << (qubit - 1);
    const Eigen::Index M = Vred.V.cols();
    double p0 = 0.0;
    for (Eigen::Index b = 0; b < dim; ++b)
        if (!(b & bit))
            for (Eigen::Index m = 0; m < M; ++m) p0 += std::norm(Vred.V(b, m));
    p0 /= double(M);
    const int outcome = rng.next_uniform() <= p0 ? 0 : 1;
    project(Vred, qubit, outcome, ProjectMode::renormalize);
    return outcome;
}

void reset_ancilla(ReducedEvolution& Vred, int qubit, int outcome) {
    if (outcome == 0) return;
    const Eigen::Index dim = Vred.V.rows();
    const Eigen::Index bit = Eigen::Index(1) << (qubit - 1);
    for (Eigen::Index b = 0; b < dim; ++b)
        if (!(b & bit)) Vred.V.row(b).swap(Vred.V.row(b ^ bit));
}

double fidelity(const Eigen::MatrixXcd& V, const Eigen::MatrixXcd& V0) {
    const double M = double(V.cols());
    const Eigen::MatrixXcd W = V0.adjoint() * V;  // M x M
    const double term1 = (W * W.adjoint()).real().trace();
    const double term2 = std::norm(W.trace());
    return (term1 + term2) / (M * (M + 1.0));
}

Eigen::Matrix2cd reduced_density(const Eigen::MatrixXcd& V, int keep_qubit, int n_qubits) {
    const Eigen::Index dim = Eigen::Index(1) << n_qubits;
    const Eigen::Index bit = Eigen::Index(1) << (keep_qubit - 1);
    const Eigen::Index M = V.cols();
    Eigen::Matrix2cd rho = Eigen::Matrix2cd::Zero();
    for (Eigen::Index b = 0; b < dim; ++b) {
        if (b & bit) continue;  // b has the kept qubit in |0>
        const Eigen::Index b1 = b | bit;
        for (Eigen::Index m = 0; m < M; ++m) {
            rho(0, 0) += V(b, m) * std::conj(V(b, m));
            rho(0, 1) += V(b, m) * std::conj(V(b1, m));
            rho(1, 0) += V(b1, m) * std::conj(V(b, m));
            rho(1, 1) += V(b1, m) * std::conj(V(b1, m));
        }
    }
    return rho / double(M);
}

double single_qubit_fidelity(const Eigen::MatrixXcd& V, const Eigen::MatrixXcd& V0,
                             int keep_qubit, int n_qubits) {
    const Eigen::Matrix2cd rho = reduced_density(V, keep_qubit, n_qubits);
    const Eigen::Matrix2cd sig = reduced_density(V0, keep_qubit, n_qubits);
    // for 2x2 states, [Tr sqrt(sqrt(rho) sig sqrt(rho))]^2
    //   = Tr(rho sig) + 2 sqrt(det rho det sig)
    const double cross = (rho * sig).real().trace();
    const double drho = std::max(0.0, rho.determinant().real());
    const double dsig = std::max(0.0, sig.determinant().real());
    return cross + 2.0 * std::sqrt(drho * dsig);
}

}  // namespace starq
