#pragma once

// Radial shooting solver for u'' + ((n-1)/r) u' + f(u) = 0, u'(0) = 0,
// with double-power f. Classifies trajectories by their first event
// (zero crossing vs. turn-back), brackets the ground-state height by
// bisection on alpha = u(0), and scans alpha grids for uniqueness.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "groundstate/detail/dopri5.hpp"
#include "groundstate/detail/roots.hpp"
#include "groundstate/nonlinearity.hpp"

namespace groundstate {

struct StateVector {
    double r = 0.0;
    double u = 0.0;
    double du = 0.0;
};

struct NoExistenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct BracketFailureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// r_max = 0 means "pick automatically": 40/sqrt(omega), enough e-foldings of
// the linearized tail decay rate sqrt(omega) to pass below any practical
// conv_eps.
struct ShootingConfig {
    int n = 3;
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double h0 = 1e-3;
    double r_max = 0.0;
    double conv_eps = 1e-8;
    double alpha_tol = 1e-12;
    int max_bisect = 200;

    ShootingConfig resolved(const DoublePowerParams& dp) const {
        ShootingConfig c = *this;
        if (c.r_max == 0.0) c.r_max = 40.0 / std::sqrt(dp.omega);
        detail::require(c.n >= 1, "dimension n must be >= 1");
        detail::require(c.rel_tol > 0.0 && c.abs_tol > 0.0, "integrator tolerances must be positive");
        detail::require(c.conv_eps > 0.0, "conv_eps must be positive");
        detail::require(c.alpha_tol > 0.0, "alpha_tol must be positive");
        detail::require(c.h0 > 0.0, "h0 must be positive");
        detail::require(c.r_max > c.h0, "r_max must exceed h0");
        detail::require(c.max_bisect >= 1, "max_bisect must be >= 1");
        return c;
    }
};

enum class TrajectoryKind { Crossed, TurnedBack, Converged, Inconclusive };

inline const char* to_string(TrajectoryKind k) {
    switch (k) {
        case TrajectoryKind::Crossed: return "Crossed";
        case TrajectoryKind::TurnedBack: return "TurnedBack";
        case TrajectoryKind::Converged: return "Converged";
        default: return "Inconclusive";
    }
}

// profile holds the accepted-step samples up to and including the event
// point (u is pinned to 0 at a crossing, du to 0 at a turn-back, which is
// what event localization means).
struct TrajectoryOutcome {
    TrajectoryKind kind = TrajectoryKind::Inconclusive;
    double r_cross = 0.0;
    double r_turn = 0.0;
    double u_at_turn = 0.0;
    std::vector<StateVector> profile;
    std::string reason;
};

struct GroundState {
    double alpha = 0.0;
    std::vector<StateVector> profile;
    std::pair<double, double> bracket{0.0, 0.0};
    double residuals = 0.0;
    TrajectoryKind final_kind = TrajectoryKind::Inconclusive;
};

struct ScanReport {
    std::vector<double> grid;
    std::vector<TrajectoryKind> outcomes;
    int transitions = 0;
};

using TrajectoryObserver = std::function<void(double, const TrajectoryOutcome&)>;

// Odd extension of f. The integrator may poke at u < 0 around a zero
// crossing; std::pow(negative, non-integer) would poison the state with NaN.
inline double eval_f_ext(const DoublePowerParams& dp, double u) {
    const double a = std::abs(u);
    const double m = detail::sum3(-dp.omega * a, std::pow(a, dp.p), -std::pow(a, dp.q));
    return u < 0.0 ? -m : m;
}

inline double energy(const DoublePowerParams& dp, const StateVector& s) {
    return 0.5 * s.du * s.du + eval_F(dp, std::abs(s.u));
}

namespace detail {

// f(u)/u and F(u)/u^2, factored so huge u gives -inf instead of inf - inf.
inline double g_of(const DoublePowerParams& dp, double u) {
    return -dp.omega + std::pow(u, dp.p - 1.0) * (1.0 - std::pow(u, dp.q - dp.p));
}
inline double G_of(const DoublePowerParams& dp, double u) {
    return -0.5 * dp.omega +
           std::pow(u, dp.p - 1.0) *
               (1.0 / (dp.p + 1.0) - std::pow(u, dp.q - dp.p) / (dp.q + 1.0));
}

template <class Fn>
double zero_above(Fn fn, double peak) {
    double hi = 2.0 * peak;
    for (int i = 0; i < 2000 && !(fn(hi) < 0.0); ++i) hi *= 2.0;
    return bisect(fn, peak, hi);
}

template <class Fn>
double zero_below(Fn fn, double peak) {
    double lo = 0.5 * peak;
    for (int i = 0; i < 4000 && !(fn(lo) < 0.0); ++i) lo *= 0.5;
    if (!(fn(lo) < 0.0)) throw std::domain_error("zero bracketing underflowed");
    return bisect(fn, lo, peak);
}

struct DenseTrajectory {
    std::vector<DenseSegment<2>> segs;

    std::array<double, 2> eval(double t) const {
        std::size_t lo = 0, hi = segs.size();
        while (hi - lo > 1) {
            const std::size_t mid = lo + (hi - lo) / 2;
            if (segs[mid].t0 <= t) lo = mid; else hi = mid;
        }
        const auto& s = segs[lo];
        return s.at(std::clamp(t, s.t0, s.t0 + s.h));
    }
};

}  // namespace detail

// Zeros of the double-power f and of its antiderivative F, via the strictly
// unimodal cofactors g = f/u and G = F/u^2: locate the closed-form maximizer,
// then bisect on each side. Throws domain_error when no positive zero exists.
inline double largest_f_zero(const DoublePowerParams& dp) {
    const double um = std::pow((dp.p - 1.0) / (dp.q - 1.0), 1.0 / (dp.q - dp.p));
    auto g = [&](double u) { return detail::g_of(dp, u); };
    detail::require_domain(g(um) > 0.0, "f has no positive zeros");
    return detail::zero_above(g, um);
}

inline double smallest_f_zero(const DoublePowerParams& dp) {
    const double um = std::pow((dp.p - 1.0) / (dp.q - 1.0), 1.0 / (dp.q - dp.p));
    auto g = [&](double u) { return detail::g_of(dp, u); };
    detail::require_domain(g(um) > 0.0, "f has no positive zeros");
    return detail::zero_below(g, um);
}

inline double smallest_F_zero(const DoublePowerParams& dp) {
    const double uM = std::pow(
        (dp.p - 1.0) * (dp.q + 1.0) / ((dp.p + 1.0) * (dp.q - 1.0)), 1.0 / (dp.q - dp.p));
    auto G = [&](double u) { return detail::G_of(dp, u); };
    detail::require_domain(G(uM) > 0.0, "F has no positive zeros");
    return detail::zero_below(G, uM);
}

// Second-order Taylor start that removes the (n-1)/r singularity:
// u(h) = alpha - f(alpha) h^2 / (2n), u'(h) = -f(alpha) h / n.
inline StateVector series_start(const DoublePowerParams& dp, int n, double alpha, double h) {
    detail::require(n >= 1, "dimension n must be >= 1");
    detail::require(std::isfinite(alpha) && alpha > 0.0, "alpha must be positive and finite");
    detail::require(h > 0.0, "start offset h must be positive");
    if (h >= 1.0) throw std::domain_error("start offset h must be < 1");
    const double fa = eval_f(dp, alpha);
    return {h, alpha - fa * h * h / (2.0 * n), -fa * h / n};
}

inline TrajectoryOutcome integrate_trajectory(const DoublePowerParams& dp,
                                              const ShootingConfig& cfg, double alpha,
                                              detail::DenseTrajectory* dense = nullptr) {
    const ShootingConfig c = cfg.resolved(dp);
    detail::require(std::isfinite(alpha) && alpha > 0.0, "alpha must be positive and finite");

    const double fa = eval_f(dp, alpha);
    const double h_start =
        std::min({c.h0, std::pow(c.abs_tol / (std::abs(fa) + 1.0), 0.25), 0.5});
    const StateVector s0 = series_start(dp, c.n, alpha, h_start);

    const double damping = static_cast<double>(c.n - 1);
    auto rhs = [&dp, damping](double t, const std::array<double, 2>& y) {
        return std::array<double, 2>{y[1], -damping / t * y[1] - eval_f_ext(dp, y[0])};
    };
    detail::Dopri5<2, decltype(rhs)> stepper(rhs, c.rel_tol, c.abs_tol);
    stepper.init(s0.r, {s0.u, s0.du}, h_start);

    TrajectoryOutcome out;
    out.profile.push_back(s0);

    auto fail = [&out](const char* why) {
        out.kind = TrajectoryKind::Inconclusive;
        out.reason = why;
        return out;
    };

    constexpr long max_steps = 1000000;
    long steps = 0;
    detail::DenseSegment<2> seg;
    while (stepper.t() < c.r_max) {
        if (++steps > max_steps) return fail("step budget exhausted");
        const double t_prev = stepper.t();
        const auto y_prev = stepper.y();
        if (!stepper.advance(c.r_max, seg)) return fail("step size underflow");
        const double t = stepper.t();
        const auto y = stepper.y();
        if (!std::isfinite(y[0]) || !std::isfinite(y[1])) return fail("non-finite state");
        if (dense) dense->segs.push_back(seg);

        const bool crossed = y_prev[0] > 0.0 && y[0] <= 0.0;
        const bool turned = y_prev[1] < 0.0 && y[1] >= 0.0;
        if (crossed && turned) return fail("grazing: u and du vanish in the same step");
        if (crossed) {
            const double rc =
                y[0] == 0.0 ? t
                            : detail::bisect([&seg](double r) { return seg.at(r)[0]; }, t_prev, t);
            out.kind = TrajectoryKind::Crossed;
            out.r_cross = rc;
            out.profile.push_back({rc, 0.0, seg.at(rc)[1]});
            return out;
        }
        if (turned) {
            const double rt =
                y[1] == 0.0 ? t
                            : detail::bisect([&seg](double r) { return seg.at(r)[1]; }, t_prev, t);
            out.kind = TrajectoryKind::TurnedBack;
            out.r_turn = rt;
            out.u_at_turn = seg.at(rt)[0];
            out.profile.push_back({rt, out.u_at_turn, 0.0});
            return out;
        }
        out.profile.push_back({t, y[0], y[1]});
    }

    const auto y = stepper.y();
    if (y[0] > 0.0 && y[0] < c.conv_eps && std::abs(y[1]) < c.conv_eps && y[1] < 0.0) {
        out.kind = TrajectoryKind::Converged;
        return out;
    }
    return fail("reached r_max without classification");
}

namespace detail {

// Max over 100 checkpoints of |u'' + ((n-1)/r) u' + f(u)| with u'' recovered
// by a fourth-order finite difference of the dense-output derivative; this
// cross-checks the interpolated profile against the ODE it claims to solve.
inline double max_residual(const DoublePowerParams& dp, int n, const DenseTrajectory& dense,
                           double r_lo, double r_hi) {
    if (dense.segs.empty() || !(r_hi > r_lo)) return 0.0;
    const double delta = std::min(0.05, (r_hi - r_lo) / 10.0);
    const double a = r_lo + 2.0 * delta;
    const double b = r_hi - 2.0 * delta;
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double r = a + (b - a) * i / 99.0;
        const auto y = dense.eval(r);
        const double d2 = (-dense.eval(r + 2.0 * delta)[1] + 8.0 * dense.eval(r + delta)[1] -
                           8.0 * dense.eval(r - delta)[1] + dense.eval(r - 2.0 * delta)[1]) /
                          (12.0 * delta);
        worst = std::max(worst,
                         std::abs(d2 + (n - 1) / r * y[1] + eval_f_ext(dp, y[0])));
    }
    return worst;
}

}  // namespace detail

// Brackets the ground-state height between a TurnedBack alpha and a Crossed
// alpha, bisects to alpha_tol, and re-integrates at the midpoint. The probe
// grid is 32 geometric points in (u_F, b2). When every probe crosses (the
// conserved-energy regime n = 1, where F(alpha) > 0 forces a crossing), the
// bracket is reopened just below u_F, where F < 0 guarantees a turn-back.
inline GroundState find_ground_state(const DoublePowerParams& dp, const ShootingConfig& cfg,
                                     const TrajectoryObserver& observe = {}) {
    const ShootingConfig c = cfg.resolved(dp);
    if (!existence_holds(dp))
        throw NoExistenceError("no existence: omega >= omega_crit");
    const double uF = smallest_F_zero(dp);
    const double b2 = largest_f_zero(dp);

    auto run = [&](double a) {
        TrajectoryOutcome o = integrate_trajectory(dp, c, a);
        if (observe) observe(a, o);
        return o;
    };

    constexpr int probes = 32;
    std::array<double, probes> pa;
    std::array<TrajectoryKind, probes> pk;
    for (int i = 0; i < probes; ++i) {
        pa[i] = uF * std::pow(b2 / uF, (i + 1) / (probes + 1.0));
        pk[i] = run(pa[i]).kind;
    }

    double lo = 0.0, hi = 0.0;
    bool bracketed = false;
    for (int i = 0; i + 1 < probes; ++i) {
        if (pk[i] == TrajectoryKind::TurnedBack && pk[i + 1] == TrajectoryKind::Crossed) {
            lo = pa[i];
            hi = pa[i + 1];
            bracketed = true;
            break;
        }
    }
    if (!bracketed) {
        const bool any_turn = std::find(pk.begin(), pk.end(), TrajectoryKind::TurnedBack) != pk.end();
        const auto first_cross = std::find(pk.begin(), pk.end(), TrajectoryKind::Crossed);
        if (!any_turn && first_cross != pk.end()) {
            hi = pa[first_cross - pk.begin()];
            const double b1 = smallest_f_zero(dp);
            for (int j = 1; j <= probes && !bracketed; ++j) {
                const double cand = uF * std::pow(b1 / uF, j / (probes + 1.0));
                if (run(cand).kind == TrajectoryKind::TurnedBack) {
                    lo = cand;
                    bracketed = true;
                }
            }
        }
        if (!bracketed)
            throw BracketFailureError("no TurnedBack/Crossed bracket on the probe grid");
    }

    double alpha_star = 0.0;
    bool direct_hit = false;
    for (int it = 0; it < c.max_bisect && hi - lo >= c.alpha_tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const TrajectoryKind k = run(mid).kind;
        if (k == TrajectoryKind::TurnedBack) {
            lo = mid;
        } else if (k == TrajectoryKind::Crossed) {
            hi = mid;
        } else if (k == TrajectoryKind::Converged) {
            alpha_star = mid;
            direct_hit = true;
            break;
        } else {
            break;  // inconclusive midpoint: stop refining, keep the bracket
        }
    }
    if (!direct_hit) {
        const double mid = 0.5 * (lo + hi);
        // A decaying positive solution needs F(alpha) >= 0; when the midpoint
        // sits a hair below the F zero (n = 1 limit), the Crossed endpoint is
        // the nearest admissible height.
        alpha_star = eval_F(dp, mid) < 0.0 ? hi : mid;
    }

    detail::DenseTrajectory dense;
    TrajectoryOutcome fin = integrate_trajectory(dp, c, alpha_star, &dense);
    if (observe) observe(alpha_star, fin);

    GroundState gs;
    gs.alpha = alpha_star;
    gs.bracket = {lo, hi};
    gs.final_kind = fin.kind;

    // Keep the strictly decreasing positive head of the profile. Past the
    // event the bisected trajectory no longer tracks the ground state: a
    // turn-back hovers near u_at_turn, a crossing dives through 0.
    const double floor_u =
        fin.kind == TrajectoryKind::TurnedBack ? 10.0 * fin.u_at_turn : 0.0;
    for (const auto& s : fin.profile) {
        if (!(s.u > floor_u)) break;
        if (!gs.profile.empty() && !(s.u < gs.profile.back().u)) break;
        gs.profile.push_back(s);
    }
    if (!gs.profile.empty())
        gs.residuals = detail::max_residual(dp, c.n, dense, gs.profile.front().r,
                                            gs.profile.back().r);
    return gs;
}

// Integrates a uniform alpha grid and counts TurnedBack/Crossed switches.
// Under existence the grid spans the bracketing interval (u_F, b2); otherwise
// it spans (0, b2) (or up to the maximizer of f/u when f has no zeros), where
// the expected outcome is no crossing at all.
inline ScanReport uniqueness_scan(const DoublePowerParams& dp, const ShootingConfig& cfg,
                                  int grid_size, const TrajectoryObserver& observe = {}) {
    detail::require(grid_size >= 1, "grid_size must be >= 1");
    const ShootingConfig c = cfg.resolved(dp);

    ScanReport rep;
    rep.grid.reserve(grid_size);
    if (existence_holds(dp)) {
        const double lo = smallest_F_zero(dp) * (1.0 + 1e-6);
        const double hi = largest_f_zero(dp) * (1.0 - 1e-6);
        if (grid_size == 1) {
            rep.grid.push_back(0.5 * (lo + hi));
        } else {
            for (int i = 0; i < grid_size; ++i)
                rep.grid.push_back(lo + (hi - lo) * i / (grid_size - 1.0));
        }
    } else {
        const double um = std::pow((dp.p - 1.0) / (dp.q - 1.0), 1.0 / (dp.q - dp.p));
        const double upper = detail::g_of(dp, um) > 0.0 ? largest_f_zero(dp) : um;
        for (int i = 0; i < grid_size; ++i)
            rep.grid.push_back(upper * (i + 1) / (grid_size + 1.0));
    }

    for (double a : rep.grid) {
        TrajectoryOutcome o = integrate_trajectory(dp, c, a);
        if (observe) observe(a, o);
        rep.outcomes.push_back(o.kind);
    }
    for (std::size_t i = 1; i < rep.outcomes.size(); ++i) {
        const TrajectoryKind a = rep.outcomes[i - 1], b = rep.outcomes[i];
        const bool ab = a == TrajectoryKind::TurnedBack && b == TrajectoryKind::Crossed;
        const bool ba = a == TrajectoryKind::Crossed && b == TrajectoryKind::TurnedBack;
        if (ab || ba) ++rep.transitions;
    }
    return rep;
}

}  // namespace groundstate
