#pragma once

// Embedded invariant suite behind the `selfcheck` CLI subcommand: seeded,
// repeatable spot checks of the algebra and one fixed shooting oracle.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "groundstate/nonlinearity.hpp"
#include "groundstate/shooting.hpp"

namespace groundstate {

struct CheckResult {
    std::string name;
    long cases = 0;
    long failures = 0;
    std::string note;

    bool passed() const { return failures == 0; }
};

namespace detail {

// splitmix64: tiny, seedable, identical on every platform (the standard
// library distributions are not bit-portable).
struct Uniform {
    std::uint64_t state;

    explicit Uniform(std::uint64_t seed) : state(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    double unit() { return (next_u64() >> 11) * 0x1.0p-53; }

    double in(double lo, double hi) { return lo + (hi - lo) * unit(); }

    double log_in(double lo, double hi) {
        return std::exp(in(std::log(lo), std::log(hi)));
    }
};

inline TriplePowerParams random_triple(Uniform& rng) {
    const double p = rng.in(0.6, 4.0);
    const double q = p + rng.in(0.1, 3.0);
    const double r = q + rng.in(0.1, 3.0);
    return TriplePowerParams(rng.log_in(0.05, 20.0), rng.log_in(0.05, 20.0),
                             rng.log_in(0.05, 20.0), p, q, r);
}

}  // namespace detail

// omega_crit and eta_crit have their own closed forms; both must agree with
// the generic triple-power threshold applied to F/u^2 and f/u respectively,
// and satisfy 0 < omega_crit < eta_crit.
inline CheckResult check_threshold_consistency(detail::Uniform& rng, long cases) {
    CheckResult res{"threshold-consistency", cases, 0, ""};
    for (long i = 0; i < cases; ++i) {
        const double p = rng.in(1.05, 6.0);
        const double q = p + rng.in(0.05, 6.0);
        const double w = omega_crit(p, q);
        const double e = eta_crit(p, q);
        const double w2 =
            2.0 * triple_threshold(1.0 / (p + 1.0), 1.0 / (q + 1.0), 2.0, p + 1.0, q + 1.0);
        const double e2 = triple_threshold(1.0, 1.0, 1.0, p, q);
        const bool ok = std::abs(w - w2) <= 1e-10 * w && std::abs(e - e2) <= 1e-10 * e &&
                        0.0 < w && w < e;
        if (!ok) ++res.failures;
    }
    return res;
}

// Sign trichotomy duality: away from the tangent band, the tilde transform
// swaps case (a) and case (c) and preserves case (b).
inline CheckResult check_tilde_duality(detail::Uniform& rng, long cases) {
    CheckResult res{"tilde-duality", 0, 0, ""};
    long done = 0;
    for (long i = 0; i < cases * 4 && done < cases; ++i) {
        const TriplePowerParams tp = detail::random_triple(rng);
        const SignClass sc = classify_triple(tp);
        if (std::abs(sc.margin) <= 1e-6) continue;
        ++done;
        const SignClass st = classify_triple(tilde_triple(tp));
        const bool ok = (sc.kind == SignCase::positive_part &&
                         st.kind == SignCase::strictly_negative) ||
                        (sc.kind == SignCase::strictly_negative &&
                         st.kind == SignCase::positive_part);
        if (!ok) ++res.failures;
    }
    res.cases = done;
    return res;
}

// Constructed tangency: with a = a_crit the function and its tilde transform
// both vanish at the tangent point, to rounding.
inline CheckResult check_tangency_collocation(detail::Uniform& rng, long cases) {
    CheckResult res{"tangency-collocation", cases, 0, ""};
    for (long i = 0; i < cases; ++i) {
        TriplePowerParams tp = detail::random_triple(rng);
        const double a_crit = triple_threshold(tp.b, tp.c, tp.p, tp.q, tp.r);
        const TriplePowerParams tan(a_crit, tp.b, tp.c, tp.p, tp.q, tp.r);
        const SignClass sc = classify_triple(tan);
        const double us = tangent_point(tan);
        const double scale = a_crit * std::pow(us, tan.p) + tan.b * std::pow(us, tan.q) +
                             tan.c * std::pow(us, tan.r);
        const TriplePowerParams tt = tilde_triple(tan);
        const double ts = tt.a * std::pow(us, tt.p) + tt.b * std::pow(us, tt.q) +
                          tt.c * std::pow(us, tt.r);
        const bool ok = sc.kind == SignCase::tangent &&
                        std::abs(tan.eval(us)) <= 1e-9 * scale &&
                        std::abs(tt.eval(us)) <= 1e-9 * ts;
        if (!ok) ++res.failures;
    }
    return res;
}

// For n = 1 the damping term vanishes, energy is conserved, and the
// ground-state height must be the smallest positive zero of F.
inline CheckResult check_shooting_oracle(long cases) {
    CheckResult res{"shooting-oracle-n1", 0, 0, ""};
    if (cases == 0) return res;
    res.cases = 1;
    const DoublePowerParams dp(0.1, 3.0, 5.0);
    ShootingConfig cfg;
    cfg.n = 1;
    const GroundState gs = find_ground_state(dp, cfg);
    const double ref = smallest_F_zero(dp);
    if (!(std::abs(gs.alpha - ref) <= 1e-6)) {
        ++res.failures;
        res.note = "alpha=" + std::to_string(gs.alpha) + " ref=" + std::to_string(ref);
    }
    return res;
}

inline std::vector<CheckResult> run_selfchecks(std::uint64_t seed, long cases) {
    detail::Uniform rng(seed);
    std::vector<CheckResult> out;
    out.push_back(check_threshold_consistency(rng, cases));
    out.push_back(check_tilde_duality(rng, cases));
    out.push_back(check_tangency_collocation(rng, cases));
    out.push_back(check_shooting_oracle(cases));
    return out;
}

}  // namespace groundstate
