#pragma once

// Double- and triple-power nonlinearities: exact evaluation, critical
// thresholds, sign classification, and the tilde transform
//   f~(u) = (u f'(u))' f(u) - u f'(u)^2,
// which maps a triple-power function to another triple-power function.
// All reals are 64-bit doubles; all functions here are pure.

#include <cmath>
#include <stdexcept>
#include <string>

namespace groundstate {

// Relative-margin band inside which a coefficient counts as sitting on the
// critical threshold. The exact trichotomy is unreachable in floating point;
// the signed margin is reported so callers can tighten.
inline constexpr double tangent_tol = 1e-9;

namespace detail {

// Neumaier-compensated sum of three terms. The power terms can cancel almost
// exactly near tangency points, where a naive sum loses the sign.
inline double sum3(double x, double y, double z) {
    double s = x + y;
    double c = (std::abs(x) >= std::abs(y)) ? (x - s) + y : (y - s) + x;
    double t = s + z;
    c += (std::abs(s) >= std::abs(z)) ? (s - t) + z : (z - t) + s;
    return t + c;
}

inline void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

inline void require_domain(bool ok, const char* what) {
    if (!ok) throw std::domain_error(what);
}

}  // namespace detail

/// Parameters of f(u) = -omega*u + u^p - u^q with omega > 0, 1 < p < q.
struct DoublePowerParams {
    double omega;
    double p;
    double q;

    DoublePowerParams(double omega_, double p_, double q_)
        : omega(omega_), p(p_), q(q_) {
        detail::require(std::isfinite(omega) && omega > 0.0,
                        "DoublePowerParams: require omega > 0");
        detail::require(std::isfinite(p) && std::isfinite(q) && 1.0 < p && p < q,
                        "DoublePowerParams: require 1 < p < q");
    }
};

/// Parameters of the general f(u) = -a*u^p + b*u^q - c*u^r with
/// a, b, c > 0 and 0 < p < q < r.
struct TriplePowerParams {
    double a, b, c;
    double p, q, r;

    TriplePowerParams(double a_, double b_, double c_, double p_, double q_, double r_)
        : a(a_), b(b_), c(c_), p(p_), q(q_), r(r_) {
        detail::require(std::isfinite(a) && std::isfinite(b) && std::isfinite(c) &&
                            a > 0.0 && b > 0.0 && c > 0.0,
                        "TriplePowerParams: require a, b, c > 0");
        detail::require(std::isfinite(p) && std::isfinite(q) && std::isfinite(r) &&
                            0.0 < p && p < q && q < r,
                        "TriplePowerParams: require 0 < p < q < r");
    }

    /// -a*u^p + b*u^q - c*u^r for u >= 0.
    double eval(double u) const {
        detail::require_domain(u >= 0.0, "TriplePowerParams::eval: require u >= 0");
        return detail::sum3(-a * std::pow(u, p), b * std::pow(u, q), -c * std::pow(u, r));
    }
};

enum class SignCase {
    positive_part,      // case (a): f > 0 somewhere on u > 0
    tangent,            // case (b): f <= 0 with exactly one zero
    strictly_negative,  // case (c): f < 0 for all u > 0
};

inline const char* to_string(SignCase c) {
    switch (c) {
        case SignCase::positive_part: return "a";
        case SignCase::tangent: return "b";
        case SignCase::strictly_negative: return "c";
    }
    return "?";
}

/// Outcome of the three-way sign classification. `margin` is the signed
/// relative distance of the leading coefficient a from the critical value:
/// (a - a_crit)/a_crit, negative in case (a).
struct SignClass {
    SignCase kind;
    double margin;
};

/// f(u) = -omega*u + u^p - u^q as a TriplePowerParams.
inline TriplePowerParams as_triple(const DoublePowerParams& dp) {
    return TriplePowerParams(dp.omega, 1.0, 1.0, 1.0, dp.p, dp.q);
}

/// F(u) = integral of f = -(omega/2)u^2 + u^(p+1)/(p+1) - u^(q+1)/(q+1)
/// as a TriplePowerParams.
inline TriplePowerParams antiderivative_triple(const DoublePowerParams& dp) {
    return TriplePowerParams(dp.omega / 2.0, 1.0 / (dp.p + 1.0), 1.0 / (dp.q + 1.0),
                             2.0, dp.p + 1.0, dp.q + 1.0);
}

/// f(u) = -omega*u + u^p - u^q, extended to u = 0 by continuity.
inline double eval_f(const DoublePowerParams& dp, double u) {
    detail::require_domain(std::isfinite(u) && u >= 0.0, "eval_f: require finite u >= 0");
    return detail::sum3(-dp.omega * u, std::pow(u, dp.p), -std::pow(u, dp.q));
}

/// F(u) = -(omega/2)u^2 + u^(p+1)/(p+1) - u^(q+1)/(q+1).
inline double eval_F(const DoublePowerParams& dp, double u) {
    detail::require_domain(std::isfinite(u) && u >= 0.0, "eval_F: require finite u >= 0");
    return detail::sum3(-(dp.omega / 2.0) * u * u,
                        std::pow(u, dp.p + 1.0) / (dp.p + 1.0),
                        -std::pow(u, dp.q + 1.0) / (dp.q + 1.0));
}

/// Tilde transform of a triple-power function:
///   f~(u) = (u f')' f - u (f')^2
///         = -ab(q-p)^2 u^(q+p-1) + ca(r-p)^2 u^(r+p-1) - bc(r-q)^2 u^(r+q-1),
/// again a triple-power function. The exponent ordering is forced by
/// p < q < r; the new low exponent q+p-1 must stay positive.
inline TriplePowerParams tilde_triple(const TriplePowerParams& tp) {
    detail::require_domain(tp.p + tp.q > 1.0,
                           "tilde_triple: require p + q > 1 (else the low exponent is <= 0)");
    const double dqp = tp.q - tp.p;
    const double drp = tp.r - tp.p;
    const double drq = tp.r - tp.q;
    return TriplePowerParams(tp.a * tp.b * dqp * dqp,
                             tp.c * tp.a * drp * drp,
                             tp.b * tp.c * drq * drq,
                             tp.q + tp.p - 1.0, tp.r + tp.p - 1.0, tp.r + tp.q - 1.0);
}

/// Critical leading coefficient for -a*u^p + b*u^q - c*u^r:
///   a_crit = b*(r-q)/(r-p) * [b(q-p)/(c(r-p))]^((q-p)/(r-q))
///          = max_{u>0} (b*u^(q-p) - c*u^(r-p)).
/// Evaluated in the log domain so that tiny r-q or large exponents do not
/// overflow the inner power.
inline double triple_threshold(double b, double c, double p, double q, double r) {
    detail::require_domain(std::isfinite(b) && std::isfinite(c) && b > 0.0 && c > 0.0,
                           "triple_threshold: require b, c > 0");
    detail::require_domain(std::isfinite(p) && std::isfinite(q) && std::isfinite(r) &&
                               p < q && q < r,
                           "triple_threshold: require p < q < r");
    const double lb = std::log(b);
    const double lc = std::log(c);
    const double inner = lb + std::log(q - p) - lc - std::log(r - p);
    return std::exp(lb + std::log(r - q) - std::log(r - p) + ((q - p) / (r - q)) * inner);
}

/// The unique maximizer u* of b*u^(q-p) - c*u^(r-p) over u > 0,
/// u* = [b(q-p)/(c(r-p))]^(1/(r-q)). In the tangent case f(u*) = 0.
inline double tangent_point(const TriplePowerParams& tp) {
    const double inner = std::log(tp.b) + std::log(tp.q - tp.p) - std::log(tp.c) -
                         std::log(tp.r - tp.p);
    return std::exp(inner / (tp.r - tp.q));
}

/// Three-way sign classification of a triple-power function against its
/// critical coefficient.
inline SignClass classify_triple(const TriplePowerParams& tp) {
    const double a_crit = triple_threshold(tp.b, tp.c, tp.p, tp.q, tp.r);
    const double margin = (tp.a - a_crit) / a_crit;
    SignCase kind;
    if (margin < -tangent_tol)
        kind = SignCase::positive_part;
    else if (margin > tangent_tol)
        kind = SignCase::strictly_negative;
    else
        kind = SignCase::tangent;
    return SignClass{kind, margin};
}

/// f~(u) for the double-power f, via the tilde transform of its triple form.
inline double eval_f_tilde(const DoublePowerParams& dp, double u) {
    detail::require_domain(std::isfinite(u) && u > 0.0, "eval_f_tilde: require u > 0");
    return tilde_triple(as_triple(dp)).eval(u);
}

/// F~(u) = (uf)'F - uf^2, via the tilde transform of F's triple form.
inline double eval_F_tilde(const DoublePowerParams& dp, double u) {
    detail::require_domain(std::isfinite(u) && u > 0.0, "eval_F_tilde: require u > 0");
    return tilde_triple(antiderivative_triple(dp)).eval(u);
}

/// Existence threshold: F > 0 somewhere iff omega < omega_crit(p, q),
///   omega_crit = 2(q-p)/((p+1)(q-1)) * [(p-1)(q+1)/((p+1)(q-1))]^((p-1)/(q-p)).
inline double omega_crit(double p, double q) {
    detail::require_domain(std::isfinite(p) && std::isfinite(q) && 1.0 < p && p < q,
                           "omega_crit: require 1 < p < q");
    const double inner = std::log(p - 1.0) + std::log(q + 1.0) - std::log(p + 1.0) -
                         std::log(q - 1.0);
    return std::exp(std::log(2.0) + std::log(q - p) - std::log(p + 1.0) -
                    std::log(q - 1.0) + ((p - 1.0) / (q - p)) * inner);
}

/// Uniqueness threshold: f~ < 0 everywhere iff omega < eta_crit(p, q),
///   eta_crit = (q-p)/(q-1) * [(p-1)/(q-1)]^((p-1)/(q-p)).
inline double eta_crit(double p, double q) {
    detail::require_domain(std::isfinite(p) && std::isfinite(q) && 1.0 < p && p < q,
                           "eta_crit: require 1 < p < q");
    const double inner = std::log(p - 1.0) - std::log(q - 1.0);
    return std::exp(std::log(q - p) - std::log(q - 1.0) +
                    ((p - 1.0) / (q - p)) * inner);
}

/// Existence condition, strict at the boundary: omega exactly at the
/// threshold does not count.
inline bool existence_holds(const DoublePowerParams& dp) {
    return dp.omega < omega_crit(dp.p, dp.q);
}

/// Uniqueness condition, strict at the boundary. Existence implies this
/// (0 < omega_crit < eta_crit for all admissible p, q).
inline bool uniqueness_condition_holds(const DoublePowerParams& dp) {
    return dp.omega < eta_crit(dp.p, dp.q);
}

}  // namespace groundstate
