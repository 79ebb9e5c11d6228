#pragma once

// Dormand-Prince 5(4) embedded Runge-Kutta pair with the standard 4th-order
// continuous extension (Hairer/Norsett/Wanner coefficients). Fixed state
// dimension, no allocations in the stepping loop, bit-deterministic.

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

namespace groundstate::detail {

template <std::size_t N>
struct DenseSegment {
    double t0 = 0.0;
    double h = 0.0;
    std::array<double, N> r1{}, r2{}, r3{}, r4{}, r5{};

    std::array<double, N> at(double t) const {
        const double th = (t - t0) / h;
        const double th1 = 1.0 - th;
        std::array<double, N> y;
        for (std::size_t i = 0; i < N; ++i)
            y[i] = r1[i] + th * (r2[i] + th1 * (r3[i] + th * (r4[i] + th1 * r5[i])));
        return y;
    }
};

template <std::size_t N, class RHS>
class Dopri5 {
  public:
    Dopri5(RHS rhs, double rel_tol, double abs_tol)
        : rhs_(rhs), rtol_(rel_tol), atol_(abs_tol) {}

    void init(double t0, const std::array<double, N>& y0, double h_init) {
        t_ = t0;
        y_ = y0;
        h_ = h_init;
        k1_ = rhs_(t_, y_);
        last_rejected_ = false;
    }

    double t() const { return t_; }
    const std::array<double, N>& y() const { return y_; }

    // Advance exactly one accepted step, capped so that t never exceeds
    // t_limit. On success fills `seg` with the dense polynomial of the step.
    // Returns false when the step size underflows or too many consecutive
    // rejections occur (caller reports the trajectory as inconclusive).
    bool advance(double t_limit, DenseSegment<N>& seg) {
        for (int attempt = 0; attempt < 1000; ++attempt) {
            if (!(h_ > std::abs(t_) * 1e-14) || !std::isfinite(h_)) return false;
            double h = h_;
            bool hit_limit = false;
            if (t_ + h >= t_limit) {
                h = t_limit - t_;
                hit_limit = true;
            }
            if (!(h > 0.0)) return false;

            std::array<double, N> k2, k3, k4, k5, k6, k7, yt, y_new;

            for (std::size_t i = 0; i < N; ++i) yt[i] = y_[i] + h * a21 * k1_[i];
            k2 = rhs_(t_ + c2 * h, yt);
            for (std::size_t i = 0; i < N; ++i)
                yt[i] = y_[i] + h * (a31 * k1_[i] + a32 * k2[i]);
            k3 = rhs_(t_ + c3 * h, yt);
            for (std::size_t i = 0; i < N; ++i)
                yt[i] = y_[i] + h * (a41 * k1_[i] + a42 * k2[i] + a43 * k3[i]);
            k4 = rhs_(t_ + c4 * h, yt);
            for (std::size_t i = 0; i < N; ++i)
                yt[i] = y_[i] + h * (a51 * k1_[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
            k5 = rhs_(t_ + c5 * h, yt);
            for (std::size_t i = 0; i < N; ++i)
                yt[i] = y_[i] + h * (a61 * k1_[i] + a62 * k2[i] + a63 * k3[i] +
                                     a64 * k4[i] + a65 * k5[i]);
            k6 = rhs_(t_ + h, yt);
            for (std::size_t i = 0; i < N; ++i)
                y_new[i] = y_[i] + h * (b1 * k1_[i] + b3 * k3[i] + b4 * k4[i] +
                                        b5 * k5[i] + b6 * k6[i]);
            k7 = rhs_(t_ + h, y_new);  // FSAL

            double err_sq = 0.0;
            bool finite = true;
            for (std::size_t i = 0; i < N; ++i) {
                const double e = h * (e1 * k1_[i] + e3 * k3[i] + e4 * k4[i] +
                                      e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
                const double sc =
                    atol_ + rtol_ * std::max(std::abs(y_[i]), std::abs(y_new[i]));
                const double q = e / sc;
                err_sq += q * q;
                finite = finite && std::isfinite(y_new[i]);
            }
            const double err = std::sqrt(err_sq / static_cast<double>(N));

            if (!finite || !(err <= 1.0)) {
                // reject: shrink and retry
                const double fac =
                    std::isfinite(err) ? std::max(0.2, 0.9 * std::pow(err, -0.2)) : 0.2;
                h_ = h * std::min(fac, 0.9);
                last_rejected_ = true;
                continue;
            }

            seg.t0 = t_;
            seg.h = h;
            for (std::size_t i = 0; i < N; ++i) {
                const double dy = y_new[i] - y_[i];
                const double bspl = h * k1_[i] - dy;
                seg.r1[i] = y_[i];
                seg.r2[i] = dy;
                seg.r3[i] = bspl;
                seg.r4[i] = dy - h * k7[i] - bspl;
                seg.r5[i] = h * (d1 * k1_[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] +
                                 d6 * k6[i] + d7 * k7[i]);
            }

            double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
            fac = std::min(5.0, std::max(0.2, fac));
            if (last_rejected_) fac = std::min(fac, 1.0);  // no growth right after a rejection
            h_ = h * fac;
            last_rejected_ = false;

            t_ = hit_limit ? t_limit : t_ + h;
            y_ = y_new;
            k1_ = k7;
            return true;
        }
        return false;
    }

  private:
    RHS rhs_;
    double rtol_, atol_;
    double t_ = 0.0, h_ = 0.0;
    std::array<double, N> y_{}, k1_{};
    bool last_rejected_ = false;

    // Butcher tableau (Dormand & Prince 1980) and the dense-output weights
    // from Hairer's DOPRI5.
    static constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
    static constexpr double a21 = 1.0 / 5.0;
    static constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
    static constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
    static constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                            a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
    static constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0,
                            a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                            a65 = -5103.0 / 18656.0;
    static constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                            b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
    static constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                            e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
    static constexpr double d1 = -12715105075.0 / 11282082432.0,
                            d3 = 87487479700.0 / 32700410799.0,
                            d4 = -10690763975.0 / 1880347072.0,
                            d5 = 701980252875.0 / 199316789632.0,
                            d6 = -1453857185.0 / 822651844.0,
                            d7 = 69997945.0 / 29380423.0;
};

}  // namespace groundstate::detail
