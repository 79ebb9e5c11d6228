#pragma once

#include <cmath>

namespace groundstate::detail {

// Bisection on [lo, hi]; fn(lo) and fn(hi) must have opposite signs (zero
// counts as either). Runs to floating-point exhaustion or max_iter.
template <class Fn>
double bisect(Fn fn, double lo, double hi, int max_iter = 200) {
    double flo = fn(lo);
    for (int i = 0; i < max_iter; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) return mid;
        const double fm = fn(mid);
        if (fm == 0.0) return mid;
        if ((flo < 0.0) == (fm < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace groundstate::detail
