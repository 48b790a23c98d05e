#pragma once

#include <cmath>

namespace netlearn {

// Standard normal CDF via the complementary error function. The exact solver
// composes on the order of 1e6 of these per curve, so we want the ~1e-16
// absolute error of erfc rather than a polynomial approximation.
inline double std_normal_cdf(double x) {
    return 0.5 * std::erfc(-x * 0.70710678118654752440);
}

inline double std_normal_pdf(double x) {
    return 0.39894228040143267794 * std::exp(-0.5 * x * x);
}

}  // namespace netlearn
