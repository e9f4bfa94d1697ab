#pragma once

#include <algorithm>
#include <cmath>

namespace fixpoint::tol {

// Relative tolerance with absolute floor for float comparisons.
inline constexpr double kRelative = 1e-9;
inline constexpr double kAbsoluteFloor = 1e-12;

// Residual threshold for "x* is a fixed point" preconditions.
inline constexpr double kFixedPointResidual = 1e-12;

// Distinctness threshold when probing for a second fixed point.
inline constexpr double kDistinct = 1e-9;

// Any iterate coordinate beyond this magnitude aborts a run.
inline constexpr double kDivergenceGuard = 1e150;

inline bool approx_eq(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return std::abs(a - b) <= std::max(kAbsoluteFloor, kRelative * scale);
}

// lhs <= rhs with slack that absorbs evaluation error only.
inline bool leq_within(double lhs, double rhs) {
    return lhs <= rhs + kRelative * (1.0 + std::abs(rhs));
}

}  // namespace fixpoint::tol
