#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace relayopt {

/// Number of whole steps of size `step` that fit in [0, span], robust to the
/// usual binary-representation shortfall (100/0.1 -> 1000, not 999).
inline long long grid_steps(double span, double step) {
    const double q = span / step;
    const auto rounded = static_cast<long long>(std::llround(q));
    if (std::abs(q - static_cast<double>(rounded)) < 1e-9 * std::max(1.0, std::abs(q))) {
        return rounded;
    }
    return static_cast<long long>(std::floor(q));
}

/// Grid lo, lo+step, ... covering [lo, hi]; hi itself is always included.
/// When hi - lo is a whole number of steps the final point is hi exactly
/// (no accumulated rounding), giving grid_steps(hi-lo, step) + 1 points.
inline std::vector<double> grid_points(double lo, double hi, double step) {
    const long long steps = grid_steps(hi - lo, step);
    const bool lands_on_hi =
        std::abs((hi - lo) - static_cast<double>(steps) * step) < 1e-9 * std::max(1.0, std::abs(hi));
    std::vector<double> xs;
    xs.reserve(static_cast<std::size_t>(steps) + 2);
    for (long long k = 0; k < steps; ++k) {
        xs.push_back(lo + static_cast<double>(k) * step);
    }
    xs.push_back(lands_on_hi ? hi : lo + static_cast<double>(steps) * step);
    if (!lands_on_hi) xs.push_back(hi);
    return xs;
}

}  // namespace relayopt
