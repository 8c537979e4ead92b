#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "sigstream/rng.hpp"
#include "sigstream/signature.hpp"

namespace sigstream::testing {

inline Path random_path(CounterRng& rng, std::size_t dim, std::size_t points, double scale = 1.0) {
    std::vector<double> coords(dim * points);
    for (auto& c : coords) c = scale * (2.0 * rng.uniform() - 1.0);
    return Path(dim, std::move(coords));
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return a.size() == b.size() ? worst : INFINITY;
}

inline double max_abs_diff(const TruncatedSignature& a, const TruncatedSignature& b) {
    return max_abs_diff(a.coefficients(), b.coefficients());
}

}  // namespace sigstream::testing
