#include "sigstream/oversampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sigstream/rng.hpp"

namespace sigstream {

namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

// Indices of the k closest rows of `pool` to `query`, skipping `skip`.
std::vector<std::size_t> nearest_in(const FeatureMatrix& pool, std::span<const double> query,
                                    std::size_t k, std::size_t skip) {
    std::vector<std::pair<double, std::size_t>> dist;
    dist.reserve(pool.rows);
    for (std::size_t j = 0; j < pool.rows; ++j) {
        if (j == skip) continue;
        dist.emplace_back(squared_distance(query, pool.row(j)), j);
    }
    k = std::min(k, dist.size());
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
    std::vector<std::size_t> out(k);
    for (std::size_t i = 0; i < k; ++i) out[i] = dist[i].second;
    return out;
}

// Splits `total` into integer parts proportional to `weights` (largest remainder,
// ties to the lower index).
std::vector<std::size_t> apportion(const std::vector<double>& weights, std::size_t total) {
    const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
    std::vector<std::size_t> parts(weights.size(), 0);
    std::vector<std::pair<double, std::size_t>> remainders;
    std::size_t assigned = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        const double share = static_cast<double>(total) * weights[i] / sum;
        parts[i] = static_cast<std::size_t>(std::floor(share));
        assigned += parts[i];
        remainders.emplace_back(-(share - std::floor(share)), i);
    }
    std::sort(remainders.begin(), remainders.end());
    for (std::size_t r = 0; assigned < total; ++r, ++assigned) ++parts[remainders[r].second];
    return parts;
}

std::vector<SyntheticRow> generate(const FeatureMatrix& minority,
                                   const std::vector<std::size_t>& per_row,
                                   const OversampleOptions& options) {
    const std::size_t k = std::min(options.k, minority.rows - 1);
    CounterRng rng(options.seed, "smote", options.substream);
    std::vector<std::vector<std::size_t>> neighbours(minority.rows);
    for (std::size_t i = 0; i < minority.rows; ++i) {
        neighbours[i] = nearest_in(minority, minority.row(i), k, i);
    }

    // Interleave the per-row quotas so generation order is round-robin.
    std::vector<SyntheticRow> out;
    std::vector<std::size_t> left = per_row;
    bool any = true;
    while (any) {
        any = false;
        for (std::size_t i = 0; i < minority.rows; ++i) {
            if (left[i] == 0) continue;
            --left[i];
            any = true;
            const std::size_t nn = neighbours[i][rng.below(neighbours[i].size())];
            const double gap = options.fixed_gap ? *options.fixed_gap : rng.uniform();
            SyntheticRow row{std::vector<double>(minority.cols), i, nn, gap};
            auto base = minority.row(i);
            auto other = minority.row(nn);
            for (std::size_t c = 0; c < minority.cols; ++c) {
                row.values[c] = base[c] + gap * (other[c] - base[c]);
            }
            out.push_back(std::move(row));
        }
    }
    return out;
}

void check_minority(const FeatureMatrix& minority, const OversampleOptions& options) {
    if (minority.rows < 2) {
        throw InvalidInput("cannot oversample: the minority class needs at least 2 rows, got " +
                           std::to_string(minority.rows));
    }
    if (options.k == 0) throw InvalidInput("SMOTE needs k >= 1");
    if (options.fixed_gap && (*options.fixed_gap < 0.0 || *options.fixed_gap > 1.0)) {
        throw InvalidInput("SMOTE gap must lie in [0, 1]");
    }
}

}  // namespace

std::vector<std::size_t> nearest_rows(const FeatureMatrix& rows, std::size_t i, std::size_t k) {
    return nearest_in(rows, rows.row(i), k, i);
}

std::vector<SyntheticRow> smote(const FeatureMatrix& minority, std::size_t majority_count,
                                const OversampleOptions& options) {
    check_minority(minority, options);
    if (options.adasyn) throw InvalidInput("ADASYN weighting needs the majority rows");
    const std::size_t total = majority_count > minority.rows ? majority_count - minority.rows : 0;
    std::vector<std::size_t> per_row(minority.rows, total / minority.rows);
    for (std::size_t i = 0; i < total % minority.rows; ++i) ++per_row[i];
    return generate(minority, per_row, options);
}

std::vector<SyntheticRow> smote(const FeatureMatrix& minority, const FeatureMatrix& majority,
                                const OversampleOptions& options) {
    if (!options.adasyn) return smote(minority, majority.rows, options);
    check_minority(minority, options);
    if (majority.cols != minority.cols) throw InvalidInput("class matrices differ in width");
    const std::size_t total = majority.rows > minority.rows ? majority.rows - minority.rows : 0;

    // Pooled set: minority rows first, then majority rows.
    FeatureMatrix pooled = minority;
    for (std::size_t i = 0; i < majority.rows; ++i) pooled.append_row(majority.row(i), 0);
    const std::size_t k = std::min(options.k, pooled.rows - 1);
    std::vector<double> hardness(minority.rows, 0.0);
    for (std::size_t i = 0; i < minority.rows; ++i) {
        for (std::size_t j : nearest_in(pooled, pooled.row(i), k, i)) {
            if (j >= minority.rows) hardness[i] += 1.0;
        }
        hardness[i] /= static_cast<double>(k);
    }
    if (std::accumulate(hardness.begin(), hardness.end(), 0.0) == 0.0) {
        auto plain = options;
        plain.adasyn = false;
        return smote(minority, majority.rows, plain);
    }
    return generate(minority, apportion(hardness, total), options);
}

BalanceResult balance(const FeatureMatrix& m, const OversampleOptions& options) {
    const std::size_t ones = m.count_label(1);
    const std::size_t zeros = m.rows - ones;
    BalanceResult result;
    result.matrix = m;
    result.minority_label = ones <= zeros ? 1 : 0;
    if (ones == zeros) return result;

    std::vector<std::size_t> minority_idx;
    std::vector<std::size_t> majority_idx;
    for (std::size_t i = 0; i < m.rows; ++i) {
        (m.labels[i] == result.minority_label ? minority_idx : majority_idx).push_back(i);
    }
    const auto minority = m.select_rows(minority_idx);
    const auto majority = m.select_rows(majority_idx);
    const auto synthetic = smote(minority, majority, options);
    for (const auto& row : synthetic) result.matrix.append_row(row.values, result.minority_label);
    result.synthetic = synthetic.size();
    return result;
}

}  // namespace sigstream
