#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sigstream/feature_matrix.hpp"

namespace sigstream {

struct OversampleOptions {
    /// Minority neighbours considered per point; clamped to minority size - 1.
    std::size_t k = 5;
    /// Spread generation by the share of majority rows among each minority
    /// row's k nearest neighbours in the pooled set.
    bool adasyn = false;
    std::uint64_t seed = 0;
    std::uint64_t substream = 0;
    /// Interpolation weight for every synthetic row instead of a uniform draw.
    std::optional<double> fixed_gap;
};

/// x_base + gap * (x_neighbor - x_base); indices refer to minority rows.
struct SyntheticRow {
    std::vector<double> values;
    std::size_t base;
    std::size_t neighbor;
    double gap;
};

/// k nearest rows of `rows` to row `i` (itself excluded), ties by lower index.
std::vector<std::size_t> nearest_rows(const FeatureMatrix& rows, std::size_t i, std::size_t k);

/// Plain SMOTE: emits majority_count - minority.rows synthetic rows, spread
/// round-robin over the minority rows. Throws InvalidInput for fewer than 2
/// minority rows or when `adasyn` is requested (it needs the majority rows).
std::vector<SyntheticRow> smote(const FeatureMatrix& minority, std::size_t majority_count,
                                const OversampleOptions& options);

/// SMOTE, or ADASYN weighting when `options.adasyn` is set.
std::vector<SyntheticRow> smote(const FeatureMatrix& minority, const FeatureMatrix& majority,
                                const OversampleOptions& options);

struct BalanceResult {
    FeatureMatrix matrix;  // original rows followed by synthetic minority rows
    int minority_label = 1;
    std::size_t synthetic = 0;
};

/// Oversamples the smaller class of `m` until both classes have equal counts.
BalanceResult balance(const FeatureMatrix& m, const OversampleOptions& options);

}  // namespace sigstream
