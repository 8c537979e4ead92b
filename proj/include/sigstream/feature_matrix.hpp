#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "sigstream/errors.hpp"

namespace sigstream {

/// Dense row-major design matrix with binary labels and named columns.
struct FeatureMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;
    std::vector<std::string> column_names;
    std::vector<int> labels;
    bool standardized = false;

    FeatureMatrix() = default;
    FeatureMatrix(std::size_t rows, std::size_t cols);

    std::span<const double> row(std::size_t i) const { return {data.data() + i * cols, cols}; }
    std::span<double> row(std::size_t i) { return {data.data() + i * cols, cols}; }
    double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
    double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }

    void append_row(std::span<const double> values, int label);

    /// Rows in the given order.
    FeatureMatrix select_rows(std::span<const std::size_t> indices) const;
    /// Columns in the given order.
    FeatureMatrix select_columns(std::span<const std::size_t> indices) const;

    std::size_t count_label(int label) const;
    /// Throws InvalidInput unless rectangular with labels in {0, 1}.
    void check() const;
};

/// Column means and sample standard deviations fitted on one matrix and applied
/// to others. Columns whose spread is numerically zero are dropped.
class Standardizer {
public:
    static Standardizer fit(const FeatureMatrix& m);

    /// Standardized copy holding only the kept columns.
    FeatureMatrix apply(const FeatureMatrix& m) const;

    std::span<const std::size_t> kept_columns() const { return kept_; }
    std::span<const std::size_t> dropped_columns() const { return dropped_; }
    std::span<const double> means() const { return means_; }
    std::span<const double> deviations() const { return sds_; }

private:
    std::vector<double> means_;
    std::vector<double> sds_;
    std::vector<std::size_t> kept_;
    std::vector<std::size_t> dropped_;
};

/// Fits on `m` and applies to it.
FeatureMatrix standardize(const FeatureMatrix& m);

}  // namespace sigstream
