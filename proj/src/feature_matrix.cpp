#include "sigstream/feature_matrix.hpp"

#include <algorithm>
#include <cmath>

namespace sigstream {

FeatureMatrix::FeatureMatrix(std::size_t r, std::size_t c)
    : rows(r), cols(c), data(r * c, 0.0), labels(r, 0) {}

void FeatureMatrix::append_row(std::span<const double> values, int label) {
    if (rows == 0 && cols == 0 && data.empty()) cols = values.size();
    if (values.size() != cols) throw InvalidInput("row width does not match the matrix");
    data.insert(data.end(), values.begin(), values.end());
    labels.push_back(label);
    ++rows;
}

FeatureMatrix FeatureMatrix::select_rows(std::span<const std::size_t> indices) const {
    FeatureMatrix out;
    out.cols = cols;
    out.column_names = column_names;
    out.standardized = standardized;
    out.data.reserve(indices.size() * cols);
    for (std::size_t i : indices) {
        auto r = row(i);
        out.data.insert(out.data.end(), r.begin(), r.end());
        out.labels.push_back(labels[i]);
    }
    out.rows = indices.size();
    return out;
}

FeatureMatrix FeatureMatrix::select_columns(std::span<const std::size_t> indices) const {
    FeatureMatrix out(rows, indices.size());
    out.labels = labels;
    out.standardized = standardized;
    for (std::size_t j : indices) {
        out.column_names.push_back(j < column_names.size() ? column_names[j] : std::to_string(j));
    }
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t c = 0; c < indices.size(); ++c) out(i, c) = (*this)(i, indices[c]);
    }
    return out;
}

std::size_t FeatureMatrix::count_label(int label) const {
    return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), label));
}

void FeatureMatrix::check() const {
    if (data.size() != rows * cols) throw InvalidInput("feature matrix is not rectangular");
    if (labels.size() != rows) throw InvalidInput("label count does not match row count");
    if (!column_names.empty() && column_names.size() != cols) {
        throw InvalidInput("column name count does not match column count");
    }
    for (int y : labels) {
        if (y != 0 && y != 1) throw InvalidInput("labels must be 0 or 1");
    }
    for (double v : data) {
        if (!std::isfinite(v)) throw InvalidInput("feature matrix holds a non-finite value");
    }
}

Standardizer Standardizer::fit(const FeatureMatrix& m) {
    if (m.rows < 2) throw InvalidInput("standardization needs at least 2 rows");
    Standardizer s;
    s.means_.assign(m.cols, 0.0);
    s.sds_.assign(m.cols, 0.0);
    for (std::size_t j = 0; j < m.cols; ++j) {
        double mean = 0.0;
        for (std::size_t i = 0; i < m.rows; ++i) mean += m(i, j);
        mean /= static_cast<double>(m.rows);
        double ss = 0.0;
        for (std::size_t i = 0; i < m.rows; ++i) {
            const double dev = m(i, j) - mean;
            ss += dev * dev;
        }
        const double sd = std::sqrt(ss / static_cast<double>(m.rows - 1));
        s.means_[j] = mean;
        s.sds_[j] = sd;
        if (sd > 1e-12 * std::max(1.0, std::abs(mean))) {
            s.kept_.push_back(j);
        } else {
            s.dropped_.push_back(j);
        }
    }
    return s;
}

FeatureMatrix Standardizer::apply(const FeatureMatrix& m) const {
    if (m.cols != means_.size()) throw InvalidInput("standardizer was fitted on a different width");
    FeatureMatrix out(m.rows, kept_.size());
    out.labels = m.labels;
    out.standardized = true;
    for (std::size_t j : kept_) {
        out.column_names.push_back(j < m.column_names.size() ? m.column_names[j] : std::to_string(j));
    }
    for (std::size_t i = 0; i < m.rows; ++i) {
        for (std::size_t c = 0; c < kept_.size(); ++c) {
            const std::size_t j = kept_[c];
            out(i, c) = (m(i, j) - means_[j]) / sds_[j];
        }
    }
    return out;
}

FeatureMatrix standardize(const FeatureMatrix& m) {
    return Standardizer::fit(m).apply(m);
}

}  // namespace sigstream
