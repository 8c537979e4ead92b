#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sigstream/errors.hpp"

namespace sigstream {

/// Largest supported truncation depth. Level sizes grow as d^L.
inline constexpr int kMaxDepth = 10;

/// Ordered points in R^d, read as the piecewise-linear curve through them.
/// The index order of the points is the parametrization.
class Path {
public:
    /// Takes ownership of row-major coordinates. Throws InvalidInput unless
    /// dimension > 0, there are at least two points and all coordinates are finite.
    Path(std::size_t dimension, std::vector<double> coordinates);
    explicit Path(const std::vector<std::vector<double>>& points);

    std::size_t dimension() const noexcept { return dimension_; }
    std::size_t size() const noexcept { return coordinates_.size() / dimension_; }

    std::span<const double> point(std::size_t i) const {
        return {coordinates_.data() + i * dimension_, dimension_};
    }
    double operator()(std::size_t i, std::size_t axis) const {
        return coordinates_[i * dimension_ + axis];
    }
    std::span<const double> coordinates() const noexcept { return coordinates_; }

    /// Points first..last inclusive.
    Path slice(std::size_t first, std::size_t last) const;
    Path reversed() const;
    /// Appends the points of `tail`; a gap between the end of this path and the
    /// start of `tail` becomes a straight segment.
    Path concatenated(const Path& tail) const;

    /// Inserts `point` between points i and i+1.
    Path with_inserted(std::size_t i, std::span<const double> point) const;

    bool operator==(const Path&) const = default;

private:
    std::size_t dimension_;
    std::vector<double> coordinates_;
};

/// Word over the alphabet {1..d}; letters are 1-based as in X^{(1,2)}.
using MultiIndex = std::vector<int>;

std::string to_string(const MultiIndex& index);

/// Number of non-constant coefficients d + d^2 + ... + d^L.
std::size_t term_count(std::size_t dimension, int depth);

/// All multi-indices of length 1..depth in graded-lexicographic order.
std::vector<MultiIndex> multi_indices(std::size_t dimension, int depth);

/// Truncated element of the tensor algebra: the constant term followed by
/// levels 1..depth, each stored lexicographically in one flat buffer.
class TruncatedSignature {
public:
    /// The identity element (constant 1, all other terms 0).
    TruncatedSignature(std::size_t dimension, int depth);
    TruncatedSignature(std::size_t dimension, int depth, std::vector<double> coefficients);

    static TruncatedSignature identity(std::size_t dimension, int depth) {
        return TruncatedSignature(dimension, depth);
    }

    std::size_t dimension() const noexcept { return dimension_; }
    int depth() const noexcept { return depth_; }

    /// Every coefficient including the leading constant term.
    std::span<const double> coefficients() const noexcept { return coefficients_; }
    /// Coefficients of levels 1..depth; the feature vector of a path.
    std::span<const double> terms() const noexcept {
        return std::span<const double>(coefficients_).subspan(1);
    }
    std::span<const double> level(int k) const;
    std::span<double> level(int k);

    double at(const MultiIndex& index) const;
    std::size_t flat_index(const MultiIndex& index) const;

private:
    std::size_t dimension_;
    int depth_;
    std::vector<std::size_t> offsets_;  // offsets_[k] = start of level k, offsets_[depth+1] = size
    std::vector<double> coefficients_;
};

/// Truncated tensor product (a (x) b)_n = sum_k a_k (x) b_{n-k}.
TruncatedSignature chen_product(const TruncatedSignature& a, const TruncatedSignature& b);

/// Truncated tensor exponential of a single increment: level k is delta^{(x)k} / k!.
TruncatedSignature segment_signature(std::span<const double> delta, int depth);

/// Signature of the piecewise-linear path, truncated at `depth`.
TruncatedSignature signature(const Path& path, int depth);

/// A word of a shuffle expansion and how many interleavings produce it.
struct ShuffleTerm {
    MultiIndex index;
    std::int64_t multiplicity;
    bool operator==(const ShuffleTerm&) const = default;
};

/// Terms sorted lexicographically by word.
struct ShuffleExpansion {
    std::vector<ShuffleTerm> terms;

    std::int64_t total_multiplicity() const;
    std::int64_t multiplicity(const MultiIndex& index) const;
};

/// Order-preserving interleavings of `left` and `right` with multiplicities.
ShuffleExpansion shuffle(const MultiIndex& left, const MultiIndex& right);

/// Levy area 1/2 (S^{(i,j)} - S^{(j,i)}), axes 1-based.
double signed_area(const TruncatedSignature& sig, int i, int j);

/// Single coefficient X^I computed by direct iterated integration: on each
/// segment the running integrals are polynomials in the segment parameter and
/// are integrated exactly. Shares no code with signature().
double signature_oracle(const Path& path, const MultiIndex& index);

}  // namespace sigstream
