#include "sigstream/signature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace sigstream {

namespace {

void check_depth(int depth) {
    if (depth < 1 || depth > kMaxDepth) {
        throw InvalidInput("signature depth must be in 1.." + std::to_string(kMaxDepth) +
                           ", got " + std::to_string(depth));
    }
}

std::vector<std::size_t> level_offsets(std::size_t dimension, int depth) {
    std::vector<std::size_t> offsets(static_cast<std::size_t>(depth) + 2);
    std::size_t level_size = 1;
    offsets[0] = 0;
    for (int k = 0; k <= depth; ++k) {
        offsets[k + 1] = offsets[k] + level_size;
        level_size *= dimension;
    }
    return offsets;
}

// acc <- acc (x) rhs, truncated. Levels are updated from the top down so every
// lower level of acc read at step n still holds its old value.
void multiply_in_place(std::vector<double>& acc, const std::vector<double>& rhs,
                       const std::vector<std::size_t>& offsets, int depth) {
    for (int n = depth; n >= 1; --n) {
        double* out = acc.data() + offsets[n];
        const std::size_t out_size = offsets[n + 1] - offsets[n];
        // k = 0 term: acc_0 * rhs_n, with acc_0 == 1 for group-like elements but
        // kept general here.
        const double a0 = acc[0];
        const double* rn = rhs.data() + offsets[n];
        for (std::size_t i = 0; i < out_size; ++i) out[i] = out[i] * rhs[0] + a0 * rn[i];
        for (int k = 1; k < n; ++k) {
            const double* ak = acc.data() + offsets[k];
            const std::size_t ak_size = offsets[k + 1] - offsets[k];
            const double* bk = rhs.data() + offsets[n - k];
            const std::size_t bk_size = offsets[n - k + 1] - offsets[n - k];
            double* dest = out;
            for (std::size_t i = 0; i < ak_size; ++i) {
                const double a = ak[i];
                for (std::size_t j = 0; j < bk_size; ++j) dest[j] += a * bk[j];
                dest += bk_size;
            }
        }
    }
    acc[0] *= rhs[0];
}

}  // namespace

// --- Path -------------------------------------------------------------------

Path::Path(std::size_t dimension, std::vector<double> coordinates)
    : dimension_(dimension), coordinates_(std::move(coordinates)) {
    if (dimension_ == 0) throw InvalidInput("path dimension must be positive");
    if (coordinates_.size() % dimension_ != 0) {
        throw InvalidInput("path coordinate count is not a multiple of the dimension");
    }
    if (coordinates_.size() / dimension_ < 2) {
        throw InvalidInput("path needs at least 2 points");
    }
    for (std::size_t i = 0; i < coordinates_.size(); ++i) {
        if (!std::isfinite(coordinates_[i])) {
            throw InvalidInput("path coordinate " + std::to_string(i % dimension_ + 1) +
                               " of point " + std::to_string(i / dimension_) +
                               " is not finite");
        }
    }
}

namespace {
std::vector<double> flatten(const std::vector<std::vector<double>>& points, std::size_t& dim) {
    dim = points.empty() ? 0 : points.front().size();
    std::vector<double> flat;
    flat.reserve(points.size() * dim);
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (points[i].size() != dim) {
            throw InvalidInput("point " + std::to_string(i) + " has " +
                               std::to_string(points[i].size()) + " coordinates, expected " +
                               std::to_string(dim));
        }
        flat.insert(flat.end(), points[i].begin(), points[i].end());
    }
    return flat;
}
}  // namespace

Path::Path(const std::vector<std::vector<double>>& points) : dimension_(0) {
    auto flat = flatten(points, dimension_);
    *this = Path(dimension_, std::move(flat));
}

Path Path::slice(std::size_t first, std::size_t last) const {
    if (first >= last || last >= size()) throw InvalidInput("invalid path slice");
    return Path(dimension_, std::vector<double>(coordinates_.begin() + first * dimension_,
                                                coordinates_.begin() + (last + 1) * dimension_));
}

Path Path::reversed() const {
    std::vector<double> out;
    out.reserve(coordinates_.size());
    for (std::size_t i = size(); i-- > 0;) {
        auto p = point(i);
        out.insert(out.end(), p.begin(), p.end());
    }
    return Path(dimension_, std::move(out));
}

Path Path::concatenated(const Path& tail) const {
    if (tail.dimension_ != dimension_) throw InvalidInput("cannot join paths of different dimension");
    std::vector<double> out = coordinates_;
    out.insert(out.end(), tail.coordinates_.begin(), tail.coordinates_.end());
    return Path(dimension_, std::move(out));
}

Path Path::with_inserted(std::size_t i, std::span<const double> p) const {
    if (p.size() != dimension_ || i + 1 >= size()) throw InvalidInput("invalid point insertion");
    std::vector<double> out = coordinates_;
    out.insert(out.begin() + (i + 1) * dimension_, p.begin(), p.end());
    return Path(dimension_, std::move(out));
}

// --- Multi-indices ----------------------------------------------------------

std::string to_string(const MultiIndex& index) {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < index.size(); ++i) {
        if (i) os << ',';
        os << index[i];
    }
    os << ')';
    return os.str();
}

std::size_t term_count(std::size_t dimension, int depth) {
    std::size_t total = 0;
    std::size_t level = 1;
    for (int k = 1; k <= depth; ++k) {
        level *= dimension;
        total += level;
    }
    return total;
}

std::vector<MultiIndex> multi_indices(std::size_t dimension, int depth) {
    std::vector<MultiIndex> out;
    out.reserve(term_count(dimension, depth));
    for (int k = 1; k <= depth; ++k) {
        MultiIndex word(static_cast<std::size_t>(k), 1);
        while (true) {
            out.push_back(word);
            int pos = k - 1;
            while (pos >= 0 && word[pos] == static_cast<int>(dimension)) word[pos--] = 1;
            if (pos < 0) break;
            ++word[pos];
        }
    }
    return out;
}

// --- TruncatedSignature -----------------------------------------------------

TruncatedSignature::TruncatedSignature(std::size_t dimension, int depth)
    : dimension_(dimension), depth_(depth) {
    if (dimension == 0) throw InvalidInput("signature dimension must be positive");
    check_depth(depth);
    offsets_ = level_offsets(dimension, depth);
    coefficients_.assign(offsets_.back(), 0.0);
    coefficients_[0] = 1.0;
}

TruncatedSignature::TruncatedSignature(std::size_t dimension, int depth,
                                       std::vector<double> coefficients)
    : TruncatedSignature(dimension, depth) {
    if (coefficients.size() != coefficients_.size()) {
        throw InvalidInput("expected " + std::to_string(coefficients_.size()) +
                           " coefficients, got " + std::to_string(coefficients.size()));
    }
    coefficients_ = std::move(coefficients);
}

std::span<const double> TruncatedSignature::level(int k) const {
    if (k < 0 || k > depth_) throw InvalidInput("level out of range");
    return std::span<const double>(coefficients_).subspan(offsets_[k], offsets_[k + 1] - offsets_[k]);
}

std::span<double> TruncatedSignature::level(int k) {
    if (k < 0 || k > depth_) throw InvalidInput("level out of range");
    return std::span<double>(coefficients_).subspan(offsets_[k], offsets_[k + 1] - offsets_[k]);
}

std::size_t TruncatedSignature::flat_index(const MultiIndex& index) const {
    const auto k = static_cast<int>(index.size());
    if (k < 1 || k > depth_) {
        throw InvalidInput("multi-index " + to_string(index) + " exceeds depth " +
                           std::to_string(depth_));
    }
    std::size_t pos = 0;
    for (int letter : index) {
        if (letter < 1 || static_cast<std::size_t>(letter) > dimension_) {
            throw InvalidInput("multi-index " + to_string(index) + " has a letter outside 1.." +
                               std::to_string(dimension_));
        }
        pos = pos * dimension_ + static_cast<std::size_t>(letter - 1);
    }
    return offsets_[k] + pos;
}

double TruncatedSignature::at(const MultiIndex& index) const {
    return coefficients_[flat_index(index)];
}

// --- Algebra ----------------------------------------------------------------

TruncatedSignature chen_product(const TruncatedSignature& a, const TruncatedSignature& b) {
    if (a.dimension() != b.dimension() || a.depth() != b.depth()) {
        throw IncompatibleSignatures(
            "cannot multiply signatures of (dimension, depth) (" + std::to_string(a.dimension()) +
            ", " + std::to_string(a.depth()) + ") and (" + std::to_string(b.dimension()) + ", " +
            std::to_string(b.depth()) + ")");
    }
    std::vector<double> acc(a.coefficients().begin(), a.coefficients().end());
    const std::vector<double> rhs(b.coefficients().begin(), b.coefficients().end());
    multiply_in_place(acc, rhs, level_offsets(a.dimension(), a.depth()), a.depth());
    return TruncatedSignature(a.dimension(), a.depth(), std::move(acc));
}

TruncatedSignature segment_signature(std::span<const double> delta, int depth) {
    TruncatedSignature out(delta.size(), depth);
    auto level1 = out.level(1);
    std::copy(delta.begin(), delta.end(), level1.begin());
    for (int k = 2; k <= depth; ++k) {
        auto prev = out.level(k - 1);
        auto cur = out.level(k);
        const double inv_k = 1.0 / k;
        std::size_t pos = 0;
        for (double p : prev) {
            for (double x : delta) cur[pos++] = p * x * inv_k;
        }
    }
    return out;
}

TruncatedSignature signature(const Path& path, int depth) {
    check_depth(depth);
    const std::size_t d = path.dimension();
    const auto offsets = level_offsets(d, depth);
    std::vector<double> acc(offsets.back(), 0.0);
    acc[0] = 1.0;
    std::vector<double> delta(d);
    for (std::size_t s = 0; s + 1 < path.size(); ++s) {
        auto from = path.point(s);
        auto to = path.point(s + 1);
        for (std::size_t i = 0; i < d; ++i) delta[i] = to[i] - from[i];
        auto seg = segment_signature(delta, depth);
        const std::vector<double> rhs(seg.coefficients().begin(), seg.coefficients().end());
        multiply_in_place(acc, rhs, offsets, depth);
    }
    return TruncatedSignature(d, depth, std::move(acc));
}

// --- Shuffle product --------------------------------------------------------

std::int64_t ShuffleExpansion::total_multiplicity() const {
    std::int64_t total = 0;
    for (const auto& t : terms) total += t.multiplicity;
    return total;
}

std::int64_t ShuffleExpansion::multiplicity(const MultiIndex& index) const {
    for (const auto& t : terms) {
        if (t.index == index) return t.multiplicity;
    }
    return 0;
}

namespace {
void interleave(const MultiIndex& left, std::size_t i, const MultiIndex& right, std::size_t j,
                MultiIndex& word, std::map<MultiIndex, std::int64_t>& out) {
    if (i == left.size() && j == right.size()) {
        ++out[word];
        return;
    }
    if (i < left.size()) {
        word.push_back(left[i]);
        interleave(left, i + 1, right, j, word, out);
        word.pop_back();
    }
    if (j < right.size()) {
        word.push_back(right[j]);
        interleave(left, i, right, j + 1, word, out);
        word.pop_back();
    }
}
}  // namespace

ShuffleExpansion shuffle(const MultiIndex& left, const MultiIndex& right) {
    for (const auto* word : {&left, &right}) {
        if (word->empty()) throw InvalidInput("shuffle operands must be non-empty multi-indices");
        for (int letter : *word) {
            if (letter < 1) throw InvalidInput("multi-index letters are 1-based: " + to_string(*word));
        }
    }
    std::map<MultiIndex, std::int64_t> counts;
    MultiIndex word;
    word.reserve(left.size() + right.size());
    interleave(left, 0, right, 0, word, counts);
    ShuffleExpansion out;
    out.terms.reserve(counts.size());
    for (auto& [index, mult] : counts) out.terms.push_back({index, mult});
    return out;
}

double signed_area(const TruncatedSignature& sig, int i, int j) {
    const int d = static_cast<int>(sig.dimension());
    if (i == j || i < 1 || j < 1 || i > d || j > d) {
        throw InvalidAxes("signed area needs two distinct axes in 1.." + std::to_string(d) +
                          ", got (" + std::to_string(i) + ", " + std::to_string(j) + ")");
    }
    if (sig.depth() < 2) throw InvalidAxes("signed area needs a signature of depth >= 2");
    return 0.5 * (sig.at({i, j}) - sig.at({j, i}));
}

}  // namespace sigstream
