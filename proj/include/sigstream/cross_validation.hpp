#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sigstream/classifiers.hpp"
#include "sigstream/feature_matrix.hpp"
#include "sigstream/metrics.hpp"
#include "sigstream/rng.hpp"

namespace sigstream {

enum class ClassifierKind { Logistic, Svm, Knn };

std::string to_string(ClassifierKind kind);
ClassifierKind parse_classifier_kind(const std::string& name);

/// One grid point. Only the fields of the matching classifier are read.
struct HyperParams {
    double lambda = 0.0;
    double rho = 0.0;
    double c = 0.0;
    std::size_t k = 0;

    std::string describe(ClassifierKind kind) const;
    bool operator==(const HyperParams&) const = default;
};

struct ClassifierSpec {
    ClassifierKind kind;
    /// Searched in order; accuracy ties keep the earliest entry, so the
    /// strongest regularization comes first.
    std::vector<HyperParams> grid;

    /// Logistic: lambda in 10 log-spaced values 1 .. 1e-3 (descending) x rho in
    /// {0.2, 0.5, 0.8}. SVM: C in 10 log-spaced values 1e-3 .. 1e2. kNN: k in {1, 3, 5, 7}.
    static ClassifierSpec defaults(ClassifierKind kind);
};

/// Elastic-net feature selection. lambda is picked from
/// lambda_max * 10^(-2 i / (steps - 1)) by cross-validated log-loss.
struct SelectionConfig {
    double rho = 0.5;
    std::size_t steps = 10;
    std::size_t folds = 3;
};

struct SelectionResult {
    std::vector<std::size_t> columns;  // indices into the input matrix
    double lambda = 0.0;
    bool fallback = false;  // nothing survived; kept the single strongest column
};

/// Record of one preprocessing fit, for leak audits. Row indices refer to the
/// matrix passed to nested_cv. `inner` is -1 for the outer refit.
struct FoldAudit {
    int outer = -1;
    int inner = -1;
    std::vector<std::size_t> fit_rows;
    std::vector<std::size_t> eval_rows;
};

struct CVConfig {
    std::size_t outer_folds = 6;
    std::size_t inner_folds = 3;
    std::uint64_t seed = 0;
    /// Standardize, oversample and select features on training folds only.
    /// When false the whole set is standardized and balanced before splitting.
    bool smote_inside_folds = true;
    bool oversample = true;
    bool adasyn = true;
    std::size_t smote_k = 5;
    std::optional<SelectionConfig> selection = SelectionConfig{};
    /// Worker threads for outer folds; results do not depend on it.
    std::size_t threads = 1;
    /// Called once per preprocessing fit, possibly from several threads.
    std::function<void(const FoldAudit&)> audit;
};

struct CVResult {
    ClassifierKind kind;
    MetricBundle metrics;
    std::vector<int> truth;         // per evaluated row, in row order
    std::vector<int> predicted;
    std::vector<double> scores;
    std::vector<HyperParams> chosen;  // per outer fold
    std::vector<std::size_t> selected_per_fold;  // feature count per outer fold
};

/// Shuffles each class with `rng` and deals its members round-robin into k
/// folds. Throws ConfigError when a class has fewer than k members.
std::vector<std::vector<std::size_t>> stratified_folds(std::span<const int> labels, std::size_t k,
                                                       CounterRng& rng);

SelectionResult select_features(const FeatureMatrix& standardized, const SelectionConfig& config,
                                std::uint64_t seed, std::uint64_t substream = 0);

/// Outer stratified K-fold for error estimation with an inner stratified CV per
/// outer fold choosing hyperparameters by accuracy. `x` holds raw features; all
/// classifiers share the preprocessing of each fold. Results are ordered like `specs`.
std::vector<CVResult> nested_cv(const FeatureMatrix& x, std::span<const ClassifierSpec> specs,
                                const CVConfig& config);

CVResult nested_cv(const FeatureMatrix& x, const ClassifierSpec& spec, const CVConfig& config);

/// Runs fn(0..n-1) on up to `threads` workers.
void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& fn);

}  // namespace sigstream
