#pragma once

#include <string>
#include <vector>

#include "sigstream/cross_validation.hpp"
#include "sigstream/embeddings.hpp"
#include "sigstream/feature_matrix.hpp"

namespace sigstream {

struct PipelineConfig {
    std::vector<int> depths = {2, 3, 4};
    EmbeddingConfig embedding{};
    /// `cv.seed` and `cv.threads` are overwritten from `seed` and `threads`.
    CVConfig cv{};
    std::vector<ClassifierKind> classifiers = {ClassifierKind::Logistic, ClassifierKind::Svm,
                                               ClassifierKind::Knn};
    std::uint64_t seed = 0;
    std::size_t threads = 1;
    /// Subjects with a longer run of missing weeks are excluded at ingestion.
    std::size_t max_consecutive_missing = 2;
};

/// Throws ConfigError on empty depth or classifier lists and depths outside 1..10.
void validate(const PipelineConfig& config);

struct Exclusion {
    std::string subject;
    std::string reason;
};

struct IngestResult {
    std::vector<StreamRecord> kept;
    std::vector<Exclusion> excluded;
};

/// Drops unlabeled subjects, streams that fail validation, streams with fewer
/// than 2 observed values, and streams with a missing run above the limit.
IngestResult ingest(const std::vector<StreamRecord>& records, std::size_t max_consecutive_missing);

/// One row of signature terms (constant excluded) per record, before any
/// standardization. Columns are named by multi-index, e.g. "(2,1)".
FeatureMatrix signature_features(const std::vector<StreamRecord>& records,
                                 const EmbeddingConfig& embedding, int depth,
                                 std::size_t threads = 1);

struct Featurized {
    FeatureMatrix matrix;  // standardized, zero-variance columns removed
    std::vector<std::string> dropped_columns;
    std::size_t total_features = 0;  // before pruning
};

Featurized featurize(const std::vector<StreamRecord>& records, const EmbeddingConfig& embedding,
                     int depth, std::size_t threads = 1);

struct ReportEntry {
    ClassifierKind classifier;
    int depth = 0;
    MetricBundle metrics{};
    std::vector<std::string> selected_features;
    std::size_t total_features = 0;
    std::size_t usable_features = 0;  // after dropping zero-variance columns
    std::vector<HyperParams> chosen;  // per outer fold
    std::size_t evaluated_rows = 0;
};

struct ClassificationReport {
    std::vector<ReportEntry> entries;  // classifier-major, then depth
    std::vector<Exclusion> exclusions;
    std::size_t subjects = 0;
    std::size_t group0 = 0;
    std::size_t group1 = 0;
    /// Synthetic rows added to the minority class on the full set.
    std::size_t synthetic_rows = 0;
    bool paper_mode = false;
};

/// ingest -> per depth: signature features -> nested CV of every classifier,
/// plus the elastic-net selection on the full (standardized, balanced) set that
/// the report lists.
ClassificationReport run_experiment(const std::vector<StreamRecord>& records,
                                    const PipelineConfig& config);

}  // namespace sigstream
