#include "sigstream/pipeline.hpp"

#include "sigstream/oversampling.hpp"
#include "sigstream/signature.hpp"

namespace sigstream {

void validate(const PipelineConfig& config) {
    if (config.depths.empty()) throw ConfigError("at least one signature depth is required");
    for (int depth : config.depths) {
        if (depth < 1 || depth > kMaxDepth) {
            throw ConfigError("signature depth " + std::to_string(depth) + " outside 1.." +
                              std::to_string(kMaxDepth));
        }
    }
    if (config.classifiers.empty()) throw ConfigError("at least one classifier is required");
}

IngestResult ingest(const std::vector<StreamRecord>& records, std::size_t max_consecutive_missing) {
    IngestResult out;
    for (const auto& r : records) {
        if (!r.label) {
            out.excluded.push_back({r.subject, "no class label"});
            continue;
        }
        try {
            validate(r);
        } catch (const InvalidInput& e) {
            out.excluded.push_back({r.subject, e.what()});
            continue;
        }
        if (r.observed_count() < 2) {
            out.excluded.push_back({r.subject, "fewer than 2 observed values"});
            continue;
        }
        if (r.longest_missing_run() > max_consecutive_missing) {
            out.excluded.push_back({r.subject, std::to_string(r.longest_missing_run()) +
                                                   " consecutive missing values"});
            continue;
        }
        out.kept.push_back(r);
    }
    return out;
}

FeatureMatrix signature_features(const std::vector<StreamRecord>& records,
                                 const EmbeddingConfig& embedding, int depth, std::size_t threads) {
    const std::size_t dim = embedding_dimension(embedding);
    const std::size_t width = term_count(dim, depth);
    FeatureMatrix m(records.size(), width);
    for (const auto& index : multi_indices(dim, depth)) m.column_names.push_back(to_string(index));
    parallel_for(records.size(), threads, [&](std::size_t i) {
        const auto& r = records[i];
        if (r.observed_count() < 2) {
            throw InvalidInput("record '" + r.subject + "' has fewer than 2 observed values");
        }
        try {
            const auto sig = signature(embed(r, embedding), depth);
            auto terms = sig.terms();
            std::copy(terms.begin(), terms.end(), m.row(i).begin());
        } catch (const InvalidInput& e) {
            throw InvalidInput("record '" + r.subject + "': " + e.what());
        }
        m.labels[i] = r.label.value_or(0);
    });
    return m;
}

Featurized featurize(const std::vector<StreamRecord>& records, const EmbeddingConfig& embedding,
                     int depth, std::size_t threads) {
    const auto raw = signature_features(records, embedding, depth, threads);
    const auto scaler = Standardizer::fit(raw);
    Featurized out;
    out.matrix = scaler.apply(raw);
    out.total_features = raw.cols;
    for (std::size_t j : scaler.dropped_columns()) out.dropped_columns.push_back(raw.column_names[j]);
    return out;
}

ClassificationReport run_experiment(const std::vector<StreamRecord>& records,
                                    const PipelineConfig& config) {
    validate(config);
    ClassificationReport report;
    report.paper_mode = !config.cv.smote_inside_folds;

    auto ingested = ingest(records, config.max_consecutive_missing);
    report.exclusions = std::move(ingested.excluded);
    const auto& kept = ingested.kept;
    report.subjects = kept.size();
    for (const auto& r : kept) (*r.label == 1 ? report.group1 : report.group0)++;
    if (report.group0 == 0 || report.group1 == 0) {
        throw ConfigError("both class labels must be present after ingestion (got " +
                          std::to_string(report.group0) + " / " + std::to_string(report.group1) + ")");
    }

    CVConfig cv = config.cv;
    cv.seed = config.seed;
    cv.threads = config.threads;

    std::vector<ClassifierSpec> specs;
    for (auto kind : config.classifiers) specs.push_back(ClassifierSpec::defaults(kind));

    std::vector<std::vector<ReportEntry>> by_classifier(specs.size());
    for (int depth : config.depths) {
        FeatureMatrix raw;
        try {
            raw = signature_features(kept, config.embedding, depth, config.threads);
        } catch (const std::exception& e) {
            throw InvalidInput(std::string("featurize: ") + e.what());
        }

        // Full-set selection, as listed in the report.
        const auto scaler = Standardizer::fit(raw);
        FeatureMatrix full = scaler.apply(raw);
        if (cv.oversample) {
            OversampleOptions opts;
            opts.k = cv.smote_k;
            opts.adasyn = cv.adasyn;
            opts.seed = cv.seed;
            auto balanced = balance(full, opts);
            report.synthetic_rows = balanced.synthetic;
            full = std::move(balanced.matrix);
        }
        std::vector<std::string> selected;
        if (cv.selection) {
            for (std::size_t j : select_features(full, *cv.selection, cv.seed).columns) {
                selected.push_back(full.column_names[j]);
            }
        }

        std::vector<CVResult> results;
        try {
            results = nested_cv(raw, specs, cv);
        } catch (const std::exception& e) {
            throw std::runtime_error("nested cross-validation at depth " + std::to_string(depth) +
                                     ": " + e.what());
        }
        for (std::size_t s = 0; s < specs.size(); ++s) {
            ReportEntry entry;
            entry.classifier = specs[s].kind;
            entry.depth = depth;
            entry.metrics = results[s].metrics;
            entry.selected_features = selected;
            entry.total_features = raw.cols;
            entry.usable_features = scaler.kept_columns().size();
            entry.chosen = results[s].chosen;
            entry.evaluated_rows = results[s].truth.size();
            by_classifier[s].push_back(std::move(entry));
        }
    }
    for (auto& entries : by_classifier) {
        for (auto& e : entries) report.entries.push_back(std::move(e));
    }
    return report;
}

}  // namespace sigstream
