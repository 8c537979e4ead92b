#include "sigstream/cross_validation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "sigstream/oversampling.hpp"

namespace sigstream {

std::string to_string(ClassifierKind kind) {
    switch (kind) {
        case ClassifierKind::Logistic: return "logistic";
        case ClassifierKind::Svm: return "svm";
        case ClassifierKind::Knn: return "knn";
    }
    return "unknown";
}

ClassifierKind parse_classifier_kind(const std::string& name) {
    for (auto kind : {ClassifierKind::Logistic, ClassifierKind::Svm, ClassifierKind::Knn}) {
        if (to_string(kind) == name) return kind;
    }
    throw InvalidInput("unknown classifier '" + name + "' (expected logistic, svm or knn)");
}

std::string HyperParams::describe(ClassifierKind kind) const {
    std::ostringstream os;
    os.precision(6);
    switch (kind) {
        case ClassifierKind::Logistic: os << "lambda=" << lambda << ",rho=" << rho; break;
        case ClassifierKind::Svm: os << "C=" << c; break;
        case ClassifierKind::Knn: os << "k=" << k; break;
    }
    return os.str();
}

namespace {
std::vector<double> log_space(double from_exp, double to_exp, std::size_t steps) {
    std::vector<double> out(steps);
    for (std::size_t i = 0; i < steps; ++i) {
        const double e = from_exp + (to_exp - from_exp) * static_cast<double>(i) /
                                        static_cast<double>(steps - 1);
        out[i] = std::pow(10.0, e);
    }
    return out;
}
}  // namespace

ClassifierSpec ClassifierSpec::defaults(ClassifierKind kind) {
    ClassifierSpec spec{kind, {}};
    switch (kind) {
        case ClassifierKind::Logistic:
            for (double lambda : log_space(0.0, -3.0, 10)) {
                for (double rho : {0.2, 0.5, 0.8}) spec.grid.push_back({lambda, rho, 0.0, 0});
            }
            break;
        case ClassifierKind::Svm:
            for (double c : log_space(-3.0, 2.0, 10)) spec.grid.push_back({0.0, 0.0, c, 0});
            break;
        case ClassifierKind::Knn:
            for (std::size_t k : {1, 3, 5, 7}) spec.grid.push_back({0.0, 0.0, 0.0, k});
            break;
    }
    return spec;
}

void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& fn) {
    threads = std::max<std::size_t>(1, std::min(threads, n));
    if (threads == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
}

std::vector<std::vector<std::size_t>> stratified_folds(std::span<const int> labels, std::size_t k,
                                                       CounterRng& rng) {
    if (k < 2) throw ConfigError("cross-validation needs at least 2 folds");
    std::vector<std::vector<std::size_t>> folds(k);
    std::size_t next_fold = 0;
    for (int cls : {0, 1}) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (labels[i] == cls) members.push_back(i);
        }
        if (members.size() < k) {
            throw ConfigError("class " + std::to_string(cls) + " has " +
                              std::to_string(members.size()) + " members, fewer than " +
                              std::to_string(k) + " folds");
        }
        for (std::size_t i = members.size(); i > 1; --i) {
            std::swap(members[i - 1], members[rng.below(i)]);
        }
        // Continue dealing where the previous class stopped so fold sizes stay level.
        for (std::size_t idx : members) {
            folds[next_fold].push_back(idx);
            next_fold = (next_fold + 1) % k;
        }
    }
    for (auto& f : folds) std::sort(f.begin(), f.end());
    return folds;
}

namespace {

double mean_log_loss(const FeatureMatrix& x, const LinearModel& model) {
    double loss = 0.0;
    for (std::size_t i = 0; i < x.rows; ++i) {
        const double margin = (x.labels[i] == 1 ? 1.0 : -1.0) * model.decision(x.row(i));
        loss += margin > 0 ? std::log1p(std::exp(-margin)) : -margin + std::log1p(std::exp(margin));
    }
    return loss / static_cast<double>(x.rows);
}

std::vector<std::size_t> complement(std::size_t n, const std::vector<std::size_t>& excluded) {
    std::vector<bool> skip(n, false);
    for (std::size_t i : excluded) skip[i] = true;
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < n; ++i) {
        if (!skip[i]) out.push_back(i);
    }
    return out;
}

std::vector<std::size_t> gather(std::span<const std::size_t> base,
                                const std::vector<std::size_t>& positions) {
    std::vector<std::size_t> out;
    out.reserve(positions.size());
    for (std::size_t p : positions) out.push_back(base[p]);
    return out;
}

}  // namespace

SelectionResult select_features(const FeatureMatrix& x, const SelectionConfig& config,
                                std::uint64_t seed, std::uint64_t substream) {
    SelectionResult result;
    if (x.cols == 0) return result;
    if (config.steps < 1) throw ConfigError("feature selection needs at least one lambda step");

    const double lambda_max = elastic_net_lambda_max(x, config.rho);
    std::vector<double> lambdas(config.steps, lambda_max);
    for (std::size_t i = 1; i < config.steps; ++i) {
        lambdas[i] = lambda_max * std::pow(10.0, -2.0 * static_cast<double>(i) /
                                                     static_cast<double>(config.steps - 1));
    }

    const std::size_t smallest_class = std::min(x.count_label(0), x.count_label(1));
    const std::size_t folds = std::min(config.folds, smallest_class);
    std::size_t best = lambdas.size() / 2;
    if (folds >= 2 && lambda_max > 0.0) {
        CounterRng rng(seed, "selection", substream);
        const auto split = stratified_folds(x.labels, folds, rng);
        std::vector<double> loss(lambdas.size(), 0.0);
        for (const auto& held_out : split) {
            const auto train = x.select_rows(complement(x.rows, held_out));
            const auto test = x.select_rows(held_out);
            if (train.count_label(1) == 0 || train.count_label(0) == 0) continue;
            for (std::size_t l = 0; l < lambdas.size(); ++l) {
                const auto model = fit_elastic_net_logistic(train, lambdas[l], config.rho);
                loss[l] += mean_log_loss(test, model) * static_cast<double>(test.rows);
            }
        }
        best = static_cast<std::size_t>(std::min_element(loss.begin(), loss.end()) - loss.begin());
    }
    result.lambda = lambdas[best];
    if (lambda_max > 0.0) {
        result.columns = fit_elastic_net_logistic(x, result.lambda, config.rho).support();
    }
    if (result.columns.empty()) {
        // Keep the column most correlated with the label.
        const double ybar = static_cast<double>(x.count_label(1)) / static_cast<double>(x.rows);
        std::size_t arg = 0;
        double top = -1.0;
        for (std::size_t j = 0; j < x.cols; ++j) {
            double s = 0.0;
            for (std::size_t i = 0; i < x.rows; ++i) s += x(i, j) * (x.labels[i] - ybar);
            if (std::abs(s) > top) {
                top = std::abs(s);
                arg = j;
            }
        }
        result.columns = {arg};
        result.fallback = true;
    }
    return result;
}

namespace {

struct Prepared {
    FeatureMatrix train;
    FeatureMatrix eval;
    std::size_t features = 0;
};

struct Predictions {
    std::vector<int> labels;
    std::vector<double> scores;
};

Predictions fit_predict(ClassifierKind kind, const HyperParams& params, const FeatureMatrix& train,
                        const FeatureMatrix& eval) {
    Predictions out;
    if (kind == ClassifierKind::Knn) {
        auto knn = knn_predict(train, eval, std::min(params.k, train.rows));
        out.labels = std::move(knn.labels);
        out.scores = std::move(knn.scores);
        return out;
    }
    const LinearModel model = kind == ClassifierKind::Logistic
                                  ? fit_elastic_net_logistic(train, params.lambda, params.rho)
                                  : fit_linear_svm(train, params.c);
    for (std::size_t i = 0; i < eval.rows; ++i) {
        const double s = model.decision(eval.row(i));
        out.scores.push_back(s);
        out.labels.push_back(s > 0.0 ? 1 : 0);
    }
    return out;
}

class NestedRun {
public:
    NestedRun(const FeatureMatrix& x, std::span<const ClassifierSpec> specs, const CVConfig& config)
        : x_(x), specs_(specs), config_(config) {}

    std::vector<CVResult> run() {
        FeatureMatrix data = x_;
        if (!config_.smote_inside_folds) data = preprocess_globally();

        CounterRng outer_rng(config_.seed, "outer-folds");
        const auto outer = stratified_folds(data.labels, config_.outer_folds, outer_rng);

        const std::size_t n_specs = specs_.size();
        std::vector<std::vector<Predictions>> fold_predictions(
            outer.size(), std::vector<Predictions>(n_specs));
        std::vector<std::vector<HyperParams>> chosen(outer.size(), std::vector<HyperParams>(n_specs));
        std::vector<std::size_t> features(outer.size(), 0);

        parallel_for(outer.size(), config_.threads, [&](std::size_t o) {
            const auto train_rows = complement(data.rows, outer[o]);
            const auto best = tune(data, train_rows, static_cast<int>(o));
            const auto prepared = prepare(data, train_rows, outer[o], static_cast<int>(o), -1);
            features[o] = prepared.features;
            for (std::size_t s = 0; s < n_specs; ++s) {
                chosen[o][s] = best[s];
                fold_predictions[o][s] =
                    fit_predict(specs_[s].kind, best[s], prepared.train, prepared.eval);
            }
        });

        std::vector<CVResult> results(n_specs);
        for (std::size_t s = 0; s < n_specs; ++s) {
            auto& r = results[s];
            r.kind = specs_[s].kind;
            r.truth = data.labels;
            r.predicted.assign(data.rows, 0);
            r.scores.assign(data.rows, 0.0);
            for (std::size_t o = 0; o < outer.size(); ++o) {
                for (std::size_t t = 0; t < outer[o].size(); ++t) {
                    r.predicted[outer[o][t]] = fold_predictions[o][s].labels[t];
                    r.scores[outer[o][t]] = fold_predictions[o][s].scores[t];
                }
                r.chosen.push_back(chosen[o][s]);
                r.selected_per_fold.push_back(features[o]);
            }
            r.metrics = compute_metrics(r.truth, r.predicted, r.scores);
        }
        return results;
    }

private:
    std::uint64_t substream(int outer, int inner) const {
        return static_cast<std::uint64_t>(outer + 1) * 1024u + static_cast<std::uint64_t>(inner + 1);
    }

    FeatureMatrix preprocess_globally() const {
        FeatureMatrix data = standardize(x_);
        if (config_.oversample) {
            data = balance(data, oversample_options(substream(-1, -1))).matrix;
        }
        if (config_.selection) {
            const auto sel = select_features(data, *config_.selection, config_.seed, substream(-1, -1));
            data = data.select_columns(sel.columns);
        }
        if (config_.audit) {
            FoldAudit audit;
            audit.fit_rows.resize(x_.rows);
            for (std::size_t i = 0; i < x_.rows; ++i) audit.fit_rows[i] = i;
            config_.audit(audit);
        }
        return data;
    }

    OversampleOptions oversample_options(std::uint64_t sub) const {
        OversampleOptions o;
        o.k = config_.smote_k;
        o.adasyn = config_.adasyn;
        o.seed = config_.seed;
        o.substream = sub;
        return o;
    }

    Prepared prepare(const FeatureMatrix& data, const std::vector<std::size_t>& fit_rows,
                     const std::vector<std::size_t>& eval_rows, int outer, int inner) const {
        Prepared p;
        if (!config_.smote_inside_folds) {
            p.train = data.select_rows(fit_rows);
            p.eval = data.select_rows(eval_rows);
            p.features = p.train.cols;
            return p;
        }
        const auto raw_train = data.select_rows(fit_rows);
        const auto scaler = Standardizer::fit(raw_train);
        p.train = scaler.apply(raw_train);
        p.eval = scaler.apply(data.select_rows(eval_rows));
        if (config_.oversample) {
            const std::size_t ones = p.train.count_label(1);
            if (ones >= 2 && p.train.rows - ones >= 2) {
                p.train = balance(p.train, oversample_options(substream(outer, inner))).matrix;
            }
        }
        if (config_.selection) {
            const auto sel =
                select_features(p.train, *config_.selection, config_.seed, substream(outer, inner));
            p.train = p.train.select_columns(sel.columns);
            p.eval = p.eval.select_columns(sel.columns);
        }
        p.features = p.train.cols;
        if (config_.audit) config_.audit(FoldAudit{outer, inner, fit_rows, eval_rows});
        return p;
    }

    // Best grid point per classifier by pooled inner-fold accuracy.
    std::vector<HyperParams> tune(const FeatureMatrix& data, const std::vector<std::size_t>& train_rows,
                                  int outer) const {
        std::vector<int> train_labels;
        for (std::size_t i : train_rows) train_labels.push_back(data.labels[i]);
        CounterRng rng(config_.seed, "inner-folds", static_cast<std::uint64_t>(outer));
        const auto inner = stratified_folds(train_labels, config_.inner_folds, rng);

        std::vector<std::vector<std::size_t>> correct(specs_.size());
        for (std::size_t s = 0; s < specs_.size(); ++s) correct[s].assign(specs_[s].grid.size(), 0);

        for (std::size_t f = 0; f < inner.size(); ++f) {
            const auto fit_rows = gather(train_rows, complement(train_rows.size(), inner[f]));
            const auto eval_rows = gather(train_rows, inner[f]);
            const auto prepared = prepare(data, fit_rows, eval_rows, outer, static_cast<int>(f));
            for (std::size_t s = 0; s < specs_.size(); ++s) {
                for (std::size_t g = 0; g < specs_[s].grid.size(); ++g) {
                    const auto pred =
                        fit_predict(specs_[s].kind, specs_[s].grid[g], prepared.train, prepared.eval);
                    for (std::size_t t = 0; t < pred.labels.size(); ++t) {
                        correct[s][g] += pred.labels[t] == prepared.eval.labels[t];
                    }
                }
            }
        }
        std::vector<HyperParams> best(specs_.size());
        for (std::size_t s = 0; s < specs_.size(); ++s) {
            const auto it = std::max_element(correct[s].begin(), correct[s].end());
            best[s] = specs_[s].grid[static_cast<std::size_t>(it - correct[s].begin())];
        }
        return best;
    }

    const FeatureMatrix& x_;
    std::span<const ClassifierSpec> specs_;
    const CVConfig& config_;
};

}  // namespace

std::vector<CVResult> nested_cv(const FeatureMatrix& x, std::span<const ClassifierSpec> specs,
                                const CVConfig& config) {
    x.check();
    if (specs.empty()) throw ConfigError("nested CV needs at least one classifier");
    for (const auto& spec : specs) {
        if (spec.grid.empty()) throw ConfigError(to_string(spec.kind) + " has an empty grid");
    }
    if (config.outer_folds < 2 || config.inner_folds < 2) {
        throw ConfigError("outer and inner fold counts must be at least 2");
    }
    for (int cls : {0, 1}) {
        if (x.count_label(cls) < config.outer_folds) {
            throw ConfigError("class " + std::to_string(cls) + " has " +
                              std::to_string(x.count_label(cls)) + " rows, fewer than " +
                              std::to_string(config.outer_folds) + " outer folds");
        }
    }
    return NestedRun(x, specs, config).run();
}

CVResult nested_cv(const FeatureMatrix& x, const ClassifierSpec& spec, const CVConfig& config) {
    return nested_cv(x, std::span<const ClassifierSpec>(&spec, 1), config).front();
}

}  // namespace sigstream
