#include "sigstream/metrics.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <vector>

#include "sigstream/errors.hpp"

namespace sigstream {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double ratio(std::size_t num, std::size_t den) {
    return den == 0 ? kNaN : static_cast<double>(num) / static_cast<double>(den);
}
}  // namespace

double roc_auc(std::span<const int> truth, std::span<const double> scores) {
    if (truth.size() != scores.size()) throw InvalidInput("AUC: label and score counts differ");
    const std::size_t n = truth.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // Midranks (1-based) over tied groups.
    std::vector<double> rank(n);
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
        const double mid = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t t = i; t <= j; ++t) rank[order[t]] = mid;
        i = j + 1;
    }
    double positive_rank_sum = 0.0;
    std::size_t positives = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (truth[i] == 1) {
            positive_rank_sum += rank[i];
            ++positives;
        }
    }
    const std::size_t negatives = n - positives;
    if (positives == 0 || negatives == 0) return kNaN;
    const double np = static_cast<double>(positives);
    return (positive_rank_sum - np * (np + 1.0) / 2.0) / (np * static_cast<double>(negatives));
}

double cohen_kappa(std::size_t tp, std::size_t tn, std::size_t fp, std::size_t fn) {
    const double n = static_cast<double>(tp + tn + fp + fn);
    if (n == 0) return kNaN;
    const double observed = static_cast<double>(tp + tn) / n;
    const double truth_pos = static_cast<double>(tp + fn) / n;
    const double pred_pos = static_cast<double>(tp + fp) / n;
    const double expected = truth_pos * pred_pos + (1.0 - truth_pos) * (1.0 - pred_pos);
    if (expected == 1.0) return kNaN;
    return (observed - expected) / (1.0 - expected);
}

MetricBundle compute_metrics(std::span<const int> truth, std::span<const int> predicted,
                             std::span<const double> scores) {
    if (truth.size() != predicted.size() || truth.size() != scores.size()) {
        throw InvalidInput("metrics: truth, prediction and score lengths differ");
    }
    MetricBundle m{};
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const bool t = truth[i] == 1;
        const bool p = predicted[i] == 1;
        if (t && p) ++m.tp;
        else if (!t && !p) ++m.tn;
        else if (!t && p) ++m.fp;
        else ++m.fn;
    }
    m.sensitivity = ratio(m.tp, m.tp + m.fn);
    m.specificity = ratio(m.tn, m.tn + m.fp);
    m.accuracy = ratio(m.tp + m.tn, truth.size());
    // 2PR/(P+R) written without the intermediate ratios.
    m.f1 = ratio(2 * m.tp, 2 * m.tp + m.fp + m.fn);
    m.auc = roc_auc(truth, scores);
    m.kappa = cohen_kappa(m.tp, m.tn, m.fp, m.fn);
    return m;
}

}  // namespace sigstream
