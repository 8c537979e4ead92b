#pragma once

#include <cstddef>
#include <span>

namespace sigstream {

/// Binary classification summary. Undefined ratios (no positives for
/// sensitivity, a single class for AUC, ...) are NaN rather than 0.
struct MetricBundle {
    double sensitivity;
    double specificity;
    double accuracy;
    double f1;
    double auc;
    double kappa;
    std::size_t tp = 0;
    std::size_t tn = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
};

/// Mann-Whitney estimate of P(score_pos > score_neg), ties counted half.
double roc_auc(std::span<const int> truth, std::span<const double> scores);

double cohen_kappa(std::size_t tp, std::size_t tn, std::size_t fp, std::size_t fn);

MetricBundle compute_metrics(std::span<const int> truth, std::span<const int> predicted,
                             std::span<const double> scores);

}  // namespace sigstream
