#include "sigstream/classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace sigstream {

double LinearModel::decision(std::span<const double> x) const {
    double s = intercept;
    for (std::size_t j = 0; j < weights.size(); ++j) s += weights[j] * x[j];
    return s;
}

std::vector<std::size_t> LinearModel::support() const {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < weights.size(); ++j) {
        if (weights[j] != 0.0) out.push_back(j);
    }
    return out;
}

namespace {

void require_two_classes(const FeatureMatrix& x, const char* who) {
    x.check();
    const std::size_t ones = x.count_label(1);
    if (x.rows == 0 || ones == 0 || ones == x.rows) {
        throw InvalidInput(std::string(who) + " needs both classes in the training set");
    }
}

// log(1 + exp(-m)) without overflow.
double logistic_loss(double margin) {
    return margin > 0 ? std::log1p(std::exp(-margin)) : -margin + std::log1p(std::exp(margin));
}

double sigmoid(double eta) {
    return eta >= 0 ? 1.0 / (1.0 + std::exp(-eta)) : std::exp(eta) / (1.0 + std::exp(eta));
}

double soft_threshold(double z, double gamma) {
    if (z > gamma) return z - gamma;
    if (z < -gamma) return z + gamma;
    return 0.0;
}

}  // namespace

double elastic_net_objective(const FeatureMatrix& x, const LinearModel& model, double lambda,
                             double rho) {
    double loss = 0.0;
    for (std::size_t i = 0; i < x.rows; ++i) {
        const double sign = x.labels[i] == 1 ? 1.0 : -1.0;
        loss += logistic_loss(sign * model.decision(x.row(i)));
    }
    loss /= static_cast<double>(x.rows);
    double l1 = 0.0;
    double l2 = 0.0;
    for (double w : model.weights) {
        l1 += std::abs(w);
        l2 += w * w;
    }
    return loss + lambda * (rho * l1 + 0.5 * (1.0 - rho) * l2);
}

double elastic_net_lambda_max(const FeatureMatrix& x, double rho) {
    const double n = static_cast<double>(x.rows);
    const double ybar = static_cast<double>(x.count_label(1)) / n;
    double g = 0.0;
    for (std::size_t j = 0; j < x.cols; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < x.rows; ++i) s += x(i, j) * (x.labels[i] - ybar);
        g = std::max(g, std::abs(s) / n);
    }
    return rho > 0.0 ? g / rho : std::numeric_limits<double>::infinity();
}

LinearModel fit_elastic_net_logistic(const FeatureMatrix& x, double lambda, double rho,
                                     const ElasticNetOptions& options) {
    if (!x.standardized) {
        throw InvalidInput("elastic-net logistic regression needs standardized features");
    }
    if (lambda < 0.0 || rho < 0.0 || rho > 1.0) {
        throw InvalidInput("elastic net needs lambda >= 0 and rho in [0, 1]");
    }
    require_two_classes(x, "logistic regression");

    const std::size_t n = x.rows;
    const std::size_t p = x.cols;
    const double inv_n = 1.0 / static_cast<double>(n);
    const double ybar = static_cast<double>(x.count_label(1)) * inv_n;

    LinearModel model;
    model.weights.assign(p, 0.0);
    model.intercept = std::log(ybar / (1.0 - ybar));
    double objective = elastic_net_objective(x, model, lambda, rho);

    std::vector<double> eta(n), w(n), r(n);
    for (int iter = 0; iter < options.max_iterations; ++iter) {
        model.iterations = iter + 1;
        for (std::size_t i = 0; i < n; ++i) {
            eta[i] = model.decision(x.row(i));
            const double prob = sigmoid(eta[i]);
            w[i] = std::max(prob * (1.0 - prob), 1e-5);
            // residual of the working response z = eta + (y - p)/w
            r[i] = (x.labels[i] - prob) / w[i];
        }

        LinearModel trial = model;
        const double w_sum = std::accumulate(w.begin(), w.end(), 0.0);
        for (int sweep = 0; sweep < options.max_sweeps; ++sweep) {
            double max_change = 0.0;
            double shift = 0.0;
            for (std::size_t i = 0; i < n; ++i) shift += w[i] * r[i];
            shift /= w_sum;
            trial.intercept += shift;
            for (std::size_t i = 0; i < n; ++i) r[i] -= shift;
            max_change = std::abs(shift);

            for (std::size_t j = 0; j < p; ++j) {
                double grad = 0.0;
                double curv = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    const double xij = x(i, j);
                    grad += w[i] * xij * r[i];
                    curv += w[i] * xij * xij;
                }
                grad *= inv_n;
                curv *= inv_n;
                const double old = trial.weights[j];
                const double updated = soft_threshold(grad + curv * old, lambda * rho) /
                                       (curv + lambda * (1.0 - rho));
                if (updated != old) {
                    const double delta = updated - old;
                    for (std::size_t i = 0; i < n; ++i) r[i] -= delta * x(i, j);
                    trial.weights[j] = updated;
                    max_change = std::max(max_change, std::abs(delta));
                }
            }
            if (max_change < 1e-12) break;
        }

        double trial_objective = elastic_net_objective(x, trial, lambda, rho);
        for (int halving = 0; halving < 40 && trial_objective > objective; ++halving) {
            for (std::size_t j = 0; j < p; ++j) {
                trial.weights[j] = 0.5 * (trial.weights[j] + model.weights[j]);
            }
            trial.intercept = 0.5 * (trial.intercept + model.intercept);
            trial_objective = elastic_net_objective(x, trial, lambda, rho);
        }
        if (trial_objective > objective) break;
        const double change = objective - trial_objective;
        trial.iterations = model.iterations;
        model = std::move(trial);
        objective = trial_objective;
        if (change < options.tolerance) break;
    }
    return model;
}

double svm_objective(const FeatureMatrix& x, const LinearModel& model, double c) {
    double hinge = 0.0;
    for (std::size_t i = 0; i < x.rows; ++i) {
        const double y = x.labels[i] == 1 ? 1.0 : -1.0;
        hinge += std::max(0.0, 1.0 - y * model.decision(x.row(i)));
    }
    double norm = 0.0;
    for (double w : model.weights) norm += w * w;
    return 0.5 * norm + c * hinge;
}

LinearModel fit_linear_svm(const FeatureMatrix& x, double c, const SvmOptions& options) {
    if (!(c > 0.0)) throw InvalidInput("SVM needs C > 0");
    require_two_classes(x, "SVM");
    const std::size_t n = x.rows;
    const std::size_t p = x.cols;

    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = x.labels[i] == 1 ? 1.0 : -1.0;
    // Q_ij = y_i y_j <x_i, x_j>
    std::vector<double> q(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double dot = 0.0;
            for (std::size_t k = 0; k < p; ++k) dot += x(i, k) * x(j, k);
            q[i * n + j] = q[j * n + i] = y[i] * y[j] * dot;
        }
    }

    std::vector<double> alpha(n, 0.0);
    std::vector<double> grad(n, -1.0);
    constexpr double tau = 1e-12;
    const auto up = [&](std::size_t t) { return y[t] > 0 ? alpha[t] < c : alpha[t] > 0.0; };
    const auto low = [&](std::size_t t) { return y[t] > 0 ? alpha[t] > 0.0 : alpha[t] < c; };

    int iter = 0;
    for (; iter < options.max_iterations; ++iter) {
        std::size_t i = n, j = n;
        double gmax = -INFINITY, gmin = INFINITY;
        for (std::size_t t = 0; t < n; ++t) {
            const double v = -y[t] * grad[t];
            if (up(t) && v > gmax) {
                gmax = v;
                i = t;
            }
            if (low(t) && v < gmin) {
                gmin = v;
                j = t;
            }
        }
        if (i == n || j == n || gmax - gmin < options.tolerance) break;

        const double ai = alpha[i], aj = alpha[j];
        if (y[i] != y[j]) {
            double quad = q[i * n + i] + q[j * n + j] + 2.0 * q[i * n + j];
            if (quad <= 0) quad = tau;
            const double delta = (-grad[i] - grad[j]) / quad;
            const double diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if (diff > 0) {
                if (alpha[j] < 0) {
                    alpha[j] = 0;
                    alpha[i] = diff;
                }
            } else if (alpha[i] < 0) {
                alpha[i] = 0;
                alpha[j] = -diff;
            }
            if (diff > 0) {
                if (alpha[i] > c) {
                    alpha[i] = c;
                    alpha[j] = c - diff;
                }
            } else if (alpha[j] > c) {
                alpha[j] = c;
                alpha[i] = c + diff;
            }
        } else {
            double quad = q[i * n + i] + q[j * n + j] - 2.0 * q[i * n + j];
            if (quad <= 0) quad = tau;
            const double delta = (grad[i] - grad[j]) / quad;
            const double sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if (sum > c) {
                if (alpha[i] > c) {
                    alpha[i] = c;
                    alpha[j] = sum - c;
                }
                if (alpha[j] > c) {
                    alpha[j] = c;
                    alpha[i] = sum - c;
                }
            } else {
                if (alpha[j] < 0) {
                    alpha[j] = 0;
                    alpha[i] = sum;
                }
                if (alpha[i] < 0) {
                    alpha[i] = 0;
                    alpha[j] = sum;
                }
            }
        }
        const double di = alpha[i] - ai, dj = alpha[j] - aj;
        for (std::size_t t = 0; t < n; ++t) grad[t] += q[t * n + i] * di + q[t * n + j] * dj;
    }

    LinearModel model;
    model.weights.assign(p, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        if (alpha[i] == 0.0) continue;
        for (std::size_t k = 0; k < p; ++k) model.weights[k] += alpha[i] * y[i] * x(i, k);
    }
    // Intercept from the free multipliers, else the middle of the feasible range.
    double ub = INFINITY, lb = -INFINITY, free_sum = 0.0;
    std::size_t free = 0;
    for (std::size_t t = 0; t < n; ++t) {
        const double yg = y[t] * grad[t];
        if (alpha[t] >= c) {
            if (y[t] < 0) ub = std::min(ub, yg);
            else lb = std::max(lb, yg);
        } else if (alpha[t] <= 0.0) {
            if (y[t] > 0) ub = std::min(ub, yg);
            else lb = std::max(lb, yg);
        } else {
            ++free;
            free_sum += yg;
        }
    }
    model.intercept = -(free > 0 ? free_sum / static_cast<double>(free) : 0.5 * (ub + lb));
    model.iterations = iter;
    return model;
}

KnnResult knn_predict(const FeatureMatrix& train, const FeatureMatrix& query, std::size_t k) {
    if (train.rows == 0) throw InvalidInput("kNN needs a non-empty training set");
    if (k == 0 || k > train.rows) {
        throw InvalidInput("kNN needs 1 <= k <= training size (" + std::to_string(train.rows) + ")");
    }
    if (query.cols != train.cols) throw InvalidInput("kNN query width differs from training width");

    KnnResult out;
    out.labels.reserve(query.rows);
    out.scores.reserve(query.rows);
    std::vector<std::pair<double, std::size_t>> dist(train.rows);
    for (std::size_t q = 0; q < query.rows; ++q) {
        auto qrow = query.row(q);
        for (std::size_t i = 0; i < train.rows; ++i) {
            auto trow = train.row(i);
            double s = 0.0;
            for (std::size_t j = 0; j < train.cols; ++j) {
                const double d = qrow[j] - trow[j];
                s += d * d;
            }
            dist[i] = {s, i};
        }
        std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
        std::size_t positives = 0;
        for (std::size_t i = 0; i < k; ++i) positives += train.labels[dist[i].second] == 1;
        const std::size_t negatives = k - positives;
        int label;
        if (positives != negatives) {
            label = positives > negatives ? 1 : 0;
        } else {
            label = train.labels[dist[0].second];
        }
        out.labels.push_back(label);
        out.scores.push_back(static_cast<double>(positives) / static_cast<double>(k));
    }
    return out;
}

}  // namespace sigstream
