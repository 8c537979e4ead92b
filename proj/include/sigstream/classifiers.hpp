#pragma once

#include <span>
#include <vector>

#include "sigstream/feature_matrix.hpp"

namespace sigstream {

/// Affine decision function w . x + b; class 1 when positive.
struct LinearModel {
    std::vector<double> weights;
    double intercept = 0.0;
    int iterations = 0;

    double decision(std::span<const double> x) const;
    int predict(std::span<const double> x) const { return decision(x) > 0.0 ? 1 : 0; }
    /// Columns with a nonzero weight.
    std::vector<std::size_t> support() const;
};

struct ElasticNetOptions {
    double tolerance = 1e-8;  // stop when the objective moves less than this
    int max_iterations = 500;
    int max_sweeps = 2000;
};

/// Mean logistic loss + lambda (rho |w|_1 + (1 - rho)/2 |w|^2); the intercept is
/// not penalized.
double elastic_net_objective(const FeatureMatrix& x, const LinearModel& model, double lambda,
                             double rho);

/// Proximal-Newton coordinate descent: each outer step builds the weighted
/// least-squares approximation of the logistic loss and solves it by cyclic
/// soft-thresholded coordinate updates, halving the step if the true objective
/// goes up. Refuses matrices that are not standardized or hold a single class.
LinearModel fit_elastic_net_logistic(const FeatureMatrix& x, double lambda, double rho,
                                     const ElasticNetOptions& options = {});

/// Smallest lambda at which every weight is zero for the given rho.
double elastic_net_lambda_max(const FeatureMatrix& x, double rho);

struct SvmOptions {
    double tolerance = 1e-10;  // maximal KKT violation at exit
    int max_iterations = 1000000;
};

/// 1/2 |w|^2 + C sum hinge(y_i (w . x_i + b)) with y in {-1, +1}.
double svm_objective(const FeatureMatrix& x, const LinearModel& model, double c);

/// Solves the dual by SMO with maximal-violating-pair selection, starting
/// from alpha = 0 (w = 0). Pair selection is deterministic; no randomness.
LinearModel fit_linear_svm(const FeatureMatrix& x, double c, const SvmOptions& options = {});

struct KnnResult {
    std::vector<int> labels;
    std::vector<double> scores;  // fraction of positive neighbours
};

/// Euclidean k-nearest-neighbour vote. Distance ties go to the lower training
/// row; vote ties go to the class of the single nearest neighbour.
KnnResult knn_predict(const FeatureMatrix& train, const FeatureMatrix& query, std::size_t k);

}  // namespace sigstream
