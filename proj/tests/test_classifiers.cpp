#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "sigstream/classifiers.hpp"
#include "sigstream/errors.hpp"
#include "sigstream/rng.hpp"

using namespace sigstream;

namespace {

FeatureMatrix toy(std::initializer_list<std::pair<std::vector<double>, int>> rows) {
    FeatureMatrix m(0, rows.begin()->first.size());
    for (const auto& [x, y] : rows) m.append_row(x, y);
    return m;
}

FeatureMatrix noisy_linear(std::uint64_t seed, std::size_t n, std::size_t cols, std::size_t informative) {
    CounterRng rng(seed, "noisy-linear");
    std::normal_distribution<double> gauss;
    FeatureMatrix m(0, cols);
    std::vector<double> row(cols);
    for (std::size_t i = 0; i < n; ++i) {
        double z = 0.0;
        for (std::size_t j = 0; j < cols; ++j) {
            row[j] = gauss(rng);
            if (j < informative) z += row[j];
        }
        m.append_row(row, z + 0.5 * gauss(rng) > 0.0 ? 1 : 0);
    }
    return standardize(m);
}

// Coarse-to-fine exhaustive search over (w1, w2, b).
double svm_grid_optimum(const FeatureMatrix& x, double c) {
    LinearModel m;
    m.weights = {0, 0};
    double best = std::numeric_limits<double>::infinity();
    double cw1 = 0, cw2 = 0, cb = 0;
    double half = 4.0;
    double step = 0.05;
    while (step > 1e-6) {
        const int n = static_cast<int>(std::lround(half / step));
        double bw1 = cw1, bw2 = cw2, bb = cb;
        for (int i = -n; i <= n; ++i) {
            for (int j = -n; j <= n; ++j) {
                for (int k = -n; k <= n; ++k) {
                    m.weights = {cw1 + i * step, cw2 + j * step};
                    m.intercept = cb + k * step;
                    const double f = svm_objective(x, m, c);
                    if (f < best) {
                        best = f;
                        bw1 = m.weights[0];
                        bw2 = m.weights[1];
                        bb = m.intercept;
                    }
                }
            }
        }
        cw1 = bw1;
        cw2 = bw2;
        cb = bb;
        half = 3 * step;
        step /= 10;
    }
    return best;
}

}  // namespace

TEST_SUITE("classifiers") {

TEST_CASE("elastic net: heavy penalty leaves only the log-odds intercept") {
    const auto x = noisy_linear(1, 40, 5, 2);
    const double lmax = elastic_net_lambda_max(x, 0.5);
    const auto m = fit_elastic_net_logistic(x, 1.01 * lmax, 0.5);
    for (double w : m.weights) CHECK(w == 0.0);
    const double pos = static_cast<double>(x.count_label(1));
    CHECK(m.intercept == doctest::Approx(std::log(pos / (40.0 - pos))).epsilon(1e-8));
    CHECK(m.support().empty());
    CHECK(!fit_elastic_net_logistic(x, 0.9 * lmax, 0.5).support().empty());
}

TEST_CASE("elastic net: unpenalized fit separates two points") {
    auto x = toy({{{-1.0}, 0}, {{1.0}, 1}});
    x.standardized = true;
    const auto m = fit_elastic_net_logistic(x, 0.0, 0.5);
    CHECK(m.predict(x.row(0)) == 0);
    CHECK(m.predict(x.row(1)) == 1);
}

TEST_CASE("elastic net: support shrinks as lambda grows") {
    const auto x = noisy_linear(2, 60, 12, 3);
    const double lmax = elastic_net_lambda_max(x, 0.8);
    std::size_t previous = x.cols + 1;
    for (int i = 0; i < 10; ++i) {
        const double lambda = lmax * std::pow(10.0, -2.0 + 2.0 * i / 9.0);
        const auto m = fit_elastic_net_logistic(x, lambda, 0.8);
        CHECK(m.support().size() <= previous);
        previous = m.support().size();
    }
    CHECK(previous == 0);
}

TEST_CASE("elastic net: objective does not increase over coordinate descent") {
    const auto x = noisy_linear(3, 50, 6, 2);
    ElasticNetOptions loose;
    loose.max_iterations = 1;
    const auto early = fit_elastic_net_logistic(x, 0.05, 0.5, loose);
    const auto full = fit_elastic_net_logistic(x, 0.05, 0.5);
    CHECK(elastic_net_objective(x, full, 0.05, 0.5) <= elastic_net_objective(x, early, 0.05, 0.5) + 1e-12);
}

TEST_CASE("elastic net refuses unscaled or single-class input") {
    auto x = toy({{{0.0}, 0}, {{2.0}, 1}, {{3.0}, 1}});
    CHECK_THROWS_AS(fit_elastic_net_logistic(x, 0.1, 0.5), InvalidInput);
    auto one = toy({{{-1.0}, 1}, {{1.0}, 1}});
    one.standardized = true;
    CHECK_THROWS_AS(fit_elastic_net_logistic(one, 0.1, 0.5), InvalidInput);
}

TEST_CASE("svm matches a brute-force grid optimum") {
    const auto x = toy({{{1.0, 1.0}, 1}, {{2.0, 0.0}, 1}, {{0.0, 0.0}, 0}, {{1.5, 0.5}, 0}});
    for (double c : {0.5, 1.0, 4.0}) {
        const auto m = fit_linear_svm(x, c);
        const double grid = svm_grid_optimum(x, c);
        CHECK(std::abs(svm_objective(x, m, c) - grid) <= 1e-4);
    }
}

TEST_CASE("svm on separated clusters") {
    const auto x = toy({{{-2.0, -1.0}, 0}, {{-1.5, -2.0}, 0}, {{-2.5, -1.5}, 0}, {{2.0, 1.0}, 1}, {{1.5, 2.5}, 1}});
    const auto m = fit_linear_svm(x, 1.0);
    for (std::size_t i = 0; i < x.rows; ++i) CHECK(m.predict(x.row(i)) == x.labels[i]);
    CHECK(m.decision(std::vector<double>{3.0, 3.0}) > 0.0);
}

TEST_CASE("svm with identical features predicts the majority") {
    const auto x = toy({{{1.0}, 0}, {{1.0}, 0}, {{1.0}, 0}, {{1.0}, 1}});
    const auto m = fit_linear_svm(x, 1.0);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < x.rows; ++i) correct += m.predict(x.row(i)) == x.labels[i];
    CHECK(correct == 3);
    CHECK_THROWS_AS(fit_linear_svm(toy({{{1.0}, 1}, {{2.0}, 1}}), 1.0), InvalidInput);
}

TEST_CASE("knn") {
    const auto xor4 = toy({{{0.0, 0.0}, 0}, {{1.0, 1.0}, 0}, {{0.0, 1.0}, 1}, {{1.0, 0.0}, 1}});
    const auto r = knn_predict(xor4, xor4, 3);
    for (std::size_t i = 0; i < 4; ++i) CHECK(r.labels[i] != xor4.labels[i]);

    const auto one = knn_predict(xor4, xor4, 1);
    CHECK(one.labels == xor4.labels);

    const auto lopsided = toy({{{0.0}, 1}, {{5.0}, 0}, {{6.0}, 0}});
    const auto all = knn_predict(lopsided, lopsided, 3);
    CHECK(all.labels == std::vector<int>{0, 0, 0});
    CHECK(all.scores[0] == doctest::Approx(1.0 / 3.0));

    // Vote tie at k = 2 goes to the class of the nearest neighbour.
    const auto pair = toy({{{0.0}, 1}, {{3.0}, 0}});
    const auto q = toy({{{1.0}, 0}, {{2.0}, 0}});
    CHECK(knn_predict(pair, q, 2).labels == std::vector<int>{1, 0});

    // Distance tie goes to the lower training row.
    const auto tied = toy({{{-1.0}, 1}, {{1.0}, 0}});
    CHECK(knn_predict(tied, toy({{{0.0}, 0}}), 1).labels == std::vector<int>{1});

    CHECK_THROWS_AS(knn_predict(xor4, xor4, 5), InvalidInput);
    CHECK_THROWS_AS(knn_predict(FeatureMatrix(0, 2), xor4, 1), InvalidInput);
}

}
