#include <doctest.h>

#include "sigstream/embeddings.hpp"
#include "sigstream/errors.hpp"
#include "support.hpp"

using namespace sigstream;
using sigstream::testing::max_abs_diff;

namespace {

std::vector<std::vector<double>> points_of(const Path& p) {
    std::vector<std::vector<double>> out;
    for (std::size_t i = 0; i < p.size(); ++i) out.emplace_back(p.point(i).begin(), p.point(i).end());
    return out;
}

StreamRecord with_gaps(std::vector<double> values, std::vector<bool> missing) {
    StreamRecord r;
    r.subject = "t";
    r.values = std::move(values);
    r.missing = std::move(missing);
    return r;
}

}  // namespace

TEST_SUITE("embeddings") {

TEST_CASE("axis path moves along time first") {
    const std::vector<TimeValue> two{{1, 1}, {2, 5}};
    CHECK(points_of(axis_path(two)) == std::vector<std::vector<double>>{{1, 1}, {2, 1}, {2, 5}});

    const std::vector<TimeValue> flat{{0, 4}, {1, 4}};
    const auto p = axis_path(flat);
    CHECK(p.size() == 3);
    CHECK(max_abs_diff(signature(p, 3), signature(linear_path(flat), 3)) <= 1e-15);

    const std::vector<TimeValue> fig{{1, 1}, {2, 5}, {3, 3}, {4, -2}, {5, 7}};
    const auto stairs = axis_path(fig);
    CHECK(stairs.size() == 9);
    const auto s = signature(stairs, 2);
    CHECK(s.at({1}) == 4.0);
    CHECK(s.at({2}) == 6.0);

    const auto l = signature(linear_path(fig), 2);
    CHECK(max_abs_diff(s.level(1), l.level(1)) == 0.0);
    CHECK(std::abs(signed_area(s, 1, 2) - signed_area(l, 1, 2)) > 1e-3);

    const std::vector<TimeValue> backwards{{1, 1}, {1, 2}};
    CHECK_THROWS_AS(axis_path(backwards), InvalidInput);
    CHECK_THROWS_AS(linear_path(backwards), InvalidInput);
}

TEST_CASE("linear path") {
    const std::vector<TimeValue> two{{0, 0}, {1, 1}};
    CHECK(points_of(linear_path(two)) == std::vector<std::vector<double>>{{0, 0}, {1, 1}});
    const std::vector<TimeValue> three{{0, 0}, {0.5, 0.5}, {1, 1}};
    CHECK(max_abs_diff(signature(linear_path(three), 4), signature(linear_path(two), 4)) <= 1e-15);
}

TEST_CASE("lead-lag") {
    const std::vector<double> x{1, 3, 2};
    const auto p = lead_lag(x);
    CHECK(points_of(p) == std::vector<std::vector<double>>{{1, 1}, {3, 1}, {3, 3}, {2, 3}, {2, 2}});
    CHECK(signed_area(signature(p, 2), 1, 2) == doctest::Approx(2.5).epsilon(1e-14));

    const std::vector<double> flat{4, 4, 4};
    const auto q = lead_lag(flat);
    for (const auto& pt : points_of(q)) CHECK(pt == std::vector<double>{4, 4});
    CHECK(signed_area(signature(q, 2), 1, 2) == 0.0);

    const std::vector<double> one{1};
    CHECK_THROWS_AS(lead_lag(one), InvalidInput);
}

TEST_CASE("lead-lag structure") {
    CounterRng rng(3, "ll-structure");
    std::vector<double> x(9);
    for (auto& v : x) v = rng.uniform();
    const auto p = lead_lag(x);
    REQUIRE(p.size() == 2 * x.size() - 1);
    for (std::size_t n = 0; n < x.size(); ++n) {
        CHECK(p(2 * n, 0) == x[n]);
        CHECK(p(2 * n, 1) == x[n]);
    }
    // The lag at each odd point is the lead two steps earlier.
    for (std::size_t k = 3; k < p.size(); k += 2) CHECK(p(k, 1) == p(k - 2, 0));
}

TEST_CASE("missing lift reproduces the feed-forward example") {
    const double star = 0.0;
    const auto r = with_gaps({1, 3, star, 5, 3, star, star, 9, 3, 5},
                             {false, false, true, false, false, true, true, false, false, false});
    const std::vector<std::vector<double>> expected{{0, 1, 0}, {1, 3, 0}, {2, 3, 1}, {3, 5, 0}, {4, 3, 0},
                                                    {5, 3, 1}, {6, 3, 1}, {7, 9, 0}, {8, 3, 0}, {9, 5, 0}};
    CHECK(points_of(missing_lift(r)) == expected);

    CHECK(points_of(missing_lift(with_gaps({5, 0}, {false, true}))) ==
          std::vector<std::vector<double>>{{0, 5, 0}, {1, 5, 1}});
}

TEST_CASE("missing lift of a complete stream is the time-augmented stream") {
    const auto r = with_gaps({2, 7, 1, 8}, {false, false, false, false});
    const auto p = missing_lift(r);
    for (std::size_t i = 0; i < p.size(); ++i) {
        CHECK(p(i, 0) == static_cast<double>(i));
        CHECK(p(i, 1) == r.values[i]);
        CHECK(p(i, 2) == 0.0);
    }
}

TEST_CASE("missing lift rejects invalid records") {
    CHECK_THROWS_AS(missing_lift(with_gaps({0, 1}, {true, false})), InvalidInput);
    CHECK_THROWS_AS(missing_lift(with_gaps({0, 0}, {true, true})), InvalidInput);
    CHECK_THROWS_AS(missing_lift(with_gaps({1, 2}, {false})), InvalidInput);
    auto r = with_gaps({1, 2, 3}, {false, false, false});
    r.times = std::vector<double>{0, 2, 1};
    CHECK_THROWS_AS(missing_lift(r), InvalidInput);
    r.times = std::vector<double>{0, 1.5, 4};
    CHECK(missing_lift(r)(1, 0) == 1.5);
}

TEST_CASE("delay path") {
    const std::vector<double> d{4, 2, 5, 0, 5, 0};
    const auto p = delay_path(d);
    CHECK(p.size() == 11);
    CHECK(p.dimension() == 3);
    const auto s = signature(p, 1);
    CHECK(s.at({1}) == 5.0);
    CHECK(s.at({2}) == -4.0);
    CHECK(s.at({3}) == -4.0);

    const std::vector<double> small{1, 3, 2};
    const auto q = delay_path(small);
    std::vector<double> clock;
    for (std::size_t i = 0; i < q.size(); ++i) clock.push_back(q(i, 0));
    CHECK(clock == std::vector<double>{1, 2, 2, 3, 3});
    const auto ll = lead_lag(small);
    for (std::size_t i = 0; i < q.size(); ++i) {
        CHECK(q(i, 1) == ll(i, 0));
        CHECK(q(i, 2) == ll(i, 1));
    }

    const std::vector<double> flat{3, 3};
    const auto c = signature(delay_path(flat), 2);
    CHECK(c.at({2}) == 0.0);
    CHECK(c.at({3}) == 0.0);

    const std::vector<double> negative{1, -1};
    CHECK_THROWS_AS(delay_path(negative), InvalidInput);
}

TEST_CASE("axis variant of the delay path") {
    const std::vector<double> d{4, 2, 5};
    const auto p = delay_path(d, true);
    CHECK(p.size() == 7);
    CHECK(points_of(p)[1] == std::vector<double>{2, 4, 4});
    CHECK(points_of(p)[2] == std::vector<double>{2, 2, 4});
    const auto a = signature(p, 1);
    const auto b = signature(delay_path(d), 1);
    CHECK(max_abs_diff(a, b) == 0.0);
}

TEST_CASE("embed dispatch") {
    const auto r = with_gaps({4, 0, 5, 0, 5, 0}, {false, true, false, false, false, false});
    EmbeddingConfig cfg;
    CHECK(embed(r, cfg).dimension() == 3);
    CHECK(embed(r, cfg).size() == 11);
    CHECK(embedding_dimension(cfg) == 3);

    cfg.kind = EmbeddingKind::MissingLift;
    CHECK(embed(r, cfg)(1, 2) == 1.0);

    cfg.kind = EmbeddingKind::Axis;
    CHECK(embed(r, cfg).size() == 2 * r.observed_count() - 1);

    cfg.kind = EmbeddingKind::LeadLag;
    CHECK(embed(r, cfg).dimension() == 2);
    cfg.time_augment = true;
    CHECK(embed(r, cfg).dimension() == 3);

    CHECK(parse_embedding_kind("delay-pipeline") == EmbeddingKind::DelayPipeline);
    CHECK(parse_embedding_kind(to_string(EmbeddingKind::MissingLift)) == EmbeddingKind::MissingLift);
    CHECK_THROWS_AS(parse_embedding_kind("spline"), InvalidInput);
}

}
