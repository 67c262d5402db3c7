// Front comparison statistics: CR, CN, AD, speedup.

#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "qoscompose/metrics.hpp"
#include "qoscompose/rng.hpp"

using namespace qosc;

namespace {

ParamSet two_params() {
    return ParamSet({make_response_time(), make_reliability()});
}

std::vector<QosTuple> random_front(Rng& rng, std::size_t n) {
    std::vector<QosTuple> out;
    for (std::size_t i = 0; i < n; ++i)
        out.push_back({rng.uniform_real(100.0, 2000.0),
                       rng.uniform_real(0.5, 0.99)});
    return out;
}

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("commonality ratio") {
    const ParamSet ps = two_params();
    const std::vector<QosTuple> a = {{100.0, 0.9}, {200.0, 0.95}};
    const std::vector<QosTuple> b = {{200.0, 0.95}, {300.0, 0.99}};

    CHECK(commonality_ratio(ps, a, a) == doctest::Approx(1.0));
    CHECK(commonality_ratio(ps, a, b) == doctest::Approx(1.0 / 3.0));
    CHECK(commonality_ratio(ps, a, b) ==
          doctest::Approx(commonality_ratio(ps, b, a)));
    CHECK(commonality_ratio(ps, a, {}) == doctest::Approx(0.0));
    CHECK(commonality_ratio(ps, {}, {}) == doctest::Approx(1.0));

    // Tolerance equality merges nearly identical tuples.
    const std::vector<QosTuple> shifted = {{100.0, 0.9 + 5e-10},
                                           {200.0, 0.95}};
    CHECK(commonality_ratio(ps, a, shifted) == doctest::Approx(1.0));
}

TEST_CASE("commonality against the combined front") {
    const ParamSet ps = two_params();
    // b's second tuple dominates a's second tuple, so the combined front
    // is {(100, .9), (150, .97)}.
    const std::vector<QosTuple> a = {{100.0, 0.90}, {200.0, 0.95}};
    const std::vector<QosTuple> b = {{150.0, 0.97}};

    const auto [cn1, cn2] = commonality_nd_ratio(ps, a, b);
    CHECK(cn1 == doctest::Approx(0.5));
    CHECK(cn2 == doctest::Approx(0.5));

    const auto [self1, self2] = commonality_nd_ratio(ps, a, a);
    CHECK(self1 == doctest::Approx(1.0));
    CHECK(self2 == doctest::Approx(1.0));

    const auto [e1, e2] = commonality_nd_ratio(ps, {}, {});
    CHECK(e1 == doctest::Approx(1.0));
    CHECK(e2 == doctest::Approx(1.0));
}

TEST_CASE("average distance ratio identities") {
    const ParamSet ps = two_params();
    Rng rng(31);
    const std::vector<QosTuple> t = random_front(rng, 6);

    CHECK(average_distance_ratio(ps, t, t) == doctest::Approx(1.0));

    // Reciprocity: AD(a, b) * AD(b, a) == 1.
    for (int round = 0; round < 20; ++round) {
        const std::vector<QosTuple> a = random_front(rng, 1 + rng.uniform(6));
        const std::vector<QosTuple> b = random_front(rng, 1 + rng.uniform(6));
        const double ab = average_distance_ratio(ps, a, b);
        const double ba = average_distance_ratio(ps, b, a);
        if (std::isinf(ab) || std::isinf(ba)) continue;
        CHECK(ab * ba == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("average distance ratio orders better fronts above one") {
    const ParamSet ps = two_params();
    const std::vector<QosTuple> better = {{100.0, 0.99}};
    const std::vector<QosTuple> worse = {{2000.0, 0.50}};
    CHECK(average_distance_ratio(ps, better, worse) ==
          std::numeric_limits<double>::infinity());

    const std::vector<QosTuple> mid = {{1000.0, 0.75}, {500.0, 0.9}};
    CHECK(average_distance_ratio(ps, better, mid) > 1.0);
    CHECK(average_distance_ratio(ps, mid, better) < 1.0);
}

TEST_CASE("average distance ratio rejects empty fronts") {
    const ParamSet ps = two_params();
    const std::vector<QosTuple> t = {{100.0, 0.9}};
    CHECK_THROWS_AS(average_distance_ratio(ps, t, {}), ValidationError);
    CHECK_THROWS_AS(average_distance_ratio(ps, {}, t), ValidationError);
}

TEST_CASE("speedup") {
    CHECK(speedup(2.0, 6.0) == doctest::Approx(3.0));
    CHECK(speedup(6.0, 2.0) == doctest::Approx(1.0 / 3.0));
    CHECK_THROWS_AS(speedup(0.0, 1.0), ValidationError);
    CHECK_THROWS_AS(speedup(-1.0, 1.0), ValidationError);
    CHECK_THROWS_AS(speedup(1.0, -1.0), ValidationError);
}

TEST_CASE("compare aggregates every metric") {
    const ParamSet ps = two_params();
    const std::vector<QosTuple> a = {{100.0, 0.9}, {200.0, 0.95}};
    const std::vector<QosTuple> b = {{200.0, 0.95}, {300.0, 0.99}};

    const ComparisonReport r = compare(ps, a, b, 2.0, 5.0);
    CHECK(r.n1 == 2);
    CHECK(r.n2 == 2);
    CHECK(r.cr == doctest::Approx(commonality_ratio(ps, a, b)));
    const auto [cn1, cn2] = commonality_nd_ratio(ps, a, b);
    CHECK(r.cn1 == doctest::Approx(cn1));
    CHECK(r.cn2 == doctest::Approx(cn2));
    CHECK(r.ad == doctest::Approx(average_distance_ratio(ps, a, b)));
    CHECK(r.speedup == doctest::Approx(2.5));

    // Missing timings leave speedup at zero.
    CHECK(compare(ps, a, b).speedup == 0.0);
    CHECK(compare(ps, a, b, 2.0, 0.0).speedup == 0.0);
}

TEST_CASE("comparing a front to itself is the identity") {
    const ParamSet ps = two_params();
    Rng rng(77);
    for (int round = 0; round < 10; ++round) {
        const std::vector<QosTuple> t = random_front(rng, 1 + rng.uniform(8));
        const ComparisonReport r = compare(ps, t, t);
        CHECK(r.cr == doctest::Approx(1.0));
        CHECK(r.cn1 == doctest::Approx(r.cn2));
        CHECK(r.ad == doctest::Approx(1.0));
    }
}

}  // TEST_SUITE
