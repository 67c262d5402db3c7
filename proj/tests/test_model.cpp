// QoS algebra: parameters, composition, dominance, utilities, constraints.

#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "qoscompose/model.hpp"
#include "qoscompose/rng.hpp"

using namespace qosc;

namespace {

ParamSet standard_params() {
    return ParamSet({make_response_time(), make_throughput(),
                     make_reliability()});
}

}  // namespace

TEST_SUITE("model") {

TEST_CASE("enum round trips") {
    for (Direction d : {Direction::Positive, Direction::Negative})
        CHECK(direction_from_string(to_string(d)) == d);
    for (Aggregator a : {Aggregator::Sum, Aggregator::Product, Aggregator::Min,
                         Aggregator::Max})
        CHECK(aggregator_from_string(to_string(a)) == a);
    for (Cmp c : {Cmp::Lt, Cmp::Le, Cmp::Gt, Cmp::Ge})
        CHECK(cmp_from_string(to_string(c)) == c);

    CHECK(cmp_from_string("<") == Cmp::Lt);
    CHECK(cmp_from_string("<=") == Cmp::Le);
    CHECK(cmp_from_string(">") == Cmp::Gt);
    CHECK(cmp_from_string(">=") == Cmp::Ge);

    CHECK_THROWS_AS(direction_from_string("sideways"), ValidationError);
    CHECK_THROWS_AS(aggregator_from_string("median"), ValidationError);
    CHECK_THROWS_AS(cmp_from_string("=="), ValidationError);
}

TEST_CASE("standard parameter presets") {
    const QosParam rt = make_response_time();
    CHECK(rt.id == "response_time");
    CHECK(rt.direction == Direction::Negative);
    CHECK(rt.seq_agg == Aggregator::Sum);
    CHECK(rt.par_agg == Aggregator::Max);

    const QosParam tp = make_throughput();
    CHECK(tp.direction == Direction::Positive);
    CHECK(tp.seq_agg == Aggregator::Min);
    CHECK(tp.par_agg == Aggregator::Min);

    for (const QosParam& p : {make_reliability(), make_availability()}) {
        CHECK(p.direction == Direction::Positive);
        CHECK(p.seq_agg == Aggregator::Product);
        CHECK(p.par_agg == Aggregator::Product);
    }
}

TEST_CASE("param set lookup") {
    const ParamSet ps = standard_params();
    CHECK(ps.size() == 3);
    CHECK(ps.index_of("throughput") == 1);
    CHECK(ps.has("reliability"));
    CHECK_FALSE(ps.has("latency"));
    CHECK_THROWS_AS(ps.index_of("latency"), ValidationError);

    std::vector<QosParam> dup = {make_throughput(), make_throughput()};
    CHECK_THROWS_AS((void)ParamSet{dup}, ValidationError);
}

TEST_CASE("aggregator identities and folds") {
    CHECK(aggregator_identity(Aggregator::Sum) == 0.0);
    CHECK(aggregator_identity(Aggregator::Product) == 1.0);
    CHECK(aggregator_identity(Aggregator::Min) ==
          std::numeric_limits<double>::infinity());
    // The Max identity is 0 rather than -infinity so pass-through nodes can
    // carry it; QoS values are validated non-negative.
    CHECK(aggregator_identity(Aggregator::Max) == 0.0);

    for (Aggregator a : {Aggregator::Sum, Aggregator::Product, Aggregator::Min,
                         Aggregator::Max}) {
        CHECK(aggregate(a, aggregator_identity(a), 3.5) == 3.5);
        CHECK(aggregate(a, 3.5, aggregator_identity(a)) == 3.5);
    }
    CHECK(aggregate(Aggregator::Sum, 2, 3) == 5);
    CHECK(aggregate(Aggregator::Product, 2, 3) == 6);
    CHECK(aggregate(Aggregator::Min, 2, 3) == 2);
    CHECK(aggregate(Aggregator::Max, 2, 3) == 3);
}

TEST_CASE("compose matches a naive fold for every aggregator pair") {
    // One parameter per aggregator, exercised both sequentially and in
    // parallel against a direct reduction of the same value list.
    const std::vector<Aggregator> aggs = {Aggregator::Sum, Aggregator::Product,
                                          Aggregator::Min, Aggregator::Max};
    std::vector<QosParam> params;
    for (std::size_t i = 0; i < aggs.size(); ++i) {
        QosParam p;
        p.id = "p" + std::to_string(i);
        p.seq_agg = aggs[i];
        p.par_agg = aggs[(i + 1) % aggs.size()];
        params.push_back(p);
    }
    const ParamSet ps{params};

    Rng rng(42);
    for (int round = 0; round < 50; ++round) {
        std::vector<QosTuple> ts;
        const std::size_t n = 2 + rng.uniform(4);
        for (std::size_t i = 0; i < n; ++i) {
            QosTuple t;
            for (std::size_t p = 0; p < ps.size(); ++p)
                t.push_back(0.25 + rng.uniform_real(0.25, 2.0));
            ts.push_back(t);
        }

        QosTuple seq = ts[0];
        QosTuple par = ts[0];
        for (std::size_t i = 1; i < ts.size(); ++i) {
            seq = compose_seq(ps, seq, ts[i]);
            par = compose_par(ps, par, ts[i]);
        }
        for (std::size_t p = 0; p < ps.size(); ++p) {
            double want_seq = ts[0][p];
            double want_par = ts[0][p];
            for (std::size_t i = 1; i < ts.size(); ++i) {
                want_seq = aggregate(ps.params[p].seq_agg, want_seq, ts[i][p]);
                want_par = aggregate(ps.params[p].par_agg, want_par, ts[i][p]);
            }
            CHECK(seq[p] == doctest::Approx(want_seq).epsilon(1e-12));
            CHECK(par[p] == doctest::Approx(want_par).epsilon(1e-12));
        }
    }
}

TEST_CASE("composition arity is checked") {
    const ParamSet ps = standard_params();
    CHECK_THROWS_AS(compose_seq(ps, {1.0, 2.0}, {1.0, 2.0, 3.0}),
                    ValidationError);
    CHECK_THROWS_AS(compose_par(ps, {1.0, 2.0, 3.0}, {1.0}), ValidationError);
}

TEST_CASE("tuple equality tolerance") {
    CHECK(tuple_equal({1.0, 2.0}, {1.0, 2.0 + 5e-10}));
    CHECK_FALSE(tuple_equal({1.0, 2.0}, {1.0, 2.0 + 5e-9}));
    CHECK_FALSE(tuple_equal({1.0, 2.0}, {1.0, 2.0, 3.0}));
    CHECK(tuple_equal({1.0}, {1.5}, 0.6));
}

TEST_CASE("dominance on hand cases") {
    const ParamSet ps = standard_params();
    // response_time negative (smaller better), throughput and reliability
    // positive (larger better).
    const QosTuple good = {100.0, 10.0, 0.99};
    const QosTuple bad = {200.0, 5.0, 0.80};
    const QosTuple mixed = {50.0, 5.0, 0.80};

    CHECK(dominates(ps, good, bad));
    CHECK_FALSE(dominates(ps, bad, good));
    CHECK_FALSE(dominates(ps, good, good));
    CHECK(compare(ps, good, good) == Dominance::Equal);
    CHECK(compare(ps, good, bad) == Dominance::Dominates);
    CHECK(compare(ps, bad, good) == Dominance::DominatedBy);
    CHECK(compare(ps, good, mixed) == Dominance::Incomparable);

    // Equal on some coordinates, strictly better on one, still dominates.
    CHECK(dominates(ps, {100.0, 10.0, 0.99}, {100.0, 10.0, 0.98}));
}

TEST_CASE("non_dominated agrees with the pairwise filter") {
    const ParamSet ps = standard_params();
    Rng rng(7);
    for (int round = 0; round < 200; ++round) {
        std::vector<QosTuple> pool;
        const std::size_t n = rng.uniform(12);
        for (std::size_t i = 0; i < n; ++i) {
            // A coarse value grid forces ties and exact duplicates.
            pool.push_back({100.0 * (1 + rng.uniform(4)),
                            static_cast<double>(1 + rng.uniform(3)),
                            0.5 + 0.1 * rng.uniform(5)});
        }
        const std::vector<QosTuple> got = non_dominated(ps, pool);
        const std::vector<QosTuple> want = testutil::naive_front(ps, pool);
        REQUIRE(got.size() == want.size());
        for (std::size_t i = 0; i < got.size(); ++i)
            CHECK(got[i] == want[i]);
    }
}

TEST_CASE("non_dominated_indices collapses duplicates and sorts") {
    const ParamSet ps = standard_params();
    const std::vector<QosTuple> pool = {
        {200.0, 9.0, 0.9},   // kept: slower but higher throughput than [1]
        {100.0, 5.0, 0.9},   // kept, lexicographically first
        {200.0, 9.0, 0.9},   // exact duplicate of [0], collapsed
        {300.0, 4.0, 0.8},   // dominated by [1]
    };
    const std::vector<std::size_t> idx = non_dominated_indices(ps, pool);
    REQUIRE(idx.size() == 2);
    CHECK(pool[idx[0]] == QosTuple{100.0, 5.0, 0.9});
    CHECK(pool[idx[1]] == QosTuple{200.0, 9.0, 0.9});
    CHECK(idx == std::vector<std::size_t>{1, 0});
}

TEST_CASE("tuple_set_equal ignores order and applies tolerance") {
    std::vector<QosTuple> a = {{1.0, 2.0}, {3.0, 4.0}};
    std::vector<QosTuple> b = {{3.0, 4.0 + 5e-10}, {1.0, 2.0}};
    CHECK(tuple_set_equal(a, b));
    b.push_back({5.0, 6.0});
    CHECK_FALSE(tuple_set_equal(a, b));
    CHECK(tuple_set_equal({}, {}));
}

TEST_CASE("utilities normalize over the shared pool") {
    const ParamSet ps = standard_params();
    const std::vector<QosTuple> pool = {
        {100.0, 10.0, 0.9},
        {300.0, 20.0, 0.7},
    };
    const std::vector<double> u = utilities(ps, pool);
    REQUIRE(u.size() == 2);
    // First tuple: best response time (1), worst throughput (0), best
    // reliability (1). Second tuple is the mirror image.
    CHECK(u[0] == doctest::Approx(2.0));
    CHECK(u[1] == doctest::Approx(1.0));
}

TEST_CASE("utilities give degenerate parameters full credit") {
    const ParamSet ps{{make_response_time()}};
    const std::vector<double> u = utilities(ps, {{500.0}, {500.0}});
    REQUIRE(u.size() == 2);
    CHECK(u[0] == 1.0);
    CHECK(u[1] == 1.0);
}

TEST_CASE("constraint evaluation") {
    CHECK(satisfies(1.0, Cmp::Lt, 2.0));
    CHECK_FALSE(satisfies(2.0, Cmp::Lt, 2.0));
    CHECK(satisfies(2.0, Cmp::Le, 2.0));
    CHECK(satisfies(3.0, Cmp::Gt, 2.0));
    CHECK(satisfies(2.0, Cmp::Ge, 2.0));

    const ParamSet ps = standard_params();
    const Constraint c{"reliability", Cmp::Gt, 0.7};
    CHECK(satisfies(ps, c, {100.0, 5.0, 0.8}));
    CHECK_FALSE(satisfies(ps, c, {100.0, 5.0, 0.7}));
    CHECK(satisfies_all(ps, {c, {"response_time", Cmp::Lt, 200.0}},
                        {100.0, 5.0, 0.8}));
    CHECK_FALSE(satisfies_all(ps, {c, {"response_time", Cmp::Lt, 50.0}},
                              {100.0, 5.0, 0.8}));
}

TEST_CASE("constraint alignment with parameter direction") {
    const ParamSet ps = standard_params();
    CHECK(constraint_aligned(ps, {"response_time", Cmp::Lt, 100.0}));
    CHECK(constraint_aligned(ps, {"response_time", Cmp::Le, 100.0}));
    CHECK_FALSE(constraint_aligned(ps, {"response_time", Cmp::Gt, 100.0}));
    CHECK(constraint_aligned(ps, {"throughput", Cmp::Ge, 2.0}));
    CHECK_FALSE(constraint_aligned(ps, {"throughput", Cmp::Lt, 2.0}));
}

TEST_CASE("repository validation") {
    Repository repo;
    repo.params = standard_params();
    Service a;
    a.id = "a";
    a.inputs = {"x", "x"};
    a.outputs = {"y"};
    a.tuples = {{100.0, 5.0, 0.9}};
    repo.services = {a};

    SUBCASE("duplicate io names are normalized away") {
        normalize_and_validate(repo);
        CHECK(repo.services[0].inputs == std::vector<std::string>{"x"});
    }
    SUBCASE("duplicate service ids are rejected") {
        repo.services.push_back(a);
        CHECK_THROWS_AS(normalize_and_validate(repo), ValidationError);
    }
    SUBCASE("tuple arity must match the parameter table") {
        repo.services[0].tuples = {{100.0, 5.0}};
        CHECK_THROWS_AS(normalize_and_validate(repo), ValidationError);
    }
    SUBCASE("services need at least one offer") {
        repo.services[0].tuples.clear();
        CHECK_THROWS_AS(normalize_and_validate(repo), ValidationError);
    }
}

TEST_CASE("query validation") {
    const ParamSet ps = standard_params();
    Query q;
    q.inputs = {"b", "a", "a"};
    q.outputs = {"z"};
    q.locals = {{"reliability", Cmp::Gt, 0.5}};

    SUBCASE("io lists are sorted and deduplicated") {
        normalize_and_validate(q, ps);
        CHECK(q.inputs == std::vector<std::string>{"a", "b"});
    }
    SUBCASE("unknown constraint parameters are rejected") {
        q.globals = {{"latency", Cmp::Lt, 10.0}};
        CHECK_THROWS_AS(normalize_and_validate(q, ps), ValidationError);
    }
    SUBCASE("empty outputs are rejected") {
        q.outputs.clear();
        CHECK_THROWS_AS(normalize_and_validate(q, ps), ValidationError);
    }
}

TEST_CASE("early global classes") {
    Repository repo;
    repo.params = standard_params();
    Service s;
    s.id = "s";
    s.inputs = {"x"};
    s.outputs = {"y"};
    s.tuples = {{100.0, 5.0, 0.9}};
    repo.services = {s};
    normalize_and_validate(repo);

    Query q;
    q.inputs = {"x"};
    q.outputs = {"y"};

    SUBCASE("upper bounds on sum/max parameters qualify") {
        q.globals = {{"response_time", Cmp::Lt, 1000.0}};
        normalize_and_validate(q, repo.params);
        CHECK(early_global_constraints(repo, q).size() == 1);
    }
    SUBCASE("lower bounds on min/min parameters qualify") {
        q.globals = {{"throughput", Cmp::Ge, 2.0}};
        normalize_and_validate(q, repo.params);
        CHECK(early_global_constraints(repo, q).size() == 1);
    }
    SUBCASE("lower bounds on product parameters need values at most one") {
        q.globals = {{"reliability", Cmp::Gt, 0.5}};
        normalize_and_validate(q, repo.params);
        CHECK(early_global_constraints(repo, q).size() == 1);

        // A reliability value above 1 breaks the shrinking argument.
        repo.services[0].tuples = {{100.0, 5.0, 1.5}};
        CHECK(early_global_constraints(repo, q).empty());
    }
    SUBCASE("misaligned bounds never qualify") {
        q.globals = {{"response_time", Cmp::Gt, 10.0},
                     {"throughput", Cmp::Lt, 100.0}};
        normalize_and_validate(q, repo.params);
        CHECK(early_global_constraints(repo, q).empty());
    }
}

TEST_CASE("solution qos folds stages") {
    const ParamSet ps = standard_params();

    // Sequential chain of two stages with a parallel pair in the third.
    // Composite response time sums stages and takes the in-stage maximum,
    // throughput takes the overall minimum, reliability multiplies.
    SolutionGraph g;
    g.nodes = {
        {"W2", 0, {600.0, 13.0, 0.69}, 1},
        {"W11", 0, {1300.0, 3.0, 0.65}, 2},
        {"W18", 0, {400.0, 2.0, 0.73}, 3},
        {"W20", 0, {1500.0, 12.0, 0.94}, 3},
    };
    const QosTuple q = solution_qos(ps, g);
    REQUIRE(q.size() == 3);
    CHECK(q[0] == doctest::Approx(3400.0));
    CHECK(q[1] == doctest::Approx(2.0));
    CHECK(q[2] == doctest::Approx(0.30776).epsilon(1e-6));
}

TEST_CASE("solution qos on a second composition") {
    const ParamSet ps = standard_params();
    SolutionGraph g;
    g.nodes = {
        {"W1", 0, {500.0, 7.0, 0.93}, 1},
        {"W13", 0, {400.0, 9.0, 0.93}, 2},
        {"W17", 0, {150.0, 5.0, 0.86}, 3},
        {"W21", 0, {900.0, 14.0, 0.97}, 3},
    };
    const QosTuple q = solution_qos(ps, g);
    CHECK(q[0] == doctest::Approx(1800.0));
    CHECK(q[1] == doctest::Approx(5.0));
    CHECK(q[2] == doctest::Approx(0.7215).epsilon(1e-6));
}

TEST_CASE("solution qos rejects an empty graph") {
    CHECK_THROWS_AS(solution_qos(standard_params(), SolutionGraph{}),
                    ValidationError);
}

TEST_CASE("stage gaps contribute nothing") {
    const ParamSet ps{{make_response_time()}};
    SolutionGraph g;
    g.nodes = {{"a", 0, {100.0}, 1}, {"b", 0, {200.0}, 5}};
    CHECK(solution_qos(ps, g)[0] == doctest::Approx(300.0));
}

}  // TEST_SUITE
