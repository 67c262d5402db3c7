// generator.cpp - tiered synthetic instance generation.

#include "qoscompose/generator.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "qoscompose/rng.hpp"

namespace qosc {

namespace {

// k distinct elements of `pool`, drawn by partial Fisher-Yates shuffle.
std::vector<std::string> sample(const std::vector<std::string>& pool,
                                std::size_t k, Rng& rng) {
    std::vector<std::string> scratch = pool;
    k = std::min(k, scratch.size());
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j =
            i + static_cast<std::size_t>(rng.uniform(scratch.size() - i));
        std::swap(scratch[i], scratch[j]);
    }
    scratch.resize(k);
    return scratch;
}

std::vector<QosParam> preset_params(std::size_t count) {
    const std::vector<QosParam> all = {make_response_time(),
                                       make_throughput(), make_reliability(),
                                       make_availability()};
    if (count < 1 || count > all.size())
        throw ValidationError("param_count must be between 1 and 4");
    return {all.begin(), all.begin() + static_cast<std::ptrdiff_t>(count)};
}

double draw_value(const QosParam& p, Rng& rng) {
    if (p.id == "response_time")
        return 100.0 + static_cast<double>(rng.uniform(1901));  // 100..2000
    if (p.id == "throughput")
        return 1.0 + static_cast<double>(rng.uniform(20));  // 1..20
    return rng.uniform_real(0.65, 0.99);  // reliability, availability
}

// A bound that aligns with the parameter's direction: upper bounds for
// negative parameters, lower bounds for positive ones. `anchor` is an
// observed offer value; composition-level bounds stretch it by the tier
// count so a fair share of instances stays feasible.
Constraint draw_constraint(const QosParam& p, double anchor, bool global,
                           std::size_t tiers) {
    Constraint c;
    c.param_id = p.id;
    if (p.direction == Direction::Negative) {
        c.cmp = Cmp::Lt;
        c.bound = global && p.seq_agg == Aggregator::Sum
                      ? anchor * static_cast<double>(tiers)
                      : anchor;
    } else {
        c.cmp = Cmp::Gt;
        c.bound = global && p.seq_agg == Aggregator::Product
                      ? std::pow(anchor, static_cast<double>(tiers))
                      : anchor;
    }
    return c;
}

}  // namespace

SyntheticInstance gen_instance(const SyntheticSpec& spec) {
    if (spec.tiers < 1) throw ValidationError("tiers must be at least 1");
    if (spec.services < spec.tiers)
        throw ValidationError("need at least one service per tier");
    if (spec.names_per_tier < 1)
        throw ValidationError("names_per_tier must be at least 1");
    if (spec.max_inputs < 1)
        throw ValidationError("max_inputs must be at least 1");

    Rng rng(spec.seed);
    const std::vector<QosParam> params = preset_params(spec.param_count);

    // Data-name pools. Pool 0 belongs to the query; pool t > 0 is produced
    // by tier-t services.
    std::vector<std::vector<std::string>> pool(spec.tiers + 1);
    for (std::size_t t = 0; t <= spec.tiers; ++t)
        for (std::size_t i = 0; i < spec.names_per_tier; ++i)
            pool[t].push_back("d" + std::to_string(t) + "_" +
                              std::to_string(i));

    // Tier sizes: as even as possible, earlier tiers take the remainder.
    std::vector<std::size_t> tier_size(spec.tiers + 1, 0);
    for (std::size_t i = 0; i < spec.services; ++i)
        ++tier_size[1 + i % spec.tiers];

    Repository repo;
    repo.params = ParamSet(params);

    std::size_t serial = 0;
    for (std::size_t t = 1; t <= spec.tiers; ++t) {
        // Names a tier-t service may consume.
        std::vector<std::string> upstream;
        for (std::size_t u = 0; u < t; ++u)
            upstream.insert(upstream.end(), pool[u].begin(), pool[u].end());

        std::vector<Service> tier(tier_size[t]);
        for (std::size_t k = 0; k < tier.size(); ++k) {
            Service& s = tier[k];
            s.id = "s" + std::to_string(serial++);
            const std::size_t nin =
                1 + static_cast<std::size_t>(rng.uniform(
                        std::min(spec.max_inputs, upstream.size())));
            s.inputs = sample(upstream, nin, rng);
            if (spec.max_outputs > 0) {
                const std::size_t nout = static_cast<std::size_t>(
                    rng.uniform(spec.max_outputs + 1));
                s.outputs = sample(pool[t], nout, rng);
            }
        }
        // Every pool name needs a producer; round-robin the forced copies.
        for (std::size_t i = 0; i < pool[t].size(); ++i)
            tier[i % tier.size()].outputs.push_back(pool[t][i]);
        for (Service& s : tier)
            if (s.outputs.empty()) s.outputs = sample(pool[t], 1, rng);

        for (Service& s : tier) {
            const std::size_t offers =
                1 + static_cast<std::size_t>(rng.uniform(spec.max_offers));
            for (std::size_t o = 0; o < offers; ++o) {
                QosTuple tup;
                for (const QosParam& p : params)
                    tup.push_back(draw_value(p, rng));
                s.tuples.push_back(std::move(tup));
            }
            repo.services.push_back(std::move(s));
        }
    }

    Query q;
    q.inputs = pool[0];
    const std::size_t nout =
        1 + static_cast<std::size_t>(
                rng.uniform(std::min<std::size_t>(3, pool[spec.tiers].size())));
    q.outputs = sample(pool[spec.tiers], nout, rng);

    // Constraint anchors come from offer values actually present, so the
    // bounds land inside the populated range.
    const auto anchor_for = [&](std::size_t col) {
        const Service& s = repo.services[static_cast<std::size_t>(
            rng.uniform(repo.services.size()))];
        const QosTuple& t =
            s.tuples[static_cast<std::size_t>(rng.uniform(s.tuples.size()))];
        return t[col];
    };
    if (rng.bernoulli(spec.local_prob)) {
        const std::size_t col =
            static_cast<std::size_t>(rng.uniform(params.size()));
        q.locals.push_back(draw_constraint(params[col], anchor_for(col),
                                           false, spec.tiers));
    }
    if (rng.bernoulli(spec.global_prob)) {
        const std::size_t col =
            static_cast<std::size_t>(rng.uniform(params.size()));
        q.globals.push_back(draw_constraint(params[col], anchor_for(col),
                                            true, spec.tiers));
    }

    normalize_and_validate(repo);
    normalize_and_validate(q, repo.params);
    return {std::move(repo), std::move(q)};
}

}  // namespace qosc
