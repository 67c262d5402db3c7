// Shared fixtures and reference implementations for the test suite.

#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "qoscompose/dataset.hpp"
#include "qoscompose/generator.hpp"
#include "qoscompose/model.hpp"

namespace testutil {

inline std::string fixture_path(const std::string& name) {
    return std::string(QOSCOMPOSE_FIXTURES) + "/" + name;
}

inline const qosc::Repository& example1_repo() {
    static const qosc::Repository repo =
        qosc::load_repository(fixture_path("example1_repo.json"));
    return repo;
}

inline const qosc::Query& example1_query() {
    static const qosc::Query query = qosc::load_query(
        fixture_path("example1_query.json"), example1_repo().params);
    return query;
}

// Instance shapes small enough for the brute-force oracle: at most 12
// services, 3 parameters, 2 offers per service. Seeds vary every knob that
// is allowed to vary so the suite covers degenerate shapes too.
inline qosc::SyntheticSpec tiny_spec(std::uint64_t seed) {
    qosc::SyntheticSpec spec;
    spec.seed = seed;
    spec.services = 4 + seed % 9;       // 4..12
    spec.tiers = 2 + seed % 3;          // 2..4
    spec.names_per_tier = 2 + seed % 3;
    spec.max_inputs = 1 + seed % 3;
    spec.max_outputs = 1 + seed % 2;
    spec.max_offers = 1 + seed % 2;
    spec.param_count = 1 + seed % 3;    // 1..3
    spec.local_prob = (seed % 5 == 0) ? 0.5 : 0.0;
    spec.global_prob = (seed % 3 == 0) ? 0.7 : 0.0;
    return spec;
}

// O(n^2) pairwise filter: keep tuples no other tuple dominates, collapse
// exact duplicates, order lexicographically. The production routine must
// agree with this on any input.
inline std::vector<qosc::QosTuple> naive_front(const qosc::ParamSet& ps,
                                               std::vector<qosc::QosTuple> ts) {
    std::vector<qosc::QosTuple> kept;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        bool out = false;
        for (std::size_t j = 0; j < ts.size() && !out; ++j)
            if (j != i && qosc::dominates(ps, ts[j], ts[i])) out = true;
        for (const qosc::QosTuple& k : kept)
            if (k == ts[i]) out = true;
        if (!out) kept.push_back(ts[i]);
    }
    std::sort(kept.begin(), kept.end(), qosc::tuple_less);
    return kept;
}

}  // namespace testutil
