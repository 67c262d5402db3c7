// oracle.hpp - brute-force reference enumerator.
//
// Enumerates every minimal valid composition directly over the raw
// repository: one producer choice per required input, closed transitively,
// deduplicated, then probed for redundant members. Offer lists are filtered
// the same way the main pipeline filters them (local constraints plus the
// single-offer-refutable globals) and stages are longest-path layers over
// the activated services, so composed values are directly comparable with
// the solvers. Everything else in the main pipeline is deliberately not
// reused here.
//
// Desk-scale instances only: the limits below abort enumeration cleanly,
// and cyclic instances are refused.

#pragma once

#include "qoscompose/model.hpp"

namespace qosc {

struct OracleLimits {
    std::size_t max_services = 15;
    std::size_t max_params = 3;
    std::size_t max_combos = 1000000;  // structure leaves and offer products
};

// All minimal valid compositions with every surviving offer combination,
// in deterministic order. Unreachable query outputs give an empty list.
std::vector<SolutionGraph> enumerate_solutions(const Repository& repo,
                                               const Query& query,
                                               const OracleLimits& limits = {});

// Composes every enumerated solution, applies the global constraints
// exactly, and keeps the non-dominated set. Empty when nothing is feasible.
FrontSet oracle_front(const Repository& repo, const Query& query,
                      const OracleLimits& limits = {});

}  // namespace qosc
