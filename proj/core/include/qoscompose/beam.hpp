// beam.hpp - width-bounded variant of the exact sweep.
//
// Identical expansion to solve_optimal, but after each level at most
// `width` (tuple, node) pairs survive, picked by normalized-utility rank.
// On the level next to End the non-dominated pairs are taken first and the
// remainder is topped up by utility; on inner levels the pool for rank j is
// restricted to predecessors of the nodes owning the previous level's top-j
// ranked tuples. With a width at least the widest level of the exact sweep
// the result matches solve_optimal.

#pragma once

#include "qoscompose/optimal.hpp"

namespace qosc {

struct BeamOptions {
    std::size_t width = 100;  // retained (tuple, node) pairs per level
};

FrontSet solve_beam(const DepGraph& g, const BeamOptions& opt,
                    const SolveLimits& limits = {}, SolveStats* stats = nullptr);

}  // namespace qosc
