// optimal.hpp - exact Pareto-front solver.
//
// Runs a backward breadth-first sweep over the layered composition graph
// whose nodes are sets of dependency-graph nodes executed in parallel.
// Predecessor combinations pick one provider per required input (supersets
// of another combination are discarded); each composition-graph node keeps
// the non-dominated set of its members' parallel compositions and a
// cumulative front of partial solutions toward End. The front reaching the
// Start node is the answer.

#pragma once

#include "qoscompose/depgraph.hpp"

namespace qosc {

struct SolveLimits {
    std::size_t max_lpg_nodes = 200000;        // composition-graph node budget
    std::size_t max_combos_per_node = 1u << 20;  // enumeration budget per expansion
};

struct SolveStats {
    std::size_t lpg_nodes = 0;       // composition-graph nodes created
    std::size_t lpg_edges = 0;
    std::size_t levels = 0;          // layers swept (== End layer)
    std::size_t max_level_width = 0; // max front entries across intermediate levels
};

// Throws NoFeasibleSolutionError when constraints eliminate every
// composition, ResourceLimitError past the configured budgets.
FrontSet solve_optimal(const DepGraph& g, const SolveLimits& limits = {},
                       SolveStats* stats = nullptr);

}  // namespace qosc
