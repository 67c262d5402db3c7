// optimal.cpp - exact solver driving the shared sweep breadth-first.

#include "qoscompose/optimal.hpp"

#include <deque>
#include <map>

#include "lpg.hpp"

namespace qosc {

FrontSet solve_optimal(const DepGraph& g, const SolveLimits& limits,
                       SolveStats* stats) {
    lpg::Sweep sweep(g, limits);

    // FIFO over creation order keeps the sweep level-synchronous: every
    // node's cumulative front is complete before any of its predecessor
    // combinations is expanded.
    std::deque<int> queue{sweep.init()};
    std::vector<int> created;
    while (!queue.empty()) {
        const int id = queue.front();
        queue.pop_front();
        created.clear();
        sweep.expand(id, &created);
        queue.insert(queue.end(), created.begin(), created.end());
    }

    // Width of a level is the number of front entries the beam variant
    // would have to retain there to stay exact.
    std::map<int, std::size_t> widths;
    for (std::size_t i = 0; i < sweep.size(); ++i) {
        const lpg::Node& n = sweep.node(static_cast<int>(i));
        if (n.level <= 0 || n.level >= static_cast<int>(sweep.stats().levels))
            continue;
        widths[n.level] += n.cp.size();
    }
    for (const auto& [level, width] : widths) sweep.record_level_width(width);

    FrontSet front = sweep.finish();
    if (stats) *stats = sweep.stats();
    return front;
}

}  // namespace qosc
