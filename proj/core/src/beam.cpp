// beam.cpp - width-bounded sweep with utility-ranked retention per level.

#include "qoscompose/beam.hpp"

#include <algorithm>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "lpg.hpp"
#include "qoscompose/log.hpp"

namespace qosc {

namespace {

struct Pair {
    int node = -1;
    int idx = -1;  // index into the node's cumulative front
};

// Orders candidates by utility, best first; ties fall back to tuple order,
// then node id, then front index, so ranking is deterministic.
std::vector<std::size_t> rank_by_utility(const ParamSet& params,
                                         const std::vector<Pair>& pairs,
                                         const std::vector<QosTuple>& tuples) {
    const std::vector<double> utail = utilities(params, tuples);
    std::vector<std::size_t> order(pairs.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) {
                  if (utail[a] != utail[b]) return utail[a] > utail[b];
                  if (tuples[a] != tuples[b])
                      return tuple_less(tuples[a], tuples[b]);
                  if (pairs[a].node != pairs[b].node)
                      return pairs[a].node < pairs[b].node;
                  return pairs[a].idx < pairs[b].idx;
              });
    return order;
}

QosTuple pair_tuple(const lpg::Sweep& sweep, const Pair& p) {
    return sweep.node(p.node).cp[p.idx].q;
}

// Level next to End: the non-dominated pairs come first; past the width
// they are thinned by utility, short of it the dominated remainder tops
// them up. The kept pairs are then ranked by utility over the kept set.
std::vector<Pair> select_last(const lpg::Sweep& sweep, const ParamSet& params,
                              const std::vector<Pair>& pool,
                              std::size_t width) {
    std::vector<QosTuple> qs;
    qs.reserve(pool.size());
    for (const Pair& p : pool) qs.push_back(pair_tuple(sweep, p));

    std::vector<Pair> best, rest;
    std::vector<QosTuple> best_q, rest_q;
    for (std::size_t i = 0; i < pool.size(); ++i) {
        bool dominated = false;
        for (std::size_t j = 0; j < pool.size() && !dominated; ++j)
            dominated = j != i && dominates(params, qs[j], qs[i]);
        (dominated ? rest : best).push_back(pool[i]);
        (dominated ? rest_q : best_q).push_back(qs[i]);
    }

    std::vector<Pair> kept;
    std::vector<QosTuple> kept_q;
    if (best.size() > width) {
        for (const std::size_t i : rank_by_utility(params, best, best_q)) {
            if (kept.size() == width) break;
            kept.push_back(best[i]);
            kept_q.push_back(best_q[i]);
        }
    } else {
        kept = best;
        kept_q = best_q;
        for (const std::size_t i : rank_by_utility(params, rest, rest_q)) {
            if (kept.size() == width) break;
            kept.push_back(rest[i]);
            kept_q.push_back(rest_q[i]);
        }
    }

    std::vector<Pair> ranked;
    for (const std::size_t i : rank_by_utility(params, kept, kept_q))
        ranked.push_back(kept[i]);
    return ranked;
}

// Inner levels: the pool for rank j holds the pairs of the predecessor
// combinations of the nodes owning the previous level's top-j tuples (all
// retained nodes once j passes that ranking), minus what is already taken.
// Utilities are recomputed on each pool. Constraint filtering can leave a
// stated pool empty; then the next successor's predecessors are admitted
// early instead of burning the rank, so a sufficiently wide beam still
// retains every pair.
std::vector<Pair> select_inner(const lpg::Sweep& sweep, const ParamSet& params,
                               const std::vector<Pair>& pool,
                               const std::vector<int>& prev_ranked,
                               std::size_t width) {
    std::set<int> allowed;
    std::set<std::pair<int, int>> taken;
    std::vector<Pair> ranked;
    std::size_t admitted = 0;
    const auto admit = [&] {
        const lpg::Node& succ = sweep.node(prev_ranked[admitted]);
        allowed.insert(succ.preds.begin(), succ.preds.end());
        ++admitted;
    };

    while (ranked.size() < width) {
        const std::size_t j = ranked.size() + 1;
        while (admitted < std::min(j, prev_ranked.size())) admit();

        std::vector<Pair> cand;
        std::vector<QosTuple> cand_q;
        const auto collect = [&] {
            cand.clear();
            cand_q.clear();
            for (const Pair& p : pool) {
                if (!allowed.count(p.node) || taken.count({p.node, p.idx}))
                    continue;
                cand.push_back(p);
                cand_q.push_back(pair_tuple(sweep, p));
            }
        };
        collect();
        while (cand.empty() && admitted < prev_ranked.size()) {
            admit();
            collect();
        }
        if (cand.empty()) break;  // every reachable pair is taken

        const std::size_t pick = rank_by_utility(params, cand, cand_q)[0];
        ranked.push_back(cand[pick]);
        taken.insert({cand[pick].node, cand[pick].idx});
    }
    return ranked;
}

}  // namespace

FrontSet solve_beam(const DepGraph& g, const BeamOptions& opt,
                    const SolveLimits& limits, SolveStats* stats) {
    if (opt.width == 0)
        throw ValidationError("beam width must be positive");

    lpg::Sweep sweep(g, limits);
    std::vector<int> current{sweep.init()};
    std::vector<int> prev_ranked;

    for (int level = g.max_layer; level >= 1; --level) {
        std::vector<int> created;
        for (const int id : current) sweep.expand(id, &created);
        if (level == 1) break;  // the Start front is never truncated

        std::vector<Pair> pool;
        for (const int id : created)
            for (std::size_t c = 0; c < sweep.node(id).cp.size(); ++c)
                pool.push_back({id, static_cast<int>(c)});
        sweep.record_level_width(pool.size());

        const std::vector<Pair> ranked =
            level == g.max_layer
                ? select_last(sweep, g.params, pool, opt.width)
                : select_inner(sweep, g.params, pool, prev_ranked, opt.width);
        log::debug("beam level " + std::to_string(level - 1) + ": pool " +
                   std::to_string(pool.size()) + ", retained " +
                   std::to_string(ranked.size()));

        std::set<std::pair<int, int>> keep;
        for (const Pair& p : ranked) keep.insert({p.node, p.idx});
        current.clear();
        prev_ranked.clear();
        for (const int id : created) {
            lpg::Node& n = sweep.node(id);
            std::vector<lpg::CpEntry> cp;
            for (std::size_t c = 0; c < n.cp.size(); ++c)
                if (keep.count({id, static_cast<int>(c)}))
                    cp.push_back(n.cp[c]);
            n.cp = std::move(cp);
            if (!n.cp.empty()) current.push_back(id);
        }
        for (const Pair& p : ranked) prev_ranked.push_back(p.node);
    }

    FrontSet front = sweep.finish();
    if (stats) *stats = sweep.stats();
    return front;
}

}  // namespace qosc
