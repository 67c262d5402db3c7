// lpg.cpp - layered power-graph sweep shared by the exact and beam solvers.

#include "lpg.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <set>
#include <string>
#include <utility>

#include "qoscompose/log.hpp"

namespace qosc::lpg {

namespace {

// Tolerance for re-verifying a decoded solution against the swept value.
// Sequential folds run in opposite directions on the two sides, so sums and
// products may differ by accumulated rounding.
bool nearly_equal(double a, double b) {
    if (std::isinf(a) || std::isinf(b)) return a == b;
    return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
}

bool tuples_nearly_equal(const QosTuple& a, const QosTuple& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!nearly_equal(a[i], b[i])) return false;
    return true;
}

}  // namespace

Sweep::Sweep(const DepGraph& g, const SolveLimits& limits)
    : g_(g), limits_(limits), early_(g.early_globals) {}

int Sweep::init() {
    stats_.levels = static_cast<std::size_t>(g_.max_layer);
    return get_or_create({g_.end_id}, g_.max_layer);
}

int Sweep::start_node() const {
    const auto it = index_.find(std::vector<int>{g_.start_id});
    return it == index_.end() ? -1 : it->second;
}

void Sweep::record_level_width(std::size_t width) {
    stats_.max_level_width = std::max(stats_.max_level_width, width);
}

int Sweep::get_or_create(const std::vector<int>& members, int level) {
    const auto it = index_.find(members);
    if (it != index_.end()) return it->second;

    if (nodes_.size() >= limits_.max_lpg_nodes)
        throw ResourceLimitError("composition graph exceeded " +
                                 std::to_string(limits_.max_lpg_nodes) +
                                 " nodes");

    Node n;
    n.members = members;
    n.level = level;
    build_pprime(n);
    n.disregarded = n.pprime.empty();
    if (members.size() == 1 && members[0] == g_.end_id) {
        // End contributes the identity; the front grows on the way back.
        n.cp.push_back({identity_tuple(g_.params), 0, -1, -1});
    }

    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back(std::move(n));
    index_.emplace(members, id);
    ++stats_.lpg_nodes;
    return id;
}

void Sweep::build_pprime(Node& n) {
    // Cross product of the members' offer lists, folded with the parallel
    // composition; offers a single member already dooms are gone, so only
    // the early-checkable global constraints are applied here.
    std::vector<QosTuple> tuples;
    std::vector<std::vector<int>> choices;

    std::vector<int> odo(n.members.size(), 0);
    std::size_t count = 0;
    while (true) {
        if (++count > limits_.max_combos_per_node)
            throw ResourceLimitError(
                "offer combinations exceeded " +
                std::to_string(limits_.max_combos_per_node) +
                " for one composition node");

        QosTuple q = identity_tuple(g_.params);
        for (std::size_t k = 0; k < n.members.size(); ++k)
            q = compose_par(g_.params, q, g_.nodes[n.members[k]].tuples[odo[k]]);
        if (satisfies_all(g_.params, early_, q)) {
            tuples.push_back(std::move(q));
            choices.push_back(odo);
        }

        std::size_t k = n.members.size();
        while (k > 0) {
            --k;
            const auto limit = g_.nodes[n.members[k]].tuples.size();
            if (static_cast<std::size_t>(++odo[k]) < limit) break;
            odo[k] = 0;
            if (k == 0) goto done;
        }
        if (n.members.empty()) break;
    }
done:
    for (const std::size_t i : non_dominated_indices(g_.params, tuples))
        n.pprime.push_back({tuples[i], choices[i]});
}

void Sweep::expand(int id, std::vector<int>* created) {
    const std::vector<int> members = nodes_[id].members;
    const int level = nodes_[id].level;
    if (level <= 0) return;  // the Start node has no predecessors

    // One choice slot per (member, input) pair, holding that member's own
    // provider nodes on the previous layer. Pooling providers by input name
    // across members would admit covers that bypass a member's actual
    // in-edges (a pass-through is fed only by its chain), and those are not
    // decodable. Pairs with identical provider lists share a slot: a cover
    // that split them would be a superset of the shared-choice cover and
    // falls to the redundancy filter below.
    std::set<std::vector<int>> slots;
    for (const int m : members)
        for (const std::string& in : g_.nodes[m].inputs)
            slots.insert(g_.providers(m, in));
    assert(slots.count({}) == 0);
    std::vector<std::vector<int>> provider_lists(slots.begin(), slots.end());

    // One provider per input, deduplicated as member sets.
    std::set<std::vector<int>> combo_set;
    std::vector<int> partial;
    std::size_t count = 0;
    auto enumerate = [&](auto&& self, std::size_t depth) -> void {
        if (depth == provider_lists.size()) {
            if (++count > limits_.max_combos_per_node)
                throw ResourceLimitError(
                    "predecessor combinations exceeded " +
                    std::to_string(limits_.max_combos_per_node) +
                    " for one composition node");
            std::vector<int> sorted = partial;
            std::sort(sorted.begin(), sorted.end());
            sorted.erase(std::unique(sorted.begin(), sorted.end()),
                         sorted.end());
            combo_set.insert(std::move(sorted));
            return;
        }
        for (const int p : provider_lists[depth]) {
            partial.push_back(p);
            self(self, depth + 1);
            partial.pop_back();
        }
    };
    if (!provider_lists.empty()) enumerate(enumerate, 0);

    // A combination that covers every input with a subset of another one
    // makes the superset redundant: anything the superset provides toward
    // this node, the subset provides no worse after non-domination.
    std::vector<std::vector<int>> combos(combo_set.begin(), combo_set.end());
    std::stable_sort(combos.begin(), combos.end(),
                     [](const std::vector<int>& a, const std::vector<int>& b) {
                         if (a.size() != b.size()) return a.size() < b.size();
                         return a < b;
                     });
    std::vector<std::vector<int>> kept;
    for (const auto& c : combos) {
        bool redundant = false;
        for (const auto& k : kept) {
            if (k.size() < c.size() &&
                std::includes(c.begin(), c.end(), k.begin(), k.end())) {
                redundant = true;
                break;
            }
        }
        if (!redundant) kept.push_back(c);
    }

    for (const auto& combo : kept) {
        const std::size_t before = nodes_.size();
        const int jid = get_or_create(combo, level - 1);
        const bool is_new = nodes_.size() > before;
        if (nodes_[jid].disregarded) continue;
        extend_front(jid, id);
        ++stats_.lpg_edges;
        nodes_[id].preds.push_back(jid);
        if (is_new && created) created->push_back(jid);
    }
}

void Sweep::extend_front(int pred_id, int succ_id) {
    Node& j = nodes_[pred_id];
    const Node& i = nodes_[succ_id];

    std::vector<CpEntry> combined = j.cp;
    for (std::size_t pi = 0; pi < j.pprime.size(); ++pi) {
        for (std::size_t ci = 0; ci < i.cp.size(); ++ci) {
            QosTuple q = compose_seq(g_.params, j.pprime[pi].q, i.cp[ci].q);
            if (!satisfies_all(g_.params, early_, q)) continue;
            combined.push_back({std::move(q), static_cast<int>(pi), succ_id,
                                static_cast<int>(ci)});
        }
    }

    std::vector<QosTuple> tuples;
    tuples.reserve(combined.size());
    for (const auto& e : combined) tuples.push_back(e.q);

    std::vector<CpEntry> front;
    for (const std::size_t idx : non_dominated_indices(g_.params, tuples))
        front.push_back(combined[idx]);
    j.cp = std::move(front);
}

SolutionGraph Sweep::decode(const CpEntry& final_entry) const {
    SolutionGraph sg;
    // Solution nodes and edges name origin services of the repository the
    // dependency graph was built from, so a clustered solve still yields a
    // directly executable plan.
    std::map<int, std::string> origin;  // dependency node id -> service id
    std::map<std::pair<std::string, std::string>, std::set<std::string>> edges;

    // Walk the back-pointer chain from Start to End. Each link is one layer
    // of the composition; its members run in parallel.
    const CpEntry* entry = &final_entry;
    int cur = start_node();
    std::vector<int> prev_members;
    while (true) {
        const Node& n = nodes_[cur];
        const auto& choice = n.pprime[entry->pprime_idx].choice;

        for (std::size_t k = 0; k < n.members.size(); ++k) {
            const DepNode& dep = g_.nodes[n.members[k]];
            if (dep.kind != NodeKind::Service) continue;

            SolutionNode sn;
            const auto& sources = dep.tuple_sources[choice[k]];
            if (!sources.empty()) {
                sn.id = sources.front().service_id;
                sn.tuple_index = sources.front().tuple_index;
            } else {
                sn.id = dep.name;
                sn.tuple_index = choice[k];
            }
            sn.tuple = dep.tuples[choice[k]];
            sn.stage = dep.layer;
            origin[dep.id] = sn.id;

            // Providing edges, with pass-through chains contracted back to
            // their real producer. Producers sit on lower layers, so their
            // origin names are already known.
            for (const int ei : g_.in_edges[dep.id]) {
                const DepEdge& e = g_.edges[ei];
                if (std::find(prev_members.begin(), prev_members.end(),
                              e.from) == prev_members.end())
                    continue;
                const int root = qosc::dummy_root(g_, e.from);
                if (g_.nodes[root].kind != NodeKind::Service) continue;
                auto& params = edges[{origin.at(root), sn.id}];
                params.insert(e.params.begin(), e.params.end());
            }
            sg.nodes.push_back(std::move(sn));
        }

        if (entry->succ < 0) break;
        prev_members = n.members;
        const int nxt = entry->succ;
        entry = &nodes_[nxt].cp[entry->succ_cp];
        cur = nxt;
    }

    std::sort(sg.nodes.begin(), sg.nodes.end(),
              [](const SolutionNode& a, const SolutionNode& b) {
                  return std::tie(a.stage, a.id) < std::tie(b.stage, b.id);
              });
    for (const auto& [key, params] : edges)
        sg.edges.push_back({key.first, key.second,
                            std::vector<std::string>(params.begin(),
                                                     params.end())});
    return sg;
}

FrontSet Sweep::finish() {
    const int sid = start_node();
    if (sid < 0 || nodes_[sid].cp.empty())
        throw NoFeasibleSolutionError(
            "constraints eliminate every composition for the query");

    FrontSet out;
    for (const CpEntry& e : nodes_[sid].cp) {
        if (!satisfies_all(g_.params, g_.query.globals, e.q)) continue;
        FrontEntry fe;
        fe.tuple = e.q;
        fe.solution = decode(e);
        const QosTuple check = solution_qos(g_.params, fe.solution);
        if (!tuples_nearly_equal(check, e.q))
            throw Error("internal: decoded solution QoS diverges from the "
                        "swept front value");
        out.entries.push_back(std::move(fe));
    }
    if (out.entries.empty())
        throw NoFeasibleSolutionError(
            "every Pareto-optimal composition violates a global constraint");
    return out;
}

}  // namespace qosc::lpg
