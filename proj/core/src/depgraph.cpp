#include "qoscompose/depgraph.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "qoscompose/log.hpp"

namespace qosc {

namespace {

void rebuild_adjacency(DepGraph& g) {
    g.out_edges.assign(g.nodes.size(), {});
    g.in_edges.assign(g.nodes.size(), {});
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        g.out_edges[g.edges[e].from].push_back(static_cast<int>(e));
        g.in_edges[g.edges[e].to].push_back(static_cast<int>(e));
    }
}

std::vector<std::string> intersect_sorted(const std::vector<std::string>& a,
                                          const std::vector<std::string>& b) {
    std::vector<std::string> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                          std::back_inserter(out));
    return out;
}

}  // namespace

std::vector<int> DepGraph::providers(int node, const std::string& input) const {
    std::vector<int> out;
    for (int e : in_edges[node]) {
        const DepEdge& edge = edges[e];
        if (std::binary_search(edge.params.begin(), edge.params.end(), input))
            out.push_back(edge.from);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

int dummy_root(const DepGraph& g, int node_id) {
    int cur = node_id;
    while (g.nodes[cur].kind == NodeKind::Dummy) {
        if (g.in_edges[cur].size() != 1)
            throw ValidationError("pass-through node without a unique source");
        cur = g.edges[g.in_edges[cur][0]].from;
    }
    return cur;
}

DepGraph build_activation(const ClusteredRepository& crepo, const Query& query) {
    const Repository& repo = crepo.repo;

    DepGraph g;
    g.params = repo.params;
    g.query = query;
    normalize_and_validate(g.query, g.params);

    for (const auto& c : g.query.globals)
        if (!constraint_aligned(g.params, c))
            log::warn("global constraint on '" + c.param_id +
                      "' does not bound the worst case; Pareto pruning may "
                      "lose feasible solutions");

    g.early_globals = early_global_constraints(repo, g.query);
    const std::vector<Constraint>& early = g.early_globals;
    const QosTuple identity = identity_tuple(g.params);

    // Start node provides the query inputs.
    DepNode start;
    start.id = 0;
    start.kind = NodeKind::Start;
    start.name = "start";
    start.outputs = g.query.inputs;
    start.tuples = {identity};
    start.tuple_sources = {{}};
    start.round = 0;
    g.nodes.push_back(std::move(start));
    g.start_id = 0;

    // Forward fixpoint. A service joins in the first round where all its
    // inputs are available; its offers are filtered once, at that moment.
    std::set<std::string> available(g.query.inputs.begin(), g.query.inputs.end());
    std::set<std::string> placed;    // activated or permanently rejected
    int round = 0;
    bool grew = true;
    while (grew) {
        grew = false;
        ++round;
        std::vector<const Service*> joined;
        for (const auto& s : repo.services) {
            if (placed.count(s.id)) continue;
            const bool ready = std::all_of(
                s.inputs.begin(), s.inputs.end(),
                [&](const std::string& in) { return available.count(in) > 0; });
            if (!ready) continue;
            placed.insert(s.id);

            std::vector<QosTuple> kept;
            std::vector<std::vector<TupleSource>> kept_sources;
            const auto src_it = crepo.tuple_sources.find(s.id);
            for (std::size_t ti = 0; ti < s.tuples.size(); ++ti) {
                const QosTuple& t = s.tuples[ti];
                if (satisfies_all(g.params, g.query.locals, t) &&
                    satisfies_all(g.params, early, t)) {
                    kept.push_back(t);
                    if (src_it != crepo.tuple_sources.end())
                        kept_sources.push_back(src_it->second[ti]);
                    else
                        kept_sources.push_back({{s.id, static_cast<int>(ti)}});
                } else {
                    g.removed_tuples.push_back({s.id, t});
                }
            }
            if (kept.empty()) {
                log::debug("service " + s.id + " rejected: no offer passes constraints");
                continue;
            }

            DepNode n;
            n.id = static_cast<int>(g.nodes.size());
            n.kind = NodeKind::Service;
            n.name = s.id;
            n.inputs = s.inputs;
            n.outputs = s.outputs;
            n.tuples = std::move(kept);
            n.tuple_sources = std::move(kept_sources);
            n.round = round;
            g.nodes.push_back(std::move(n));
            joined.push_back(&s);
            grew = true;
        }
        // Outputs become available only after the whole round, so a round
        // is exactly one breadth level of the closure.
        for (const Service* s : joined)
            available.insert(s->outputs.begin(), s->outputs.end());
    }

    std::vector<std::string> missing;
    for (const auto& o : g.query.outputs)
        if (!available.count(o)) missing.push_back(o);
    if (!missing.empty()) {
        std::string msg = "query outputs unreachable:";
        for (const auto& o : missing) msg += " " + o;
        throw NoSolutionError(msg);
    }

    DepNode end;
    end.id = static_cast<int>(g.nodes.size());
    end.kind = NodeKind::End;
    end.name = "end";
    end.inputs = g.query.outputs;
    end.tuples = {identity};
    end.tuple_sources = {{}};
    end.round = round + 1;
    g.end_id = end.id;
    g.nodes.push_back(std::move(end));

    // One edge per ordered pair with a non-empty name overlap.
    for (const auto& u : g.nodes) {
        if (u.kind == NodeKind::End) continue;
        for (const auto& v : g.nodes) {
            if (v.kind == NodeKind::Start || v.id == u.id) continue;
            auto carried = intersect_sorted(u.outputs, v.inputs);
            if (!carried.empty())
                g.edges.push_back({u.id, v.id, std::move(carried)});
        }
        // Self-provision (a service consuming its own output) still needs an
        // edge so cycle breaking can record it.
        if (u.kind == NodeKind::Service) {
            auto self = intersect_sorted(u.outputs, u.inputs);
            if (!self.empty()) g.edges.push_back({u.id, u.id, std::move(self)});
        }
    }

    rebuild_adjacency(g);
    return g;
}

void prune_backward(DepGraph& g) {
    std::vector<char> keep(g.nodes.size(), 0);
    std::deque<int> bfs{g.end_id};
    keep[g.end_id] = 1;
    while (!bfs.empty()) {
        const int v = bfs.front();
        bfs.pop_front();
        for (int e : g.in_edges[v]) {
            const int u = g.edges[e].from;
            if (!keep[u]) {
                keep[u] = 1;
                bfs.push_back(u);
            }
        }
    }
    keep[g.start_id] = 1;

    std::size_t kept_services = 0;
    for (const auto& n : g.nodes)
        if (keep[n.id] && n.kind == NodeKind::Service) ++kept_services;
    if (kept_services == 0)
        throw NoSolutionError("no service contributes to the query outputs");

    // Compact nodes and edges.
    std::vector<int> remap(g.nodes.size(), -1);
    std::vector<DepNode> nodes;
    for (auto& n : g.nodes) {
        if (!keep[n.id]) {
            log::debug("pruned non-contributing node " + n.name);
            continue;
        }
        remap[n.id] = static_cast<int>(nodes.size());
        n.id = remap[n.id];
        nodes.push_back(std::move(n));
    }
    std::vector<DepEdge> edges;
    for (auto& e : g.edges) {
        if (remap[e.from] < 0 || remap[e.to] < 0) continue;
        e.from = remap[e.from];
        e.to = remap[e.to];
        edges.push_back(std::move(e));
    }
    g.nodes = std::move(nodes);
    g.edges = std::move(edges);
    g.start_id = remap[g.start_id];
    g.end_id = remap[g.end_id];
    rebuild_adjacency(g);
}

void break_cycles(DepGraph& g) {
    // Discovery order: activation round, then node index. An edge whose
    // target was finalized no later than its source is a back edge; it is
    // dropped when it closes a cycle in the remaining graph.
    auto key = [&](int v) { return std::pair<int, int>(g.nodes[v].round, v); };

    std::vector<int> back;
    for (std::size_t e = 0; e < g.edges.size(); ++e)
        if (key(g.edges[e].to) <= key(g.edges[e].from))
            back.push_back(static_cast<int>(e));
    if (back.empty()) return;

    std::sort(back.begin(), back.end(), [&](int a, int b) {
        const auto ka = std::pair(key(g.edges[a].from), key(g.edges[a].to));
        const auto kb = std::pair(key(g.edges[b].from), key(g.edges[b].to));
        return ka < kb;
    });

    std::vector<char> dropped(g.edges.size(), 0);
    auto reaches = [&](int src, int dst) {
        if (src == dst) return true;
        std::vector<char> seen(g.nodes.size(), 0);
        std::deque<int> q{src};
        seen[src] = 1;
        while (!q.empty()) {
            const int v = q.front();
            q.pop_front();
            for (int e : g.out_edges[v]) {
                if (dropped[e]) continue;
                const int w = g.edges[e].to;
                if (w == dst) return true;
                if (!seen[w]) {
                    seen[w] = 1;
                    q.push_back(w);
                }
            }
        }
        return false;
    };

    for (int e : back) {
        const DepEdge& edge = g.edges[e];
        if (edge.from == edge.to || reaches(edge.to, edge.from)) {
            dropped[e] = 1;
            g.dropped_edges.push_back({g.nodes[edge.from].name, g.nodes[edge.to].name});
            log::info("cycle break: dropped edge " + g.nodes[edge.from].name +
                      " -> " + g.nodes[edge.to].name);
        }
    }

    std::vector<DepEdge> edges;
    for (std::size_t e = 0; e < g.edges.size(); ++e)
        if (!dropped[e]) edges.push_back(std::move(g.edges[e]));
    g.edges = std::move(edges);
    rebuild_adjacency(g);
}

void layerize(DepGraph& g) {
    // Kahn topological pass; the graph is acyclic after break_cycles.
    std::vector<int> indegree(g.nodes.size(), 0);
    for (const auto& e : g.edges) ++indegree[e.to];

    std::deque<int> ready;
    for (const auto& n : g.nodes) {
        if (indegree[n.id] == 0) {
            if (n.id != g.start_id)
                throw ValidationError("internal: node " + n.name +
                                      " has no providers after cycle breaking");
            ready.push_back(n.id);
        }
    }

    std::size_t visited = 0;
    std::vector<int> layer(g.nodes.size(), 0);
    while (!ready.empty()) {
        const int u = ready.front();
        ready.pop_front();
        ++visited;
        for (int e : g.out_edges[u]) {
            const int v = g.edges[e].to;
            layer[v] = std::max(layer[v], layer[u] + 1);
            if (--indegree[v] == 0) ready.push_back(v);
        }
    }
    if (visited != g.nodes.size())
        throw ValidationError("internal: dependency graph still cyclic");

    for (auto& n : g.nodes) n.layer = layer[n.id];
    g.max_layer = g.nodes[g.end_id].layer;

    // Split multi-layer edges with pass-through dummies.
    const QosTuple identity = identity_tuple(g.params);
    std::vector<DepEdge> edges;
    for (const auto& e : g.edges) {
        const int span = g.nodes[e.to].layer - g.nodes[e.from].layer;
        if (span <= 0)
            throw ValidationError("internal: non-forward edge after layering");
        if (span == 1) {
            edges.push_back(e);
            continue;
        }
        int prev = e.from;
        for (int step = 1; step < span; ++step) {
            DepNode d;
            d.id = static_cast<int>(g.nodes.size());
            d.kind = NodeKind::Dummy;
            d.name = "pass:" + g.nodes[e.from].name + ":" + g.nodes[e.to].name +
                     ":" + std::to_string(step);
            d.inputs = e.params;
            d.outputs = e.params;
            d.tuples = {identity};
            d.tuple_sources = {{}};
            d.round = g.nodes[e.from].round;
            d.layer = g.nodes[e.from].layer + step;
            g.nodes.push_back(d);
            edges.push_back({prev, d.id, e.params});
            prev = d.id;
        }
        edges.push_back({prev, e.to, e.params});
    }
    g.edges = std::move(edges);
    rebuild_adjacency(g);
}

DepGraph build_dependency_graph(const ClusteredRepository& crepo, const Query& query) {
    DepGraph g = build_activation(crepo, query);
    prune_backward(g);
    break_cycles(g);
    layerize(g);
    return g;
}

}  // namespace qosc
