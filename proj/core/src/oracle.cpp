// oracle.cpp - minimal-composition enumeration over the raw repository.

#include "qoscompose/oracle.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>

namespace qosc {

namespace {

struct Member {
    std::string id;
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
    std::vector<QosTuple> tuples;     // offers surviving the filters
    std::vector<int> tuple_index;     // original index per surviving offer
    int layer = 0;
};

struct Universe {
    std::vector<Member> members;                     // sorted by id
    std::map<std::string, std::vector<int>> producers;  // by output name
    std::set<std::string> query_inputs;
};

// Activated services with filtered offer lists and longest-path layers.
// Mirrors what the pipeline keeps, without using any of its code.
Universe build_universe(const Repository& repo, const Query& query,
                        const std::vector<Constraint>& early) {
    Universe u;
    u.query_inputs.insert(query.inputs.begin(), query.inputs.end());

    // Offer filter first: a service with nothing left cannot take part.
    std::vector<Member> pool;
    for (const Service& s : repo.services) {
        Member m;
        m.id = s.id;
        m.inputs = s.inputs;
        m.outputs = s.outputs;
        for (std::size_t ti = 0; ti < s.tuples.size(); ++ti) {
            if (satisfies_all(repo.params, query.locals, s.tuples[ti]) &&
                satisfies_all(repo.params, early, s.tuples[ti])) {
                m.tuples.push_back(s.tuples[ti]);
                m.tuple_index.push_back(static_cast<int>(ti));
            }
        }
        if (!m.tuples.empty()) pool.push_back(std::move(m));
    }

    // Forward closure from the query inputs.
    std::set<std::string> available = u.query_inputs;
    std::vector<char> active(pool.size(), 0);
    bool grew = true;
    while (grew) {
        grew = false;
        for (std::size_t i = 0; i < pool.size(); ++i) {
            if (active[i]) continue;
            const bool ready = std::all_of(
                pool[i].inputs.begin(), pool[i].inputs.end(),
                [&](const std::string& in) { return available.count(in) > 0; });
            if (!ready) continue;
            active[i] = 1;
            grew = true;
            available.insert(pool[i].outputs.begin(), pool[i].outputs.end());
        }
    }
    for (std::size_t i = 0; i < pool.size(); ++i)
        if (active[i]) u.members.push_back(std::move(pool[i]));

    for (std::size_t i = 0; i < u.members.size(); ++i)
        for (const std::string& out : u.members[i].outputs)
            u.producers[out].push_back(static_cast<int>(i));
    return u;
}

// layer(v) = 1 + max layer over services feeding any input of v; inputs
// covered only by the query contribute layer 0. Throws when the provision
// relation is cyclic.
void assign_layers(Universe& u) {
    const std::size_t n = u.members.size();
    std::vector<std::vector<int>> feeds(n);   // consumer -> producer indices
    std::vector<std::vector<int>> fed_by(n);  // producer -> consumer indices
    std::vector<std::size_t> degree(n, 0);
    for (std::size_t v = 0; v < n; ++v) {
        std::set<int> sources;
        for (const std::string& in : u.members[v].inputs) {
            const auto it = u.producers.find(in);
            if (it == u.producers.end()) continue;
            for (const int p : it->second)
                if (p != static_cast<int>(v)) sources.insert(p);
        }
        feeds[v].assign(sources.begin(), sources.end());
        degree[v] = feeds[v].size();
        for (const int p : feeds[v]) fed_by[p].push_back(static_cast<int>(v));
    }

    std::vector<int> ready;
    for (std::size_t v = 0; v < n; ++v)
        if (degree[v] == 0) ready.push_back(static_cast<int>(v));
    std::size_t done = 0;
    while (!ready.empty()) {
        const int v = ready.back();
        ready.pop_back();
        ++done;
        int layer = 1;
        for (const int p : feeds[v])
            layer = std::max(layer, u.members[p].layer + 1);
        u.members[v].layer = layer;
        for (const int c : fed_by[v])
            if (--degree[c] == 0) ready.push_back(c);
    }
    if (done != n)
        throw OracleLimitError(
            "instance is cyclic; the reference enumerator only handles "
            "acyclic compositions");
}

// True when every member input and every query output is covered inside
// the set (query inputs count as covered). On an acyclic universe this is
// exactly activation validity.
bool covered(const Universe& u, const Query& query,
             const std::set<int>& members) {
    const auto provided = [&](const std::string& io, int self) {
        if (u.query_inputs.count(io)) return true;
        const auto it = u.producers.find(io);
        if (it == u.producers.end()) return false;
        for (const int p : it->second)
            if (p != self && members.count(p)) return true;
        return false;
    };
    for (const int v : members)
        for (const std::string& in : u.members[v].inputs)
            if (!provided(in, v)) return false;
    for (const std::string& out : query.outputs)
        if (!provided(out, -1)) return false;
    return true;
}

struct Enumerator {
    const Universe& u;
    const Query& query;
    const OracleLimits& limits;
    std::set<std::vector<int>> structures;
    std::size_t work = 0;

    void bump() {
        if (++work > limits.max_combos)
            throw OracleLimitError("enumeration exceeded " +
                                   std::to_string(limits.max_combos) +
                                   " combinations");
    }

    // One producer choice per pending input, closed transitively. Inputs
    // the query provides never branch.
    void recurse(std::vector<std::string> pending, std::set<std::string> seen,
                 std::set<int> members) {
        bump();
        if (pending.empty()) {
            structures.emplace(members.begin(), members.end());
            return;
        }
        const std::string io = pending.back();
        pending.pop_back();

        const auto it = u.producers.find(io);
        if (it == u.producers.end()) return;  // unreachable input, dead branch
        for (const int p : it->second) {
            if (members.count(p)) {
                recurse(pending, seen, members);
                continue;
            }
            std::vector<std::string> next_pending = pending;
            std::set<std::string> next_seen = seen;
            std::set<int> next_members = members;
            next_members.insert(p);
            for (const std::string& in : u.members[p].inputs) {
                if (u.query_inputs.count(in) || !next_seen.insert(in).second)
                    continue;
                next_pending.push_back(in);
            }
            recurse(std::move(next_pending), std::move(next_seen),
                    std::move(next_members));
        }
    }
};

}  // namespace

std::vector<SolutionGraph> enumerate_solutions(const Repository& repo,
                                               const Query& query,
                                               const OracleLimits& limits) {
    Repository r = repo;
    normalize_and_validate(r);
    Query q = query;
    normalize_and_validate(q, r.params);

    if (r.services.size() > limits.max_services)
        throw OracleLimitError("repository exceeds the oracle limit of " +
                               std::to_string(limits.max_services) +
                               " services");
    if (r.params.size() > limits.max_params)
        throw OracleLimitError("parameter set exceeds the oracle limit of " +
                               std::to_string(limits.max_params));

    Universe u = build_universe(r, q, early_global_constraints(r, q));
    assign_layers(u);

    Enumerator en{u, q, limits, {}, 0};
    {
        std::vector<std::string> pending;
        std::set<std::string> seen;
        for (const std::string& out : q.outputs) {
            if (u.query_inputs.count(out) || !seen.insert(out).second)
                continue;
            pending.push_back(out);
        }
        en.recurse(std::move(pending), std::move(seen), {});
    }

    // Keep only single-removal-minimal structures; on acyclic instances
    // these are exactly the subset-minimal ones.
    std::vector<std::vector<int>> minimal;
    for (const std::vector<int>& s : en.structures) {
        const std::set<int> as_set(s.begin(), s.end());
        if (!covered(u, q, as_set)) continue;
        bool redundant = false;
        for (const int w : s) {
            std::set<int> probe = as_set;
            probe.erase(w);
            if (covered(u, q, probe)) {
                redundant = true;
                break;
            }
        }
        if (!redundant) minimal.push_back(s);
    }

    // Expand every offer combination of every minimal structure.
    std::vector<SolutionGraph> out;
    for (const std::vector<int>& s : minimal) {
        std::vector<int> odo(s.size(), 0);
        while (true) {
            en.bump();
            SolutionGraph sg;
            for (std::size_t k = 0; k < s.size(); ++k) {
                const Member& m = u.members[s[k]];
                SolutionNode sn;
                sn.id = m.id;
                sn.tuple_index = m.tuple_index[odo[k]];
                sn.tuple = m.tuples[odo[k]];
                sn.stage = m.layer;
                sg.nodes.push_back(std::move(sn));
            }
            std::sort(sg.nodes.begin(), sg.nodes.end(),
                      [](const SolutionNode& a, const SolutionNode& b) {
                          return std::tie(a.stage, a.id) <
                                 std::tie(b.stage, b.id);
                      });
            for (const int a : s) {
                for (const int b : s) {
                    if (a == b) continue;
                    std::vector<std::string> shared;
                    std::set_intersection(u.members[a].outputs.begin(),
                                          u.members[a].outputs.end(),
                                          u.members[b].inputs.begin(),
                                          u.members[b].inputs.end(),
                                          std::back_inserter(shared));
                    if (!shared.empty())
                        sg.edges.push_back({u.members[a].id, u.members[b].id,
                                            std::move(shared)});
                }
            }
            std::sort(sg.edges.begin(), sg.edges.end(),
                      [](const SolutionEdge& a, const SolutionEdge& b) {
                          return std::tie(a.from, a.to) <
                                 std::tie(b.from, b.to);
                      });
            out.push_back(std::move(sg));

            std::size_t k = s.size();
            bool rolled = true;
            while (k > 0) {
                --k;
                if (static_cast<std::size_t>(++odo[k]) <
                    u.members[s[k]].tuples.size()) {
                    rolled = false;
                    break;
                }
                odo[k] = 0;
            }
            if (rolled) break;
        }
    }
    return out;
}

FrontSet oracle_front(const Repository& repo, const Query& query,
                      const OracleLimits& limits) {
    Repository r = repo;
    normalize_and_validate(r);
    Query q = query;
    normalize_and_validate(q, r.params);

    const std::vector<SolutionGraph> sols =
        enumerate_solutions(r, q, limits);

    std::vector<QosTuple> tuples;
    std::vector<const SolutionGraph*> witnesses;
    for (const SolutionGraph& sg : sols) {
        const QosTuple t = solution_qos(r.params, sg);
        if (!satisfies_all(r.params, q.globals, t)) continue;
        tuples.push_back(t);
        witnesses.push_back(&sg);
    }

    FrontSet out;
    for (const std::size_t i : non_dominated_indices(r.params, tuples))
        out.entries.push_back({tuples[i], *witnesses[i]});
    return out;
}

}  // namespace qosc
