// nsga.cpp - genetic search with validity-preserving operators.

#include "qoscompose/nsga.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <exception>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <thread>
#include <utility>

#include "qoscompose/log.hpp"

namespace qosc {

namespace {

// Uniform pick that consumes randomness only when there is a choice.
int pick(const std::vector<int>& options, Rng& rng) {
    return options[options.size() == 1 ? 0 : rng.uniform(options.size())];
}

int draw_tuple(const DepGraph& g, int node, Rng& rng) {
    const std::size_t n = g.nodes[node].tuples.size();
    return n <= 1 ? 0 : static_cast<int>(rng.uniform(n));
}

bool is_member(const DepGraph& g, const Chromosome& c, int v) {
    return v == g.start_id || v == g.end_id || c.bits[v] != 0;
}

}  // namespace

Chromosome random_chromosome(const DepGraph& g, Rng& rng) {
    Chromosome c;
    c.bits.assign(g.nodes.size(), 0);
    c.tuple_choice.assign(g.nodes.size(), -1);

    std::deque<int> queue{g.end_id};
    std::vector<char> seen(g.nodes.size(), 0);
    seen[g.end_id] = 1;
    while (!queue.empty()) {
        const int v = queue.front();
        queue.pop_front();
        for (const std::string& io : g.nodes[v].inputs) {
            const int u = pick(g.providers(v, io), rng);
            if (u == g.start_id || seen[u]) continue;
            seen[u] = 1;
            c.bits[u] = 1;
            c.tuple_choice[u] = draw_tuple(g, u, rng);
            queue.push_back(u);
        }
    }
    return c;
}

SolutionGraph decode(const DepGraph& g, const Chromosome& c) {
    if (c.bits.size() != g.nodes.size() ||
        c.tuple_choice.size() != g.nodes.size())
        throw InvalidGenotypeError("genotype length does not match the graph");
    if (c.bits[g.start_id] || c.bits[g.end_id])
        throw InvalidGenotypeError("Start and End may not be genotype bits");

    // The graph is layered, so per-node provider coverage is the same as a
    // full forward activation replay.
    for (std::size_t v = 0; v < g.nodes.size(); ++v) {
        const bool included = c.bits[v] != 0;
        if (!included && static_cast<int>(v) != g.end_id) continue;
        for (const std::string& io : g.nodes[v].inputs) {
            bool provided = false;
            for (const int u : g.providers(static_cast<int>(v), io)) {
                if (is_member(g, c, u)) {
                    provided = true;
                    break;
                }
            }
            if (!provided)
                throw InvalidGenotypeError("input '" + io + "' of '" +
                                           g.nodes[v].name +
                                           "' has no provider in the genotype");
        }
        if (included) {
            const int tc = c.tuple_choice[v];
            if (tc < 0 || tc >= static_cast<int>(g.nodes[v].tuples.size()))
                throw InvalidGenotypeError("offer index out of range for '" +
                                           g.nodes[v].name + "'");
        }
    }

    SolutionGraph sg;
    std::map<int, std::string> origin;
    std::map<std::pair<std::string, std::string>, std::set<std::string>> acc;
    for (std::size_t v = 0; v < g.nodes.size(); ++v) {
        if (!c.bits[v] || g.nodes[v].kind != NodeKind::Service) continue;
        const DepNode& dep = g.nodes[v];
        const int tc = c.tuple_choice[v];

        SolutionNode sn;
        const auto& sources = dep.tuple_sources[tc];
        if (!sources.empty()) {
            sn.id = sources.front().service_id;
            sn.tuple_index = sources.front().tuple_index;
        } else {
            sn.id = dep.name;
            sn.tuple_index = tc;
        }
        sn.tuple = dep.tuples[tc];
        sn.stage = dep.layer;
        origin[static_cast<int>(v)] = sn.id;
        sg.nodes.push_back(std::move(sn));
    }
    for (std::size_t v = 0; v < g.nodes.size(); ++v) {
        if (!c.bits[v] || g.nodes[v].kind != NodeKind::Service) continue;
        for (const int ei : g.in_edges[v]) {
            const DepEdge& e = g.edges[ei];
            if (!is_member(g, c, e.from)) continue;
            const int root = dummy_root(g, e.from);
            if (g.nodes[root].kind != NodeKind::Service) continue;
            auto& params = acc[{origin.at(root), origin.at(static_cast<int>(v))}];
            params.insert(e.params.begin(), e.params.end());
        }
    }

    std::sort(sg.nodes.begin(), sg.nodes.end(),
              [](const SolutionNode& a, const SolutionNode& b) {
                  return std::tie(a.stage, a.id) < std::tie(b.stage, b.id);
              });
    for (const auto& [key, params] : acc)
        sg.edges.push_back({key.first, key.second,
                            std::vector<std::string>(params.begin(),
                                                     params.end())});
    return sg;
}

std::pair<Chromosome, Chromosome> crossover(const DepGraph& g,
                                            const Chromosome& a,
                                            const Chromosome& b, Rng& rng) {
    std::vector<int> common;
    for (std::size_t v = 0; v < g.nodes.size(); ++v)
        if (a.bits[v] && b.bits[v]) common.push_back(static_cast<int>(v));
    if (common.empty()) {
        log::debug("crossover: no common node, parents returned unchanged");
        return {a, b};
    }
    const int vi = pick(common, rng);

    // Backward scan of `p` from End without descending below the common
    // node, then backward scan of `q` from the common node. Nodes feeding
    // only the common node in `p` are never reached, which drops exactly
    // the swapped-out upstream.
    const auto offspring = [&](const Chromosome& p, const Chromosome& q) {
        Chromosome o;
        o.bits.assign(g.nodes.size(), 0);
        o.tuple_choice.assign(g.nodes.size(), -1);

        std::deque<int> queue{g.end_id};
        std::vector<char> seen(g.nodes.size(), 0);
        seen[g.end_id] = 1;
        while (!queue.empty()) {
            const int v = queue.front();
            queue.pop_front();
            if (v != g.end_id) {
                o.bits[v] = 1;
                o.tuple_choice[v] = p.tuple_choice[v];
            }
            if (v == vi) continue;
            for (const int ei : g.in_edges[v]) {
                const int u = g.edges[ei].from;
                if (u == g.start_id || !p.bits[u] || seen[u]) continue;
                seen[u] = 1;
                queue.push_back(u);
            }
        }

        queue.assign(1, vi);
        std::vector<char> seen2(g.nodes.size(), 0);
        seen2[vi] = 1;
        while (!queue.empty()) {
            const int v = queue.front();
            queue.pop_front();
            if (v != vi && !o.bits[v]) {
                o.bits[v] = 1;
                o.tuple_choice[v] = q.tuple_choice[v];
            }
            for (const int ei : g.in_edges[v]) {
                const int u = g.edges[ei].from;
                if (u == g.start_id || !q.bits[u] || seen2[u]) continue;
                seen2[u] = 1;
                queue.push_back(u);
            }
        }
        return o;
    };
    return {offspring(a, b), offspring(b, a)};
}

Chromosome mutate(const DepGraph& g, const Chromosome& c, double pm,
                  Rng& rng) {
    Chromosome o;
    o.bits.assign(g.nodes.size(), 0);
    o.tuple_choice.assign(g.nodes.size(), -1);

    std::deque<int> queue{g.end_id};
    std::vector<char> seen(g.nodes.size(), 0);
    seen[g.end_id] = 1;
    while (!queue.empty()) {
        const int v = queue.front();
        queue.pop_front();
        if (v != g.end_id) {
            o.bits[v] = 1;
            const std::size_t ntup = g.nodes[v].tuples.size();
            if (!c.bits[v]) {
                o.tuple_choice[v] = draw_tuple(g, v, rng);
            } else {
                int tc = c.tuple_choice[v];
                if (ntup > 1 && rng.bernoulli(pm)) {
                    const std::size_t r = rng.uniform(ntup - 1);
                    tc = static_cast<int>(r < static_cast<std::size_t>(tc)
                                              ? r
                                              : r + 1);
                }
                o.tuple_choice[v] = tc;
            }
        }

        const bool in_parent = v == g.end_id || c.bits[v];
        for (const std::string& io : g.nodes[v].inputs) {
            const std::vector<int> provs = g.providers(v, io);
            int u;
            if (provs.size() == 1 || !in_parent) {
                u = pick(provs, rng);
            } else {
                std::vector<int> kept, others;
                for (const int p : provs)
                    (is_member(g, c, p) ? kept : others).push_back(p);
                if (kept.empty()) {
                    u = pick(others, rng);
                } else if (others.empty() || !rng.bernoulli(pm)) {
                    u = pick(kept, rng);
                } else {
                    u = pick(others, rng);
                }
            }
            if (u == g.start_id || seen[u]) continue;
            seen[u] = 1;
            queue.push_back(u);
        }
    }
    return o;
}

std::vector<FitnessInfo> fitness_rank(const ParamSet& params,
                                      const std::vector<Constraint>& globals,
                                      const std::vector<QosTuple>& objectives,
                                      const std::vector<Chromosome>& pop) {
    const std::size_t n = objectives.size();
    if (pop.size() != n)
        throw ValidationError("objective and population sizes differ");

    std::vector<FitnessInfo> out(n);
    std::vector<std::size_t> feasible, infeasible;
    for (std::size_t i = 0; i < n; ++i) {
        out[i].objectives = objectives[i];
        out[i].feasible = satisfies_all(params, globals, objectives[i]);
        (out[i].feasible ? feasible : infeasible).push_back(i);
    }

    // Non-dominated sorting, feasible levels first (constrained domination).
    const auto sort_levels = [&](const std::vector<std::size_t>& group,
                                 std::size_t base) {
        std::vector<std::size_t> remaining = group;
        std::size_t level = base;
        while (!remaining.empty()) {
            std::vector<std::size_t> front, rest;
            for (const std::size_t i : remaining) {
                bool dom = false;
                for (const std::size_t j : remaining) {
                    if (j != i && dominates(params, objectives[j],
                                            objectives[i])) {
                        dom = true;
                        break;
                    }
                }
                (dom ? rest : front).push_back(i);
            }
            for (const std::size_t i : front) out[i].level = level;
            ++level;
            remaining = std::move(rest);
        }
        return level;
    };
    sort_levels(infeasible, sort_levels(feasible, 0));

    // Crowding distance per level, normalized by the level's own spread.
    const double inf = std::numeric_limits<double>::infinity();
    std::map<std::size_t, std::vector<std::size_t>> by_level;
    for (std::size_t i = 0; i < n; ++i) by_level[out[i].level].push_back(i);
    for (auto& [level, members] : by_level) {
        if (members.size() <= 2) {
            for (const std::size_t i : members) out[i].crowding = inf;
            continue;
        }
        for (std::size_t k = 0; k < params.size(); ++k) {
            std::vector<std::size_t> order = members;
            std::stable_sort(order.begin(), order.end(),
                             [&](std::size_t a, std::size_t b) {
                                 return objectives[a][k] < objectives[b][k];
                             });
            out[order.front()].crowding = inf;
            out[order.back()].crowding = inf;
            const double range =
                objectives[order.back()][k] - objectives[order.front()][k];
            if (!(range > 0) || !std::isfinite(range)) continue;
            for (std::size_t pos = 1; pos + 1 < order.size(); ++pos) {
                const std::size_t i = order[pos];
                if (out[i].crowding == inf) continue;
                out[i].crowding += (objectives[order[pos + 1]][k] -
                                    objectives[order[pos - 1]][k]) /
                                   range;
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) {
                         if (out[a].level != out[b].level)
                             return out[a].level < out[b].level;
                         if (out[a].crowding != out[b].crowding)
                             return out[a].crowding > out[b].crowding;
                         if (!(pop[a] == pop[b])) return pop[a] < pop[b];
                         return false;
                     });
    for (std::size_t pos = 0; pos < n; ++pos) out[order[pos]].rank = pos + 1;
    return out;
}

namespace {

// Decode and aggregate a population, optionally on worker threads. Results
// land in genotype index order, so the schedule cannot change the outcome.
std::vector<QosTuple> evaluate(const DepGraph& g,
                               const std::vector<Chromosome>& pop,
                               std::size_t first, std::size_t workers,
                               std::vector<QosTuple> cached) {
    std::vector<QosTuple> objs = std::move(cached);
    objs.resize(pop.size());
    const auto run = [&](std::size_t lo, std::size_t hi,
                         std::exception_ptr& err) noexcept {
        try {
            for (std::size_t i = lo; i < hi; ++i)
                objs[i] = solution_qos(g.params, decode(g, pop[i]));
        } catch (...) {
            err = std::current_exception();
        }
    };

    const std::size_t todo = pop.size() - first;
    if (workers <= 1 || todo < 2) {
        std::exception_ptr err;
        run(first, pop.size(), err);
        if (err) std::rethrow_exception(err);
        return objs;
    }

    const std::size_t nthreads = std::min(workers, todo);
    std::vector<std::thread> threads;
    std::vector<std::exception_ptr> errors(nthreads);
    const std::size_t chunk = (todo + nthreads - 1) / nthreads;
    for (std::size_t t = 0; t < nthreads; ++t) {
        const std::size_t lo = first + t * chunk;
        const std::size_t hi = std::min(first + (t + 1) * chunk, pop.size());
        threads.emplace_back([&, lo, hi, t] { run(lo, hi, errors[t]); });
    }
    for (auto& th : threads) th.join();
    for (const auto& err : errors)
        if (err) std::rethrow_exception(err);
    return objs;
}

}  // namespace

FrontSet solve_nsga(const DepGraph& g, const GaConfig& cfg) {
    if (cfg.population < 2)
        throw ValidationError("population must be at least 2");
    if (cfg.crossover_prob < 0 || cfg.crossover_prob > 1 ||
        cfg.mutation_prob < 0 || cfg.mutation_prob > 1)
        throw ValidationError("probabilities must lie in [0, 1]");

    Rng rng(cfg.seed);
    const std::size_t n = cfg.population;

    std::vector<Chromosome> pop;
    pop.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        pop.push_back(random_chromosome(g, rng));
    std::vector<QosTuple> objs = evaluate(g, pop, 0, cfg.workers, {});
    std::vector<FitnessInfo> fit =
        fitness_rank(g.params, g.query.globals, objs, pop);

    for (std::size_t gen = 1; gen <= cfg.iterations; ++gen) {
        std::vector<std::uint64_t> weights(n);
        for (std::size_t i = 0; i < n; ++i)
            weights[i] = static_cast<std::uint64_t>(n - fit[i].rank + 1);

        std::vector<Chromosome> pool = pop;
        pool.reserve(3 * n);
        for (std::size_t s = 0; s < n; ++s) {
            const Chromosome& pa = pop[rng.weighted(weights)];
            const Chromosome& pb = pop[rng.weighted(weights)];
            Chromosome c3 = pa;
            Chromosome c4 = pb;
            if (rng.bernoulli(cfg.crossover_prob))
                std::tie(c3, c4) = crossover(g, pa, pb, rng);
            pool.push_back(mutate(g, c3, cfg.mutation_prob, rng));
            pool.push_back(mutate(g, c4, cfg.mutation_prob, rng));
        }

        // Parents keep their cached objectives; only offspring are decoded.
        std::vector<QosTuple> pool_objs =
            evaluate(g, pool, n, cfg.workers, objs);
        const std::vector<FitnessInfo> pool_fit =
            fitness_rank(g.params, g.query.globals, pool_objs, pool);

        std::vector<std::size_t> order(pool.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) {
                      return pool_fit[a].rank < pool_fit[b].rank;
                  });
        std::vector<Chromosome> next;
        std::vector<QosTuple> next_objs;
        next.reserve(n);
        next_objs.reserve(n);
        for (std::size_t pos = 0; pos < n; ++pos) {
            next.push_back(pool[order[pos]]);
            next_objs.push_back(pool_objs[order[pos]]);
        }
        pop = std::move(next);
        objs = std::move(next_objs);
        fit = fitness_rank(g.params, g.query.globals, objs, pop);

        if (log::enabled(log::Level::Debug)) {
            std::size_t level0 = 0;
            for (const auto& f : fit)
                if (f.level == 0 && f.feasible) ++level0;
            log::debug("generation " + std::to_string(gen) +
                       ": feasible level-0 size " + std::to_string(level0));
        }
    }

    // Feasible level-0 individuals, one witness per distinct tuple.
    std::vector<std::size_t> finalists;
    for (std::size_t i = 0; i < pop.size(); ++i)
        if (fit[i].level == 0 && fit[i].feasible) finalists.push_back(i);
    std::sort(finalists.begin(), finalists.end(),
              [&](std::size_t a, std::size_t b) {
                  if (objs[a] != objs[b]) return tuple_less(objs[a], objs[b]);
                  if (!(pop[a] == pop[b])) return pop[a] < pop[b];
                  return a < b;
              });

    FrontSet out;
    for (const std::size_t i : finalists) {
        if (!out.entries.empty() && out.entries.back().tuple == objs[i])
            continue;
        out.entries.push_back({objs[i], decode(g, pop[i])});
    }
    return out;
}

}  // namespace qosc
