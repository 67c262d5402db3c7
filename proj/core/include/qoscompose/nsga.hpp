// nsga.hpp - evolutionary Pareto search over dependency-graph subgraphs.
//
// Individuals are bit strings over the dependency-graph nodes plus one
// offer index per set bit. Every operator rebuilds or swaps provider
// choices backward from End, so each individual decodes to a functionally
// valid composition by construction. Ranking follows non-dominated sorting
// with crowding distance; individuals violating a global constraint sort
// after every feasible level.

#pragma once

#include <cstdint>
#include <utility>

#include "qoscompose/depgraph.hpp"
#include "qoscompose/rng.hpp"

namespace qosc {

struct Chromosome {
    std::vector<std::uint8_t> bits;  // one per dependency node; Start/End stay 0
    std::vector<int> tuple_choice;   // offer index per node, -1 where unset

    bool operator==(const Chromosome&) const = default;
    bool operator<(const Chromosome& o) const {
        if (bits != o.bits) return bits < o.bits;
        return tuple_choice < o.tuple_choice;
    }
};

struct GaConfig {
    std::size_t population = 100;
    std::size_t iterations = 10000;
    double crossover_prob = 0.85;
    double mutation_prob = 0.01;
    std::uint64_t seed = 1;
    std::size_t workers = 1;  // fitness evaluation threads; output-neutral
};

struct FitnessInfo {
    QosTuple objectives;
    bool feasible = true;      // against the query's global constraints
    std::size_t level = 0;     // non-domination front, 0-based
    double crowding = 0.0;
    std::size_t rank = 0;      // 1-based position under the rank ordering
};

// Uniform backward construction from End: one provider per required input,
// one offer per chosen node.
Chromosome random_chromosome(const DepGraph& g, Rng& rng);

// Induced-subgraph phenotype with pass-through nodes stripped; stages are
// the dependency-graph layers. Throws InvalidGenotypeError when the bits do
// not cover some required input or miss a query output.
SolutionGraph decode(const DepGraph& g, const Chromosome& c);

// Swaps everything upstream of a randomly chosen common node. Parents come
// back unchanged when only Start and End are common.
std::pair<Chromosome, Chromosome> crossover(const DepGraph& g,
                                            const Chromosome& a,
                                            const Chromosome& b, Rng& rng);

// Backward rebuild keeping the parent's provider per input with probability
// 1 - pm when alternatives exist; offer choices of kept nodes are re-drawn
// with probability pm.
Chromosome mutate(const DepGraph& g, const Chromosome& c, double pm, Rng& rng);

// Levels, crowding distances and ranks for one population. `objectives`
// and `pop` run parallel; `pop` only breaks ties deterministically.
std::vector<FitnessInfo> fitness_rank(const ParamSet& params,
                                      const std::vector<Constraint>& globals,
                                      const std::vector<QosTuple>& objectives,
                                      const std::vector<Chromosome>& pop);

// Full loop: roulette pair selection, crossover, mutation, elitist
// truncation. Returns the feasible level-0 front of the last generation,
// possibly empty. A fixed seed gives identical output regardless of
// `workers`.
FrontSet solve_nsga(const DepGraph& g, const GaConfig& cfg);

}  // namespace qosc
