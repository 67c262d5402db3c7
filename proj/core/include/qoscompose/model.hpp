// model.hpp - QoS parameter model, tuples, aggregation, dominance,
// constraints, repositories, queries, solution graphs and Pareto fronts.
//
// Conventions used across the library:
//   * A QoS tuple is a vector of doubles, one entry per parameter of the
//     active ParamSet, in ParamSet order.
//   * Probability-like values (reliability, availability) are stored as
//     fractions in [0, 1]; input layers convert "93%" style text.
//   * Canonical tuple order is exact lexicographic order of the components.
//   * Equality checks use an absolute tolerance of 1e-9 per component;
//     dominance comparisons are exact.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace qosc {

// ---------------------------------------------------------------------------
// Errors

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input data (files, configs, inconsistent structures).
class ValidationError : public Error {
public:
    using Error::Error;
};

// The query cannot be answered functionally: no composition produces the
// requested outputs, regardless of QoS.
class NoSolutionError : public Error {
public:
    using Error::Error;
};

// Functionally solvable, but every composition violates a constraint.
class NoFeasibleSolutionError : public Error {
public:
    using Error::Error;
};

// A configured resource cap (layered-graph node budget) was exceeded.
class ResourceLimitError : public Error {
public:
    using Error::Error;
};

// The oracle refused an instance larger than its configured limits.
class OracleLimitError : public Error {
public:
    using Error::Error;
};

// A chromosome does not decode to a valid composition. Unreachable from the
// evolutionary loop; exists to guard direct decode calls.
class InvalidGenotypeError : public Error {
public:
    using Error::Error;
};

// ---------------------------------------------------------------------------
// Parameters

enum class Direction { Positive, Negative };

enum class Aggregator { Sum, Product, Min, Max };

const char* to_string(Direction d);
const char* to_string(Aggregator a);
Direction direction_from_string(const std::string& s);
Aggregator aggregator_from_string(const std::string& s);

struct QosParam {
    std::string id;        // stable key used by constraints and files
    std::string name;      // display name
    Direction direction = Direction::Negative;
    Aggregator seq_agg = Aggregator::Sum;   // sequential composition
    Aggregator par_agg = Aggregator::Sum;   // parallel composition

    bool operator==(const QosParam&) const = default;
};

// Standard parameter presets.
QosParam make_response_time();   // negative, seq Sum, par Max
QosParam make_throughput();      // positive, seq Min, par Min
QosParam make_reliability();     // positive, seq Product, par Product
QosParam make_availability();    // positive, seq Product, par Product

// Ordered parameter list; the position of a parameter is its column in every
// QoS tuple. Ids must be unique and non-empty.
struct ParamSet {
    std::vector<QosParam> params;

    ParamSet() = default;
    explicit ParamSet(std::vector<QosParam> p);

    std::size_t size() const { return params.size(); }
    const QosParam& at(std::size_t i) const { return params[i]; }

    // Index of a parameter id; throws ValidationError if unknown.
    std::size_t index_of(const std::string& id) const;
    bool has(const std::string& id) const;

    bool operator==(const ParamSet&) const = default;
};

// ---------------------------------------------------------------------------
// Tuples and aggregation

using QosTuple = std::vector<double>;

inline constexpr double kTupleEps = 1e-9;

// Identity element of an aggregator: Sum 0, Product 1, Min +inf, Max 0.
// These are the only values at which non-finite tuple entries are legal
// (dummy pass-through nodes).
double aggregator_identity(Aggregator a);
double aggregate(Aggregator a, double x, double y);

// Tuple whose entries are the seq/par aggregation identities of each
// parameter. Throws ValidationError if any parameter's seq and par
// identities differ (cannot represent a pass-through value for it).
QosTuple identity_tuple(const ParamSet& ps);

// Componentwise sequential / parallel composition.
QosTuple compose_seq(const ParamSet& ps, const QosTuple& a, const QosTuple& b);
QosTuple compose_par(const ParamSet& ps, const QosTuple& a, const QosTuple& b);

bool tuple_equal(const QosTuple& a, const QosTuple& b, double eps = kTupleEps);

// Exact lexicographic order; canonical order for fronts and reports.
bool tuple_less(const QosTuple& a, const QosTuple& b);

// ---------------------------------------------------------------------------
// Dominance

enum class Dominance {
    Equal,         // componentwise exactly equal
    Dominates,     // a at least as good everywhere, strictly better somewhere
    DominatedBy,
    Incomparable,
};

Dominance compare(const ParamSet& ps, const QosTuple& a, const QosTuple& b);
bool dominates(const ParamSet& ps, const QosTuple& a, const QosTuple& b);

// Indices of the non-dominated subset, in canonical order. Exact duplicates
// collapse to the entry with the lowest original index.
std::vector<std::size_t> non_dominated_indices(const ParamSet& ps,
                                               const std::vector<QosTuple>& tuples);

// Non-dominated subset in canonical order, duplicates collapsed.
std::vector<QosTuple> non_dominated(const ParamSet& ps, std::vector<QosTuple> tuples);

// Order-insensitive set comparison with per-component tolerance.
bool tuple_set_equal(std::vector<QosTuple> a, std::vector<QosTuple> b,
                     double eps = kTupleEps);

// ---------------------------------------------------------------------------
// Utility (linear normalization per parameter over a candidate pool)
//
// For parameter k over the pool let A_k be the maximum and B_k the minimum
// value. The normalized value of tuple entry P_k is
//     (A_k - P_k) / (A_k - B_k)  for negative parameters,
//     (P_k - B_k) / (A_k - B_k)  for positive parameters,
// and 1 when A_k == B_k. The utility of a tuple is the sum of its normalized
// values; higher is better in both directions.
std::vector<double> utilities(const ParamSet& ps, const std::vector<QosTuple>& pool);

// ---------------------------------------------------------------------------
// Constraints

enum class Cmp { Lt, Le, Gt, Ge };

const char* to_string(Cmp c);
Cmp cmp_from_string(const std::string& s);

struct Constraint {
    std::string param_id;
    Cmp cmp = Cmp::Lt;
    double bound = 0.0;

    bool operator==(const Constraint&) const = default;
};

bool satisfies(double value, Cmp cmp, double bound);
bool satisfies(const ParamSet& ps, const Constraint& c, const QosTuple& t);
bool satisfies_all(const ParamSet& ps, const std::vector<Constraint>& cs,
                   const QosTuple& t);

// A constraint is aligned when it bounds the worst case of its parameter:
// an upper bound on a negative parameter or a lower bound on a positive one.
// Pareto pruning is only guaranteed lossless for aligned constraints.
bool constraint_aligned(const ParamSet& ps, const Constraint& c);

// ---------------------------------------------------------------------------
// Repository and query

struct Service {
    std::string id;
    std::vector<std::string> inputs;    // sorted, unique, non-empty
    std::vector<std::string> outputs;   // sorted, unique, non-empty
    std::vector<QosTuple> tuples;       // at least one offer

    bool operator==(const Service&) const = default;
};

struct Repository {
    ParamSet params;
    std::vector<Service> services;      // sorted by id
    std::string provenance_json;        // raw JSON object text, "" if absent

    bool operator==(const Repository&) const = default;
};

// Normalizes (sorts services and name lists) and validates; throws
// ValidationError on duplicate ids, arity mismatches, non-finite or negative
// QoS values, or empty name sets.
void normalize_and_validate(Repository& repo);

struct Query {
    std::vector<std::string> inputs;    // sorted, unique, non-empty
    std::vector<std::string> outputs;   // sorted, unique, non-empty, disjoint from inputs
    std::vector<Constraint> locals;     // per-service constraints
    std::vector<Constraint> globals;    // whole-composition constraints

    bool operator==(const Query&) const = default;
};

void normalize_and_validate(Query& q, const ParamSet& ps);

// Global constraints a single offer can already violate beyond repair:
// upper bounds on parameters whose aggregators only grow the value
// (Sum/Max over non-negative inputs) and lower bounds on parameters whose
// aggregators only shrink it (Min; Product when every repository value for
// the parameter is <= 1).
std::vector<Constraint> early_global_constraints(const Repository& repo,
                                                 const Query& query);

// ---------------------------------------------------------------------------
// Solutions and fronts

struct SolutionNode {
    std::string id;         // service id in the repository the graph refers to
    int tuple_index = 0;    // chosen offer of that service
    QosTuple tuple;         // chosen offer values (self-contained)
    int stage = 1;          // 1-based sequential stage; equal stages run in parallel

    bool operator==(const SolutionNode&) const = default;
};

struct SolutionEdge {
    std::string from;
    std::string to;
    std::vector<std::string> params;    // parameter names carried, sorted

    bool operator==(const SolutionEdge&) const = default;
};

// An executable composition: nodes grouped into sequential stages of
// parallel sets. Stage indices come from the layering the solution was
// extracted from; gaps are allowed and contribute nothing.
struct SolutionGraph {
    std::vector<SolutionNode> nodes;    // sorted by (stage, id)
    std::vector<SolutionEdge> edges;    // sorted by (from, to)

    bool operator==(const SolutionGraph&) const = default;
};

// Folds parallel composition inside each stage, sequential composition
// across stages in ascending stage order. Throws ValidationError on an
// empty graph.
QosTuple solution_qos(const ParamSet& ps, const SolutionGraph& s);

struct FrontEntry {
    QosTuple tuple;
    SolutionGraph solution;
};

// A Pareto front with one witness solution per tuple, in canonical order.
struct FrontSet {
    std::vector<FrontEntry> entries;
};

std::vector<QosTuple> front_tuples(const FrontSet& f);

}  // namespace qosc
