#include "qoscompose/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

namespace qosc {

namespace {

void sort_unique(std::vector<std::string>& names) {
    std::sort(names.begin(), names.end());
    names.erase(std::unique(names.begin(), names.end()), names.end());
}

}  // namespace

// ---------------------------------------------------------------------------
// Enum text

const char* to_string(Direction d) {
    return d == Direction::Positive ? "positive" : "negative";
}

const char* to_string(Aggregator a) {
    switch (a) {
        case Aggregator::Sum: return "sum";
        case Aggregator::Product: return "product";
        case Aggregator::Min: return "min";
        case Aggregator::Max: return "max";
    }
    return "?";
}

Direction direction_from_string(const std::string& s) {
    if (s == "positive") return Direction::Positive;
    if (s == "negative") return Direction::Negative;
    throw ValidationError("unknown direction: " + s);
}

Aggregator aggregator_from_string(const std::string& s) {
    if (s == "sum") return Aggregator::Sum;
    if (s == "product") return Aggregator::Product;
    if (s == "min") return Aggregator::Min;
    if (s == "max") return Aggregator::Max;
    throw ValidationError("unknown aggregator: " + s);
}

const char* to_string(Cmp c) {
    switch (c) {
        case Cmp::Lt: return "lt";
        case Cmp::Le: return "le";
        case Cmp::Gt: return "gt";
        case Cmp::Ge: return "ge";
    }
    return "?";
}

Cmp cmp_from_string(const std::string& s) {
    if (s == "lt" || s == "<") return Cmp::Lt;
    if (s == "le" || s == "<=") return Cmp::Le;
    if (s == "gt" || s == ">") return Cmp::Gt;
    if (s == "ge" || s == ">=") return Cmp::Ge;
    throw ValidationError("unknown comparator: " + s);
}

// ---------------------------------------------------------------------------
// Presets

QosParam make_response_time() {
    return {"response_time", "ResponseTime", Direction::Negative,
            Aggregator::Sum, Aggregator::Max};
}

QosParam make_throughput() {
    return {"throughput", "Throughput", Direction::Positive,
            Aggregator::Min, Aggregator::Min};
}

QosParam make_reliability() {
    return {"reliability", "Reliability", Direction::Positive,
            Aggregator::Product, Aggregator::Product};
}

QosParam make_availability() {
    return {"availability", "Availability", Direction::Positive,
            Aggregator::Product, Aggregator::Product};
}

// ---------------------------------------------------------------------------
// ParamSet

ParamSet::ParamSet(std::vector<QosParam> p) : params(std::move(p)) {
    std::set<std::string> seen;
    for (const auto& q : params) {
        if (q.id.empty()) throw ValidationError("parameter with empty id");
        if (!seen.insert(q.id).second)
            throw ValidationError("duplicate parameter id: " + q.id);
    }
}

std::size_t ParamSet::index_of(const std::string& id) const {
    for (std::size_t i = 0; i < params.size(); ++i)
        if (params[i].id == id) return i;
    throw ValidationError("unknown parameter id: " + id);
}

bool ParamSet::has(const std::string& id) const {
    for (const auto& p : params)
        if (p.id == id) return true;
    return false;
}

// ---------------------------------------------------------------------------
// Aggregation

double aggregator_identity(Aggregator a) {
    switch (a) {
        case Aggregator::Sum: return 0.0;
        case Aggregator::Product: return 1.0;
        case Aggregator::Min: return std::numeric_limits<double>::infinity();
        case Aggregator::Max: return 0.0;
    }
    return 0.0;
}

double aggregate(Aggregator a, double x, double y) {
    switch (a) {
        case Aggregator::Sum: return x + y;
        case Aggregator::Product: return x * y;
        case Aggregator::Min: return std::min(x, y);
        case Aggregator::Max: return std::max(x, y);
    }
    return 0.0;
}

QosTuple identity_tuple(const ParamSet& ps) {
    QosTuple t(ps.size());
    for (std::size_t k = 0; k < ps.size(); ++k) {
        const double s = aggregator_identity(ps.at(k).seq_agg);
        const double p = aggregator_identity(ps.at(k).par_agg);
        if (s != p)
            throw ValidationError(
                "parameter '" + ps.at(k).id +
                "' has incompatible seq/par aggregator identities; "
                "pass-through nodes cannot be represented");
        t[k] = s;
    }
    return t;
}

static void check_arity(const ParamSet& ps, const QosTuple& t) {
    if (t.size() != ps.size())
        throw ValidationError("tuple arity does not match parameter set");
}

QosTuple compose_seq(const ParamSet& ps, const QosTuple& a, const QosTuple& b) {
    check_arity(ps, a);
    check_arity(ps, b);
    QosTuple r(ps.size());
    for (std::size_t k = 0; k < ps.size(); ++k)
        r[k] = aggregate(ps.at(k).seq_agg, a[k], b[k]);
    return r;
}

QosTuple compose_par(const ParamSet& ps, const QosTuple& a, const QosTuple& b) {
    check_arity(ps, a);
    check_arity(ps, b);
    QosTuple r(ps.size());
    for (std::size_t k = 0; k < ps.size(); ++k)
        r[k] = aggregate(ps.at(k).par_agg, a[k], b[k]);
    return r;
}

// ---------------------------------------------------------------------------
// Tuple comparisons

bool tuple_equal(const QosTuple& a, const QosTuple& b, double eps) {
    if (a.size() != b.size()) return false;
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (a[k] == b[k]) continue;  // covers matching infinities
        if (!(std::fabs(a[k] - b[k]) <= eps)) return false;
    }
    return true;
}

bool tuple_less(const QosTuple& a, const QosTuple& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

Dominance compare(const ParamSet& ps, const QosTuple& a, const QosTuple& b) {
    check_arity(ps, a);
    check_arity(ps, b);
    bool a_better = false;
    bool b_better = false;
    for (std::size_t k = 0; k < ps.size(); ++k) {
        if (a[k] == b[k]) continue;
        const bool a_wins = ps.at(k).direction == Direction::Positive
                                ? a[k] > b[k]
                                : a[k] < b[k];
        if (a_wins)
            a_better = true;
        else
            b_better = true;
    }
    if (a_better && b_better) return Dominance::Incomparable;
    if (a_better) return Dominance::Dominates;
    if (b_better) return Dominance::DominatedBy;
    return Dominance::Equal;
}

bool dominates(const ParamSet& ps, const QosTuple& a, const QosTuple& b) {
    return compare(ps, a, b) == Dominance::Dominates;
}

std::vector<std::size_t> non_dominated_indices(const ParamSet& ps,
                                               const std::vector<QosTuple>& tuples) {
    std::vector<std::size_t> order(tuples.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        if (tuples[x] != tuples[y]) return tuple_less(tuples[x], tuples[y]);
        return x < y;
    });

    std::vector<std::size_t> kept;
    kept.reserve(order.size());
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
        const std::size_t i = order[pos];
        if (pos > 0 && tuples[order[pos - 1]] == tuples[i]) continue;  // exact duplicate
        bool dominated = false;
        for (std::size_t j = 0; j < tuples.size() && !dominated; ++j) {
            if (j == i) continue;
            dominated = dominates(ps, tuples[j], tuples[i]);
        }
        if (!dominated) kept.push_back(i);
    }
    return kept;
}

std::vector<QosTuple> non_dominated(const ParamSet& ps, std::vector<QosTuple> tuples) {
    std::vector<QosTuple> out;
    for (std::size_t i : non_dominated_indices(ps, tuples)) out.push_back(tuples[i]);
    return out;
}

bool tuple_set_equal(std::vector<QosTuple> a, std::vector<QosTuple> b, double eps) {
    if (a.size() != b.size()) return false;
    std::sort(a.begin(), a.end(), tuple_less);
    std::sort(b.begin(), b.end(), tuple_less);
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!tuple_equal(a[i], b[i], eps)) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Utility

std::vector<double> utilities(const ParamSet& ps, const std::vector<QosTuple>& pool) {
    std::vector<double> out(pool.size(), 0.0);
    if (pool.empty()) return out;
    const std::size_t m = ps.size();
    for (std::size_t k = 0; k < m; ++k) {
        double lo = pool[0][k];
        double hi = pool[0][k];
        for (const auto& t : pool) {
            check_arity(ps, t);
            lo = std::min(lo, t[k]);
            hi = std::max(hi, t[k]);
        }
        const double span = hi - lo;
        for (std::size_t i = 0; i < pool.size(); ++i) {
            double nv;
            if (span == 0.0) {
                nv = 1.0;
            } else if (ps.at(k).direction == Direction::Negative) {
                nv = (hi - pool[i][k]) / span;
            } else {
                nv = (pool[i][k] - lo) / span;
            }
            out[i] += nv;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Constraints

bool satisfies(double value, Cmp cmp, double bound) {
    switch (cmp) {
        case Cmp::Lt: return value < bound;
        case Cmp::Le: return value <= bound;
        case Cmp::Gt: return value > bound;
        case Cmp::Ge: return value >= bound;
    }
    return false;
}

bool satisfies(const ParamSet& ps, const Constraint& c, const QosTuple& t) {
    return satisfies(t[ps.index_of(c.param_id)], c.cmp, c.bound);
}

bool satisfies_all(const ParamSet& ps, const std::vector<Constraint>& cs,
                   const QosTuple& t) {
    for (const auto& c : cs)
        if (!satisfies(ps, c, t)) return false;
    return true;
}

bool constraint_aligned(const ParamSet& ps, const Constraint& c) {
    const bool upper = c.cmp == Cmp::Lt || c.cmp == Cmp::Le;
    const Direction d = ps.at(ps.index_of(c.param_id)).direction;
    return upper ? d == Direction::Negative : d == Direction::Positive;
}

// ---------------------------------------------------------------------------
// Repository and query validation

void normalize_and_validate(Repository& repo) {
    // Re-run ParamSet construction checks (callers may have filled the
    // struct directly).
    repo.params = ParamSet(std::move(repo.params.params));

    std::set<std::string> ids;
    for (auto& s : repo.services) {
        if (s.id.empty()) throw ValidationError("service with empty id");
        if (!ids.insert(s.id).second)
            throw ValidationError("duplicate service id: " + s.id);
        sort_unique(s.inputs);
        sort_unique(s.outputs);
        if (s.inputs.empty())
            throw ValidationError("service " + s.id + " has no inputs");
        if (s.outputs.empty())
            throw ValidationError("service " + s.id + " has no outputs");
        if (s.tuples.empty())
            throw ValidationError("service " + s.id + " has no QoS tuples");
        for (const auto& t : s.tuples) {
            if (t.size() != repo.params.size())
                throw ValidationError("service " + s.id +
                                      " has a tuple of wrong arity");
            for (double v : t) {
                if (!std::isfinite(v) || v < 0.0)
                    throw ValidationError("service " + s.id +
                                          " has a non-finite or negative QoS value");
            }
        }
    }
    std::sort(repo.services.begin(), repo.services.end(),
              [](const Service& a, const Service& b) { return a.id < b.id; });
}

void normalize_and_validate(Query& q, const ParamSet& ps) {
    sort_unique(q.inputs);
    sort_unique(q.outputs);
    if (q.inputs.empty()) throw ValidationError("query has no inputs");
    if (q.outputs.empty()) throw ValidationError("query has no outputs");
    for (const auto& o : q.outputs)
        if (std::binary_search(q.inputs.begin(), q.inputs.end(), o))
            throw ValidationError("query output '" + o + "' is also an input");
    for (const auto* list : {&q.locals, &q.globals}) {
        for (const auto& c : *list) {
            if (!ps.has(c.param_id))
                throw ValidationError("constraint references unknown parameter: " +
                                      c.param_id);
            if (!std::isfinite(c.bound))
                throw ValidationError("constraint bound is not finite");
        }
    }
}

std::vector<Constraint> early_global_constraints(const Repository& repo,
                                                 const Query& query) {
    // Per-parameter maximum over the repository, for the Product <= 1 test.
    std::vector<double> maxima(repo.params.size(), 0.0);
    for (const auto& s : repo.services)
        for (const auto& t : s.tuples)
            for (std::size_t k = 0; k < t.size(); ++k)
                maxima[k] = std::max(maxima[k], t[k]);

    const auto shrinking = [&](Aggregator a, std::size_t k) {
        return a == Aggregator::Min ||
               (a == Aggregator::Product && maxima[k] <= 1.0);
    };
    const auto growing = [](Aggregator a) {
        return a == Aggregator::Sum || a == Aggregator::Max;
    };

    std::vector<Constraint> out;
    for (const auto& c : query.globals) {
        const std::size_t k = repo.params.index_of(c.param_id);
        const QosParam& p = repo.params.at(k);
        const bool upper = c.cmp == Cmp::Lt || c.cmp == Cmp::Le;
        const bool ok = upper
                            ? growing(p.seq_agg) && growing(p.par_agg)
                            : shrinking(p.seq_agg, k) && shrinking(p.par_agg, k);
        if (ok) out.push_back(c);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Solutions

QosTuple solution_qos(const ParamSet& ps, const SolutionGraph& s) {
    if (s.nodes.empty()) throw ValidationError("empty solution graph");
    std::map<int, QosTuple> stages;
    for (const auto& n : s.nodes) {
        check_arity(ps, n.tuple);
        auto [it, fresh] = stages.emplace(n.stage, n.tuple);
        if (!fresh) it->second = compose_par(ps, it->second, n.tuple);
    }
    QosTuple acc;
    bool first = true;
    for (const auto& [stage, t] : stages) {
        (void)stage;
        if (first) {
            acc = t;
            first = false;
        } else {
            acc = compose_seq(ps, acc, t);
        }
    }
    return acc;
}

std::vector<QosTuple> front_tuples(const FrontSet& f) {
    std::vector<QosTuple> out;
    out.reserve(f.entries.size());
    for (const auto& e : f.entries) out.push_back(e.tuple);
    return out;
}

}  // namespace qosc
