// metrics.cpp - commonality, distance, and speed-up metrics.

#include "qoscompose/metrics.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "qoscompose/log.hpp"

namespace qosc {

namespace {

// Collapses tuples that are equal within tolerance, keeping first wins.
std::vector<QosTuple> dedupe(const std::vector<QosTuple>& ts) {
    std::vector<QosTuple> out;
    for (const QosTuple& t : ts) {
        const bool seen =
            std::any_of(out.begin(), out.end(), [&](const QosTuple& u) {
                return tuple_equal(t, u);
            });
        if (!seen) out.push_back(t);
    }
    return out;
}

bool contains(const std::vector<QosTuple>& set, const QosTuple& t) {
    return std::any_of(set.begin(), set.end(), [&](const QosTuple& u) {
        return tuple_equal(t, u);
    });
}

}  // namespace

double commonality_ratio(const ParamSet& ps, const std::vector<QosTuple>& t1,
                         const std::vector<QosTuple>& t2) {
    (void)ps;
    const std::vector<QosTuple> a = dedupe(t1);
    const std::vector<QosTuple> b = dedupe(t2);
    std::size_t common = 0;
    for (const QosTuple& t : a)
        if (contains(b, t)) ++common;
    const std::size_t unioned = a.size() + b.size() - common;
    if (unioned == 0) return 1.0;
    return static_cast<double>(common) / static_cast<double>(unioned);
}

std::pair<double, double> commonality_nd_ratio(
    const ParamSet& ps, const std::vector<QosTuple>& t1,
    const std::vector<QosTuple>& t2) {
    std::vector<QosTuple> pool = dedupe(t1);
    for (const QosTuple& t : t2)
        if (!contains(pool, t)) pool.push_back(t);
    if (pool.empty()) return {1.0, 1.0};

    const std::vector<QosTuple> t3 = non_dominated(ps, pool);
    std::size_t in1 = 0;
    std::size_t in2 = 0;
    for (const QosTuple& t : t3) {
        if (contains(t1, t)) ++in1;
        if (contains(t2, t)) ++in2;
    }
    const double denom = static_cast<double>(t3.size());
    return {static_cast<double>(in1) / denom,
            static_cast<double>(in2) / denom};
}

double average_distance_ratio(const ParamSet& ps,
                              const std::vector<QosTuple>& t1,
                              const std::vector<QosTuple>& t2) {
    if (t1.empty() || t2.empty())
        throw ValidationError(
            "average distance ratio needs two non-empty tuple sets");

    std::vector<QosTuple> pool = t1;
    pool.insert(pool.end(), t2.begin(), t2.end());
    const std::vector<double> util = utilities(ps, pool);

    const double sum1 =
        std::accumulate(util.begin(),
                        util.begin() + static_cast<std::ptrdiff_t>(t1.size()),
                        0.0);
    const double sum2 =
        std::accumulate(util.begin() + static_cast<std::ptrdiff_t>(t1.size()),
                        util.end(), 0.0);
    const double mean1 = sum1 / static_cast<double>(t1.size());
    const double mean2 = sum2 / static_cast<double>(t2.size());
    if (mean2 == 0.0) {
        log::warn(
            "average distance ratio denominator is zero; reporting infinity");
        return std::numeric_limits<double>::infinity();
    }
    return mean1 / mean2;
}

double speedup(double time1, double time2) {
    if (!(time1 > 0.0))
        throw ValidationError("speedup needs a positive first time");
    if (time2 < 0.0)
        throw ValidationError("speedup needs a non-negative second time");
    return time2 / time1;
}

ComparisonReport compare(const ParamSet& ps, const std::vector<QosTuple>& t1,
                         const std::vector<QosTuple>& t2, double time1,
                         double time2) {
    ComparisonReport r;
    r.n1 = t1.size();
    r.n2 = t2.size();
    r.cr = commonality_ratio(ps, t1, t2);
    const auto cn = commonality_nd_ratio(ps, t1, t2);
    r.cn1 = cn.first;
    r.cn2 = cn.second;
    r.ad = average_distance_ratio(ps, t1, t2);
    if (time1 > 0.0 && time2 > 0.0) r.speedup = speedup(time1, time2);
    return r;
}

}  // namespace qosc
