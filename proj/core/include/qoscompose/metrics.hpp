// Comparison statistics between two solution fronts.

#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "qoscompose/model.hpp"

namespace qosc {

/// Aggregate comparison between two tuple sets T1 and T2.
///
/// `speedup` is time2/time1 and is 0 when no timings were supplied.
struct ComparisonReport {
    std::size_t n1 = 0;
    std::size_t n2 = 0;
    double cr = 0.0;
    double cn1 = 0.0;
    double cn2 = 0.0;
    double ad = 0.0;
    double speedup = 0.0;
};

/// |T1 ∩ T2| / |T1 ∪ T2| with tolerance-based tuple equality. Two empty
/// sets are equal, so the ratio is 1. Symmetric.
double commonality_ratio(const ParamSet& ps, const std::vector<QosTuple>& t1,
                         const std::vector<QosTuple>& t2);

/// Let T3 be the non-dominated subset of T1 ∪ T2. Returns
/// (|T1 ∩ T3| / |T3|, |T2 ∩ T3| / |T3|); (1, 1) when both sets are empty.
std::pair<double, double> commonality_nd_ratio(const ParamSet& ps,
                                               const std::vector<QosTuple>& t1,
                                               const std::vector<QosTuple>& t2);

/// Mean utility of T1 over mean utility of T2, both computed against the
/// shared normalization pool T1 ∪ T2. Greater than 1 means T1 is better.
/// A zero denominator yields +infinity and a warning on the log stream.
double average_distance_ratio(const ParamSet& ps,
                              const std::vector<QosTuple>& t1,
                              const std::vector<QosTuple>& t2);

/// time2 / time1. Greater than 1 means the first algorithm is faster.
/// Throws ValidationError when time1 is not positive or time2 is negative.
double speedup(double time1, double time2);

/// Computes every metric at once. Timings are optional; when either is
/// absent (non-positive) the speedup field stays 0.
ComparisonReport compare(const ParamSet& ps, const std::vector<QosTuple>& t1,
                         const std::vector<QosTuple>& t2, double time1 = 0.0,
                         double time2 = 0.0);

}  // namespace qosc
