// Versioned JSON run reports, the interchange format between commands.

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qoscompose/depgraph.hpp"
#include "qoscompose/metrics.hpp"
#include "qoscompose/model.hpp"
#include "qoscompose/optimal.hpp"
#include "qoscompose/preprocess.hpp"

namespace qosc {

/// Everything one pipeline run produced. Serialization is canonical
/// (sorted keys, fronts in their canonical order), so reports from equal
/// runs are byte-identical; wall-clock timings are the one exception and
/// can be left empty for reproducible output.
struct RunReport {
    std::string algorithm;                 // optimal | beam | nsga | preprocess
    std::map<std::string, double> config;  // numeric knobs by name
    bool has_seed = false;
    std::uint64_t seed = 0;
    ParamSet params;
    FrontSet front;
    ReductionStats reduction;
    SolveStats solve;
    std::vector<RemovedTuple> removed_offers;  // offers cut by constraints
    std::map<std::string, double> timings_ms;  // empty when omitted
};

std::string serialize_report(const RunReport& r);
RunReport parse_report(const std::string& text);

/// Comparison results as a JSON document. Infinite AD is encoded as the
/// string "inf"; a speedup of 0 means no timings were available.
std::string serialize_comparison(const ComparisonReport& r);

}  // namespace qosc
