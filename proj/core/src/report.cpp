// report.cpp - run report serialization.

#include "qoscompose/report.hpp"

#include <cmath>
#include <limits>
#include <utility>

#include "json.hpp"
#include "json_util.hpp"

namespace qosc {

using nlohmann::json;
using namespace jsonio;

namespace {

constexpr const char* kReportFormat = "qoscompose-report";
constexpr const char* kComparisonFormat = "qoscompose-comparison";

json solution_to_json(const SolutionGraph& sg) {
    json nodes = json::array();
    for (const SolutionNode& n : sg.nodes) {
        json o;
        o["id"] = n.id;
        o["tuple_index"] = n.tuple_index;
        o["qos"] = n.tuple;
        o["stage"] = n.stage;
        nodes.push_back(std::move(o));
    }
    json edges = json::array();
    for (const SolutionEdge& e : sg.edges) {
        json o;
        o["from"] = e.from;
        o["to"] = e.to;
        o["data"] = e.params;
        edges.push_back(std::move(o));
    }
    json out;
    out["nodes"] = std::move(nodes);
    out["edges"] = std::move(edges);
    return out;
}

SolutionGraph solution_from_json(const json& v, const std::string& what) {
    check_keys(v, {"nodes", "edges"}, what);
    SolutionGraph sg;
    for (const json& o : need(v, "nodes", what)) {
        check_keys(o, {"id", "tuple_index", "qos", "stage"}, what);
        SolutionNode n;
        n.id = need_string(o, "id", what);
        n.tuple_index = static_cast<int>(need_number(o, "tuple_index", what));
        n.tuple = need(o, "qos", what).get<QosTuple>();
        n.stage = static_cast<int>(need_number(o, "stage", what));
        sg.nodes.push_back(std::move(n));
    }
    for (const json& o : need(v, "edges", what)) {
        check_keys(o, {"from", "to", "data"}, what);
        SolutionEdge e;
        e.from = need_string(o, "from", what);
        e.to = need_string(o, "to", what);
        e.params = string_list(need(o, "data", what), what);
        sg.edges.push_back(std::move(e));
    }
    return sg;
}

}  // namespace

std::string serialize_report(const RunReport& r) {
    json doc;
    doc["format"] = kReportFormat;
    doc["version"] = kDocVersion;
    doc["algorithm"] = r.algorithm;
    doc["config"] = r.config;  // std::map keeps keys sorted
    if (r.has_seed) doc["seed"] = r.seed;
    doc["params"] = params_to_json(r.params);

    json front = json::array();
    for (const FrontEntry& fe : r.front.entries) {
        json o;
        o["tuple"] = fe.tuple;
        o["solution"] = solution_to_json(fe.solution);
        front.push_back(std::move(o));
    }
    doc["front"] = std::move(front);

    json red;
    red["services_before"] = r.reduction.services_before;
    red["services_after"] = r.reduction.services_after;
    red["tuples_before"] = r.reduction.tuples_before;
    red["tuples_after"] = r.reduction.tuples_after;
    doc["reduction"] = std::move(red);

    json sv;
    sv["lpg_nodes"] = r.solve.lpg_nodes;
    sv["lpg_edges"] = r.solve.lpg_edges;
    sv["levels"] = r.solve.levels;
    sv["max_level_width"] = r.solve.max_level_width;
    doc["solve_stats"] = std::move(sv);

    json removed = json::array();
    for (const RemovedTuple& rt : r.removed_offers) {
        json o;
        o["service"] = rt.service_id;
        o["tuple"] = rt.tuple;
        removed.push_back(std::move(o));
    }
    doc["removed_offers"] = std::move(removed);

    if (!r.timings_ms.empty()) doc["timings_ms"] = r.timings_ms;
    return doc.dump(2) + "\n";
}

RunReport parse_report(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("report document: ") + e.what());
    }
    const std::string what = "report document";
    check_keys(doc,
               {"format", "version", "algorithm", "config", "seed", "params",
                "front", "reduction", "solve_stats", "removed_offers",
                "timings_ms"},
               what);
    check_format(doc, kReportFormat, what);

    RunReport r;
    r.algorithm = need_string(doc, "algorithm", what);
    if (doc.contains("config"))
        r.config = doc["config"].get<std::map<std::string, double>>();
    if (doc.contains("seed")) {
        r.has_seed = true;
        r.seed = doc["seed"].get<std::uint64_t>();
    }
    r.params = params_from_json(need(doc, "params", what), what);

    for (const json& o : need(doc, "front", what)) {
        check_keys(o, {"tuple", "solution"}, what);
        FrontEntry fe;
        fe.tuple = need(o, "tuple", what).get<QosTuple>();
        fe.solution = solution_from_json(need(o, "solution", what), what);
        r.front.entries.push_back(std::move(fe));
    }

    if (doc.contains("reduction")) {
        const json& red = doc["reduction"];
        r.reduction.services_before =
            static_cast<std::size_t>(need_number(red, "services_before", what));
        r.reduction.services_after =
            static_cast<std::size_t>(need_number(red, "services_after", what));
        r.reduction.tuples_before =
            static_cast<std::size_t>(need_number(red, "tuples_before", what));
        r.reduction.tuples_after =
            static_cast<std::size_t>(need_number(red, "tuples_after", what));
    }
    if (doc.contains("solve_stats")) {
        const json& sv = doc["solve_stats"];
        r.solve.lpg_nodes =
            static_cast<std::size_t>(need_number(sv, "lpg_nodes", what));
        r.solve.lpg_edges =
            static_cast<std::size_t>(need_number(sv, "lpg_edges", what));
        r.solve.levels =
            static_cast<std::size_t>(need_number(sv, "levels", what));
        r.solve.max_level_width = static_cast<std::size_t>(
            need_number(sv, "max_level_width", what));
    }
    if (doc.contains("removed_offers")) {
        for (const json& o : doc["removed_offers"]) {
            check_keys(o, {"service", "tuple"}, what);
            RemovedTuple rt;
            rt.service_id = need_string(o, "service", what);
            rt.tuple = need(o, "tuple", what).get<QosTuple>();
            r.removed_offers.push_back(std::move(rt));
        }
    }
    if (doc.contains("timings_ms"))
        r.timings_ms = doc["timings_ms"].get<std::map<std::string, double>>();
    return r;
}

std::string serialize_comparison(const ComparisonReport& r) {
    json doc;
    doc["format"] = kComparisonFormat;
    doc["version"] = kDocVersion;
    doc["n1"] = r.n1;
    doc["n2"] = r.n2;
    doc["cr"] = r.cr;
    doc["cn1"] = r.cn1;
    doc["cn2"] = r.cn2;
    if (std::isinf(r.ad)) {
        doc["ad"] = "inf";
    } else {
        doc["ad"] = r.ad;
    }
    doc["speedup"] = r.speedup;
    return doc.dump(2) + "\n";
}

}  // namespace qosc
