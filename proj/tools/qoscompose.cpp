// qoscompose.cpp - batch command line front end.
//
// Subcommands: preprocess, solve, compare, verify, bench, gen-qos.
// stdout carries exactly one report document; diagnostics go to stderr.
// Exit codes: 0 success, 1 internal error or verification mismatch,
// 2 bad input, 3 no feasible solution, 4 no solution structure at all,
// 5 resource cap hit, 6 oracle refusal.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qoscompose/beam.hpp"
#include "qoscompose/dataset.hpp"
#include "qoscompose/depgraph.hpp"
#include "qoscompose/log.hpp"
#include "qoscompose/metrics.hpp"
#include "qoscompose/model.hpp"
#include "qoscompose/nsga.hpp"
#include "qoscompose/optimal.hpp"
#include "qoscompose/oracle.hpp"
#include "qoscompose/preprocess.hpp"
#include "qoscompose/report.hpp"

namespace {

using namespace qosc;
using nlohmann::json;

class Timer {
  public:
    double ms() const {
        const auto now = std::chrono::steady_clock::now();
        return std::chrono::duration<double, std::milli>(now - start_).count();
    }
    double lap() {
        const double total = ms();
        const double delta = total - last_;
        last_ = total;
        return delta;
    }

  private:
    std::chrono::steady_clock::time_point start_ =
        std::chrono::steady_clock::now();
    double last_ = 0.0;
};

std::uint64_t pick_seed() {
    std::random_device rd;
    const std::uint64_t seed =
        (static_cast<std::uint64_t>(rd()) << 32) | rd();
    std::cerr << "qoscompose: selected seed " << seed << "\n";
    return seed;
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
    } else {
        write_text_file(out_path, text);
    }
}

// --- solve -------------------------------------------------------------------

struct SolveArgs {
    std::string repo_path;
    std::string query_path;
    std::string algo = "optimal";
    std::string out_path;
    bool no_preprocess = false;
    bool omit_timings = false;
    std::size_t beam_width = 100;
    std::size_t population = 100;
    std::size_t iterations = 10000;
    double crossover_prob = 0.85;
    double mutation_prob = 0.01;
    std::size_t workers = 1;
    std::optional<std::uint64_t> seed;
    std::size_t max_lpg_nodes = SolveLimits().max_lpg_nodes;
    std::size_t max_combos = SolveLimits().max_combos_per_node;
};

int cmd_solve(const SolveArgs& a) {
    Timer timer;
    RunReport report;
    report.algorithm = a.algo;

    const Repository repo = load_repository(a.repo_path);
    const Query query = load_query(a.query_path, repo.params);
    report.params = repo.params;
    report.timings_ms["load"] = timer.lap();

    const ClusteredRepository clustered =
        a.no_preprocess ? as_clusters(repo) : preprocess(repo);
    report.reduction = clustered.stats;
    report.timings_ms["preprocess"] = timer.lap();

    const DepGraph graph = build_dependency_graph(clustered, query);
    report.removed_offers = graph.removed_tuples;
    report.timings_ms["graph"] = timer.lap();

    SolveLimits limits;
    limits.max_lpg_nodes = a.max_lpg_nodes;
    limits.max_combos_per_node = a.max_combos;

    if (a.algo == "optimal") {
        report.front = solve_optimal(graph, limits, &report.solve);
    } else if (a.algo == "beam") {
        report.config["beam_width"] = static_cast<double>(a.beam_width);
        report.front =
            solve_beam(graph, BeamOptions{a.beam_width}, limits, &report.solve);
    } else {
        GaConfig cfg;
        cfg.population = a.population;
        cfg.iterations = a.iterations;
        cfg.crossover_prob = a.crossover_prob;
        cfg.mutation_prob = a.mutation_prob;
        cfg.workers = a.workers;
        cfg.seed = a.seed ? *a.seed : pick_seed();
        report.has_seed = true;
        report.seed = cfg.seed;
        report.config["population"] = static_cast<double>(cfg.population);
        report.config["iterations"] = static_cast<double>(cfg.iterations);
        report.config["crossover_prob"] = cfg.crossover_prob;
        report.config["mutation_prob"] = cfg.mutation_prob;
        // Worker count is an execution detail: results are identical for any
        // value, so it stays out of the report to keep reruns byte-stable.
        report.front = solve_nsga(graph, cfg);
        if (report.front.entries.empty())
            throw NoFeasibleSolutionError(
                "the evolutionary search found no feasible composition");
    }
    report.timings_ms["solve"] = timer.lap();
    report.timings_ms["total"] = timer.ms();
    if (a.omit_timings) report.timings_ms.clear();

    emit(serialize_report(report), a.out_path);
    return 0;
}

// --- preprocess --------------------------------------------------------------

int cmd_preprocess(const std::string& repo_path, const std::string& out_path,
                   bool omit_timings) {
    Timer timer;
    const Repository repo = load_repository(repo_path);
    const ClusteredRepository clustered = preprocess(repo);

    Repository out = clustered.repo;
    json prov = out.provenance_json.empty() ? json::object()
                                            : json::parse(out.provenance_json);
    json clusters = json::object();
    for (const ClusterInfo& c : clustered.clusters)
        clusters[c.rep_id] = c.members;
    prov["preprocess"] = {{"clusters", std::move(clusters)}};
    out.provenance_json = prov.dump();
    write_text_file(out_path, serialize_repository(out));

    RunReport report;
    report.algorithm = "preprocess";
    report.params = repo.params;
    report.reduction = clustered.stats;
    if (!omit_timings) report.timings_ms["total"] = timer.ms();
    std::cout << serialize_report(report);
    return 0;
}

// --- compare -------------------------------------------------------------------

int cmd_compare(const std::string& path_a, const std::string& path_b) {
    const RunReport ra = parse_report(read_text_file(path_a));
    const RunReport rb = parse_report(read_text_file(path_b));
    if (!(ra.params == rb.params))
        throw ValidationError("reports use different parameter sets");

    double t1 = 0.0;
    double t2 = 0.0;
    const auto ia = ra.timings_ms.find("solve");
    const auto ib = rb.timings_ms.find("solve");
    if (ia != ra.timings_ms.end() && ib != rb.timings_ms.end()) {
        t1 = ia->second;
        t2 = ib->second;
    }
    const ComparisonReport cmp =
        compare(ra.params, front_tuples(ra.front), front_tuples(rb.front), t1,
                t2);
    std::cout << serialize_comparison(cmp);
    return 0;
}

// --- verify --------------------------------------------------------------------

int cmd_verify(const std::string& repo_path, const std::string& query_path,
               const OracleLimits& limits) {
    const Repository repo = load_repository(repo_path);
    const Query query = load_query(query_path, repo.params);

    const FrontSet oracle = oracle_front(repo, query, limits);

    FrontSet pipeline;
    try {
        const DepGraph graph =
            build_dependency_graph(preprocess(repo), query);
        pipeline = solve_optimal(graph);
    } catch (const NoSolutionError&) {
    } catch (const NoFeasibleSolutionError&) {
    }

    const std::vector<QosTuple> to = front_tuples(oracle);
    const std::vector<QosTuple> tp = front_tuples(pipeline);
    const bool match = tuple_set_equal(to, tp);

    json doc;
    doc["format"] = "qoscompose-verify";
    doc["version"] = 1;
    doc["match"] = match;
    doc["oracle_n"] = to.size();
    doc["optimal_n"] = tp.size();
    if (!match) {
        doc["oracle_tuples"] = to;
        doc["optimal_tuples"] = tp;
    }
    std::cout << doc.dump(2) << "\n";
    return match ? 0 : 1;
}

// --- bench ---------------------------------------------------------------------

struct BenchArgs {
    std::string suite_path;
    std::string out_dir;
    std::uint64_t seed = 1;
    std::size_t nsga_iterations = 10000;
    std::size_t workers = 1;
    bool omit_timings = false;
};

json bench_comparison(const ParamSet& ps, const std::string& name_a,
                      const std::string& name_b,
                      const std::vector<QosTuple>& t1,
                      const std::vector<QosTuple>& t2, double time1,
                      double time2, bool omit_timings) {
    json row;
    row["pair"] = name_a + "-vs-" + name_b;
    if (t1.empty() || t2.empty()) {
        row["skipped"] = "empty front";
        return row;
    }
    const ComparisonReport c =
        compare(ps, t1, t2, omit_timings ? 0.0 : time1,
                omit_timings ? 0.0 : time2);
    row["n1"] = c.n1;
    row["n2"] = c.n2;
    row["cr"] = c.cr;
    row["cn1"] = c.cn1;
    row["cn2"] = c.cn2;
    if (std::isinf(c.ad)) {
        row["ad"] = "inf";
    } else {
        row["ad"] = c.ad;
    }
    if (!omit_timings) row["speedup"] = c.speedup;
    return row;
}

int cmd_bench(const BenchArgs& a) {
    namespace fs = std::filesystem;
    const std::string text = read_text_file(a.suite_path);
    json suite;
    try {
        suite = json::parse(text);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("suite document: ") + e.what());
    }
    if (!suite.is_object() || suite.value("format", "") != "qoscompose-suite")
        throw ValidationError("suite document: not a qoscompose-suite");
    const fs::path base = fs::path(a.suite_path).parent_path();
    fs::create_directories(a.out_dir);

    struct Entry {
        std::string name;
        std::string repo;
        std::string query;
    };
    std::vector<Entry> entries;
    for (const json& inst : suite.at("instances")) {
        entries.push_back({inst.at("name").get<std::string>(),
                           inst.at("repository").get<std::string>(),
                           inst.at("query").get<std::string>()});
    }
    std::sort(entries.begin(), entries.end(),
              [](const Entry& x, const Entry& y) { return x.name < y.name; });

    json written = json::array();
    std::uint64_t index = 0;
    for (const Entry& inst : entries) {
        const std::uint64_t inst_seed = a.seed + index++;
        const fs::path out_file = fs::path(a.out_dir) / (inst.name + ".json");
        if (fs::exists(out_file)) {
            log::info("bench: " + inst.name + " already done, skipping");
            written.push_back(out_file.string());
            continue;
        }

        const Repository repo =
            load_repository((base / inst.repo).string());
        const Query query =
            load_query((base / inst.query).string(), repo.params);
        const DepGraph graph =
            build_dependency_graph(preprocess(repo), query);

        json rows = json::array();
        std::map<std::string, std::pair<std::vector<QosTuple>, double>> fronts;

        for (const std::size_t width : {std::size_t{100}, std::size_t{300},
                                        std::size_t{500}}) {
            Timer t;
            FrontSet f;
            try {
                f = solve_beam(graph, BeamOptions{width});
            } catch (const NoFeasibleSolutionError&) {
            }
            const double ms = t.ms();
            json row;
            row["algorithm"] = "beam";
            row["width"] = width;
            row["n"] = f.entries.size();
            if (!a.omit_timings) row["time_ms"] = ms;
            rows.push_back(std::move(row));
            fronts["beam" + std::to_string(width)] = {front_tuples(f), ms};
        }
        {
            GaConfig cfg;
            cfg.iterations = a.nsga_iterations;
            cfg.seed = inst_seed;
            cfg.workers = a.workers;
            Timer t;
            const FrontSet f = solve_nsga(graph, cfg);
            const double ms = t.ms();
            json row;
            row["algorithm"] = "nsga";
            row["iterations"] = cfg.iterations;
            row["seed"] = cfg.seed;
            row["n"] = f.entries.size();
            if (!a.omit_timings) row["time_ms"] = ms;
            rows.push_back(std::move(row));
            fronts["nsga"] = {front_tuples(f), ms};
        }

        json comparisons = json::array();
        for (const char* beam_name : {"beam100", "beam300", "beam500"}) {
            const auto& [bt, btime] = fronts.at(beam_name);
            const auto& [nt, ntime] = fronts.at("nsga");
            comparisons.push_back(bench_comparison(repo.params, beam_name,
                                                   "nsga", bt, nt, btime,
                                                   ntime, a.omit_timings));
        }

        json doc;
        doc["format"] = "qoscompose-bench";
        doc["version"] = 1;
        doc["instance"] = inst.name;
        doc["rows"] = std::move(rows);
        doc["comparisons"] = std::move(comparisons);
        write_text_file(out_file.string(), doc.dump(2) + "\n");
        written.push_back(out_file.string());
    }

    json summary;
    summary["format"] = "qoscompose-bench-summary";
    summary["version"] = 1;
    summary["reports"] = std::move(written);
    std::cout << summary.dump(2) << "\n";
    return 0;
}

// --- gen-qos -------------------------------------------------------------------

int cmd_gen_qos(const std::string& repo_path, const std::string& out_path,
                std::optional<std::uint64_t> seed,
                const std::vector<std::string>& ranges) {
    const Repository repo = load_repository(repo_path);
    QosGenConfig cfg = default_qos_gen(seed ? *seed : pick_seed());

    for (const std::string& spec : ranges) {
        // id=lo:hi or id=lo:hi:int
        const auto eq = spec.find('=');
        if (eq == std::string::npos)
            throw ValidationError("range must look like id=lo:hi[:int], got " +
                                  spec);
        const std::string id = spec.substr(0, eq);
        std::string rest = spec.substr(eq + 1);
        QosGenRange range;
        const auto c1 = rest.find(':');
        if (c1 == std::string::npos)
            throw ValidationError("range must look like id=lo:hi[:int], got " +
                                  spec);
        const auto c2 = rest.find(':', c1 + 1);
        try {
            range.lo = std::stod(rest.substr(0, c1));
            range.hi = std::stod(rest.substr(
                c1 + 1,
                c2 == std::string::npos ? std::string::npos : c2 - c1 - 1));
        } catch (const std::exception&) {
            throw ValidationError("cannot parse range bounds in " + spec);
        }
        if (c2 != std::string::npos) {
            if (rest.substr(c2 + 1) != "int")
                throw ValidationError("range suffix must be :int, got " + spec);
            range.integer = true;
        }
        bool found = false;
        for (QosGenParam& gp : cfg.params) {
            if (gp.param.id == id) {
                gp.range = range;
                found = true;
            }
        }
        if (!found)
            throw ValidationError("range names unknown parameter: " + id);
    }

    emit(serialize_repository(gen_qos(repo, cfg)), out_path);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"QoS-aware service composition engine"};
    app.require_subcommand(1);

    SolveArgs solve_args;
    CLI::App* solve = app.add_subcommand(
        "solve", "Run the full pipeline and print the Pareto front report");
    solve->add_option("repository", solve_args.repo_path, "Repository document")
        ->required();
    solve->add_option("query", solve_args.query_path, "Query document")
        ->required();
    solve->add_option("--algo", solve_args.algo, "Algorithm")
        ->check(CLI::IsMember({"optimal", "beam", "nsga"}))
        ->capture_default_str();
    solve->add_option("--beam-width", solve_args.beam_width,
                      "Retained candidates per level (beam)")
        ->capture_default_str();
    solve->add_option("--pop", solve_args.population, "Population size (nsga)")
        ->capture_default_str();
    solve->add_option("--iters", solve_args.iterations, "Generations (nsga)")
        ->capture_default_str();
    solve->add_option("--pc", solve_args.crossover_prob,
                      "Crossover probability (nsga)")
        ->capture_default_str();
    solve->add_option("--pm", solve_args.mutation_prob,
                      "Mutation probability (nsga)")
        ->capture_default_str();
    solve->add_option("--workers", solve_args.workers,
                      "Fitness evaluation threads (nsga)")
        ->capture_default_str();
    solve->add_option("--seed", solve_args.seed,
                      "Random seed; selected and printed when omitted");
    solve->add_option("--max-nodes", solve_args.max_lpg_nodes,
                      "Composition graph node cap")
        ->capture_default_str();
    solve->add_option("--max-combos", solve_args.max_combos,
                      "Per-node combination cap")
        ->capture_default_str();
    solve->add_flag("--no-preprocess", solve_args.no_preprocess,
                    "Skip clustering and skyline reduction");
    solve->add_flag("--omit-timings", solve_args.omit_timings,
                    "Leave wall-clock timings out of the report");
    solve->add_option("--out", solve_args.out_path,
                      "Write the report here instead of stdout");

    std::string pre_repo;
    std::string pre_out;
    bool pre_omit = false;
    CLI::App* pre = app.add_subcommand(
        "preprocess", "Cluster services and reduce offers to skylines");
    pre->add_option("repository", pre_repo, "Repository document")->required();
    pre->add_option("--out", pre_out, "Clustered repository output path")
        ->required();
    pre->add_flag("--omit-timings", pre_omit,
                  "Leave wall-clock timings out of the report");

    std::string cmp_a;
    std::string cmp_b;
    CLI::App* cmp = app.add_subcommand(
        "compare", "Compare the fronts of two solve reports");
    cmp->add_option("report_a", cmp_a, "First report")->required();
    cmp->add_option("report_b", cmp_b, "Second report")->required();

    std::string ver_repo;
    std::string ver_query;
    OracleLimits ver_limits;
    CLI::App* ver = app.add_subcommand(
        "verify", "Check the exact solver against the brute-force oracle");
    ver->add_option("repository", ver_repo, "Repository document")->required();
    ver->add_option("query", ver_query, "Query document")->required();
    ver->add_option("--max-services", ver_limits.max_services,
                    "Oracle refusal threshold")
        ->capture_default_str();
    ver->add_option("--max-params", ver_limits.max_params,
                    "Oracle refusal threshold")
        ->capture_default_str();
    ver->add_option("--max-combos", ver_limits.max_combos,
                    "Oracle enumeration budget")
        ->capture_default_str();

    BenchArgs bench_args;
    CLI::App* bench = app.add_subcommand(
        "bench", "Run beam widths 100/300/500 and the evolutionary search "
                 "over a suite");
    bench->add_option("suite", bench_args.suite_path, "Suite document")
        ->required();
    bench->add_option("--out", bench_args.out_dir, "Report directory")
        ->required();
    bench->add_option("--seed", bench_args.seed, "Base random seed")
        ->capture_default_str();
    bench->add_option("--nsga-iters", bench_args.nsga_iterations,
                      "Generations per evolutionary run")
        ->capture_default_str();
    bench->add_option("--workers", bench_args.workers,
                      "Fitness evaluation threads")
        ->capture_default_str();
    bench->add_flag("--omit-timings", bench_args.omit_timings,
                    "Leave wall-clock timings out of the reports");

    std::string gen_repo;
    std::string gen_out;
    std::optional<std::uint64_t> gen_seed;
    std::vector<std::string> gen_ranges;
    CLI::App* gen = app.add_subcommand(
        "gen-qos", "Fill in missing QoS parameters deterministically");
    gen->add_option("repository", gen_repo, "Repository document")->required();
    gen->add_option("--out", gen_out,
                    "Write the repository here instead of stdout");
    gen->add_option("--seed", gen_seed,
                    "Random seed; selected and printed when omitted");
    gen->add_option("--range", gen_ranges,
                    "Override a generation range, id=lo:hi[:int]");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*solve) return cmd_solve(solve_args);
        if (*pre) return cmd_preprocess(pre_repo, pre_out, pre_omit);
        if (*cmp) return cmd_compare(cmp_a, cmp_b);
        if (*ver) return cmd_verify(ver_repo, ver_query, ver_limits);
        if (*bench) return cmd_bench(bench_args);
        if (*gen) return cmd_gen_qos(gen_repo, gen_out, gen_seed, gen_ranges);
    } catch (const NoFeasibleSolutionError& e) {
        std::cerr << "qoscompose: " << e.what() << "\n";
        return 3;
    } catch (const NoSolutionError& e) {
        std::cerr << "qoscompose: " << e.what() << "\n";
        return 4;
    } catch (const ResourceLimitError& e) {
        std::cerr << "qoscompose: " << e.what() << "\n";
        return 5;
    } catch (const OracleLimitError& e) {
        std::cerr << "qoscompose: " << e.what() << "\n";
        return 6;
    } catch (const ValidationError& e) {
        std::cerr << "qoscompose: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "qoscompose: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
