#include "qoscompose/preprocess.hpp"

#include <algorithm>
#include <utility>

namespace qosc {

ClusteredRepository preprocess(const Repository& repo) {
    ClusteredRepository out;
    out.repo.params = repo.params;
    out.repo.provenance_json = repo.provenance_json;
    out.stats.services_before = repo.services.size();

    // Group by exact (inputs, outputs) signature. Repository services are
    // sorted by id, so each group's member list is sorted and its first
    // member is the lexicographically smallest id.
    using Signature = std::pair<std::vector<std::string>, std::vector<std::string>>;
    std::map<Signature, std::vector<const Service*>> groups;
    for (const auto& s : repo.services) {
        out.stats.tuples_before += s.tuples.size();
        groups[{s.inputs, s.outputs}].push_back(&s);
    }

    for (const auto& [sig, members] : groups) {
        (void)sig;
        ClusterInfo info;
        info.rep_id = members.front()->id;
        std::vector<QosTuple> pooled;
        std::vector<TupleSource> origin;
        for (const Service* m : members) {
            info.members.push_back(m->id);
            for (std::size_t ti = 0; ti < m->tuples.size(); ++ti) {
                pooled.push_back(m->tuples[ti]);
                origin.push_back({m->id, static_cast<int>(ti)});
            }
        }

        const auto kept = non_dominated_indices(repo.params, pooled);

        Service rep;
        rep.id = info.rep_id;
        rep.inputs = members.front()->inputs;
        rep.outputs = members.front()->outputs;
        std::vector<std::vector<TupleSource>> sources;
        for (std::size_t idx : kept) {
            rep.tuples.push_back(pooled[idx]);
            // All offers exactly equal to the retained tuple count as origins.
            std::vector<TupleSource> src;
            for (std::size_t j = 0; j < pooled.size(); ++j)
                if (pooled[j] == pooled[idx]) src.push_back(origin[j]);
            std::sort(src.begin(), src.end());
            sources.push_back(std::move(src));
        }
        out.stats.tuples_after += rep.tuples.size();
        out.repo.services.push_back(std::move(rep));
        out.tuple_sources[info.rep_id] = std::move(sources);
        out.clusters.push_back(std::move(info));
    }

    std::sort(out.repo.services.begin(), out.repo.services.end(),
              [](const Service& a, const Service& b) { return a.id < b.id; });
    std::sort(out.clusters.begin(), out.clusters.end(),
              [](const ClusterInfo& a, const ClusterInfo& b) {
                  return a.rep_id < b.rep_id;
              });
    out.stats.services_after = out.repo.services.size();
    return out;
}

ClusteredRepository as_clusters(const Repository& repo) {
    ClusteredRepository out;
    out.repo = repo;
    out.stats.services_before = out.stats.services_after = repo.services.size();
    for (const auto& s : repo.services) {
        out.stats.tuples_before += s.tuples.size();
        out.clusters.push_back({s.id, {s.id}});
        std::vector<std::vector<TupleSource>> sources;
        for (std::size_t ti = 0; ti < s.tuples.size(); ++ti)
            sources.push_back({{s.id, static_cast<int>(ti)}});
        out.tuple_sources[s.id] = std::move(sources);
    }
    out.stats.tuples_after = out.stats.tuples_before;
    return out;
}

}  // namespace qosc
