// preprocess.hpp - repository reduction: cluster services by identical
// input/output signatures, keep only each cluster's non-dominated tuples.
// The reduction preserves the reachable Pareto front: any composition over
// the raw repository is matched (or dominated) by one over the reduced
// repository built from the same clusters.

#pragma once

#include <map>

#include "qoscompose/model.hpp"

namespace qosc {

// Origin of one retained representative tuple.
struct TupleSource {
    std::string service_id;
    int tuple_index = 0;

    bool operator==(const TupleSource&) const = default;
    auto operator<=>(const TupleSource&) const = default;
};

struct ClusterInfo {
    std::string rep_id;                  // lexicographically smallest member id
    std::vector<std::string> members;    // sorted
};

struct ReductionStats {
    std::size_t services_before = 0;
    std::size_t services_after = 0;
    std::size_t tuples_before = 0;
    std::size_t tuples_after = 0;
};

struct ClusteredRepository {
    Repository repo;                     // one representative service per cluster
    std::vector<ClusterInfo> clusters;   // sorted by rep_id
    // rep id -> (per retained tuple index) -> originating offers, sorted.
    std::map<std::string, std::vector<std::vector<TupleSource>>> tuple_sources;
    ReductionStats stats;
};

ClusteredRepository preprocess(const Repository& repo);

// Wraps an already-reduced (or deliberately unreduced) repository in the
// clustered form: every service is its own singleton cluster.
ClusteredRepository as_clusters(const Repository& repo);

}  // namespace qosc
