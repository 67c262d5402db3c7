// lpg.hpp - internal machinery shared by the exact and beam solvers.
//
// Not installed. The sweep state lives here so both solvers expand nodes,
// merge fronts and decode solutions through the same code path.

#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "qoscompose/depgraph.hpp"
#include "qoscompose/optimal.hpp"

namespace qosc::lpg {

// One parallel composition of the node's members. `choice[k]` is the tuple
// index picked for members[k].
struct PTuple {
    QosTuple q;
    std::vector<int> choice;
};

// One entry of a node's cumulative front, with back-pointers for decoding.
struct CpEntry {
    QosTuple q;
    int pprime_idx = -1;  // which PTuple of this node
    int succ = -1;        // successor composition-graph node (-1 at End)
    int succ_cp = -1;     // front index inside the successor
};

struct Node {
    std::vector<int> members;  // sorted dependency-node ids, one layer
    int level = 0;
    std::vector<PTuple> pprime;
    std::vector<CpEntry> cp;
    std::vector<int> preds;    // predecessor combinations, creation order
    bool disregarded = false;  // every parallel composition was filtered out
};

class Sweep {
  public:
    Sweep(const DepGraph& g, const SolveLimits& limits);

    // Creates the End node and returns its id.
    int init();

    // Enumerates predecessor combinations of `id`, creating or merging
    // composition-graph nodes and extending their fronts. Newly created
    // usable nodes are appended to `created` in creation order.
    void expand(int id, std::vector<int>* created);

    // Final front at the Start node: every global constraint applied, then
    // decoded into solution graphs. Throws NoFeasibleSolutionError when
    // nothing survives.
    FrontSet finish();

    Node& node(int id) { return nodes_[id]; }
    const Node& node(int id) const { return nodes_[id]; }
    std::size_t size() const { return nodes_.size(); }
    int start_node() const;
    const SolveStats& stats() const { return stats_; }
    void record_level_width(std::size_t width);

  private:
    int get_or_create(const std::vector<int>& members, int level);
    void build_pprime(Node& n);
    void extend_front(int pred_id, int succ_id);
    SolutionGraph decode(const CpEntry& final_entry) const;

    const DepGraph& g_;
    SolveLimits limits_;
    std::vector<Constraint> early_;
    std::vector<Node> nodes_;
    std::map<std::vector<int>, int> index_;
    SolveStats stats_;
};

}  // namespace qosc::lpg
