// depgraph.hpp - dependency graph for a query over a clustered repository.
//
// Construction pipeline (build_dependency_graph runs all four stages):
//   1. build_activation: forward fixpoint closure from the query inputs;
//      per-service tuples are filtered by local constraints and by global
//      constraints a single offer can already doom (see early filtering
//      notes in depgraph.cpp). Services with no surviving tuple get no node.
//   2. prune_backward: keep only nodes from which the End node is reachable.
//   3. break_cycles: deterministic removal of back edges that close cycles,
//      ordered by (activation round, node index). Activation-round ordering
//      guarantees every input keeps a forward provider edge, so no node is
//      orphaned.
//   4. layerize: layer(v) = 1 + max layer of predecessors, Start at layer 0;
//      pass-through dummy nodes are inserted so each edge spans exactly one
//      layer. Dummies carry the identity tuple and forward their edge's
//      parameter names unchanged.

#pragma once

#include "qoscompose/model.hpp"
#include "qoscompose/preprocess.hpp"

namespace qosc {

enum class NodeKind { Start, End, Service, Dummy };

struct DepNode {
    int id = -1;
    NodeKind kind = NodeKind::Service;
    std::string name;                       // service id, "start", "end", or dummy name
    std::vector<std::string> inputs;        // names consumed (End: query outputs)
    std::vector<std::string> outputs;       // names produced (Start: query inputs)
    std::vector<QosTuple> tuples;           // constraint-filtered offers; identity for non-service nodes
    std::vector<std::vector<TupleSource>> tuple_sources;  // parallel to tuples (service nodes)
    int round = 0;                          // forward-closure activation round
    int layer = -1;                         // assigned by layerize
};

struct DepEdge {
    int from = -1;
    int to = -1;
    std::vector<std::string> params;        // carried parameter names, sorted
};

struct RemovedTuple {
    std::string service_id;
    QosTuple tuple;
};

struct DroppedEdge {
    std::string from;
    std::string to;
};

struct DepGraph {
    ParamSet params;
    Query query;
    std::vector<DepNode> nodes;             // node id == index
    std::vector<DepEdge> edges;
    int start_id = -1;
    int end_id = -1;
    int max_layer = -1;                     // layer of End after layerize

    std::vector<RemovedTuple> removed_tuples;   // filtered during activation
    std::vector<DroppedEdge> dropped_edges;     // removed by cycle breaking
    std::vector<Constraint> early_globals;      // globals applied during activation

    // Adjacency: edge indices grouped by endpoint.
    std::vector<std::vector<int>> out_edges;
    std::vector<std::vector<int>> in_edges;

    // Provider node ids for one input of a node, sorted ascending.
    std::vector<int> providers(int node, const std::string& input) const;
};

// Follows a pass-through chain back to the real node it forwards; identity
// on non-dummy nodes.
int dummy_root(const DepGraph& g, int node_id);

DepGraph build_activation(const ClusteredRepository& crepo, const Query& query);
void prune_backward(DepGraph& g);
void break_cycles(DepGraph& g);
void layerize(DepGraph& g);

DepGraph build_dependency_graph(const ClusteredRepository& crepo, const Query& query);

}  // namespace qosc
