#pragma once

#include "absnet/spectral.hpp"

#include <vector>

namespace absnet::flow {

/// Maximum-flow solution on the directed expansion of a capacity graph
/// (each undirected edge becomes two antiparallel arcs of equal capacity).
struct FlowResult {
  double value = 0.0;
  Eigen::MatrixXd arc_flow;      ///< net nonnegative flow per directed arc
  std::vector<int> min_cut;      ///< source side of a minimum cut
  double min_cut_capacity = 0.0;
};

/// Shortest-augmenting-path maximum flow (breadth-first residual search with
/// lowest-index tie-breaking; residual capacities below 1e-9 are treated as
/// saturated).  The returned minimum cut certifies optimality.
FlowResult max_flow(const netgraph::CapacityGraph& g, int source,
                    int destination);

struct MulticastResult {
  double value = 0.0;                    ///< min over destinations
  std::vector<double> per_destination;
};

/// Largest rate deliverable from one source to every destination at once:
/// the minimum of the per-destination maximum flows.
MulticastResult multicast_flow(const netgraph::CapacityGraph& g, int source,
                               const std::vector<int>& destinations);

struct ConcurrentFlowResult {
  double ratio = 0.0;  ///< common fraction of every demand routed together
  std::vector<double> routed;              ///< per-commodity routed amount
  std::vector<Eigen::MatrixXd> arc_flow;   ///< per-commodity arc flows
  int phases = 0;
};

/// Maximum concurrent flow via multiplicative-weights shortest-path routing.
/// The returned solution is rescaled to strict feasibility, so `ratio` is a
/// certified lower bound within (1 - eps) of the optimum.
ConcurrentFlowResult max_concurrent_flow(
    const netgraph::CapacityGraph& g,
    const std::vector<spectral::CommoditySpec>& commodities,
    double eps = 0.01);

/// True when `r` is a feasible s-d flow on g (capacity and conservation
/// within 1e-9) whose value matches the net source outflow.
bool verify_flow(const netgraph::CapacityGraph& g, const FlowResult& r,
                 int source, int destination);

}  // namespace absnet::flow
