#pragma once

#include "absnet/channel.hpp"
#include "absnet/common.hpp"

namespace absnet::netgraph {

/// Knobs of the interference-limited capacity graph.
struct GraphParams {
  double bandwidth_hz = 1.0;
  double interference_radius_m = 5.0;  ///< collision-penalty length scale
  double zeta = 1.0;                   ///< collision-penalty amplitude
  double kappa = 10.0;                 ///< collision-penalty steepness
  double y0 = 1e-6;                    ///< collision-penalty offset (> 0)
  double sir_cap = 1e12;               ///< keeps capacities finite
  double capacity_floor_rel = 1e-12;   ///< entries below floor*B become 0
  bool forbid_terminal_links = false;  ///< drop direct ground-ground edges

  void validate() const;
};

/// Immutable snapshot of every node position plus the channel/graph
/// parameters needed to evaluate link capacities.
struct NetworkState {
  std::vector<Vec3> positions;        ///< flow nodes (terminals + relays)
  std::vector<NodeKind> kinds;        ///< parallel to positions
  std::vector<Vec3> interferers;      ///< external interference sources
  std::vector<double> range_threshold_m;  ///< per node; empty = unbounded
  channel::Params channel;
  GraphParams graph;

  int size() const { return static_cast<int>(positions.size()); }
  void validate() const;
};

/// Smoothed unit-step penalty: zeta * exp(-kappa*y - ln y0) /
/// (1 + exp(-kappa*y - ln y0)); ~zeta below the safety separation and ~0 far
/// beyond it; strictly decreasing in y.
double smoothed_step(double y, double zeta, double kappa, double y0);

/// Signal-to-interference ratio of the directed link i -> j: the i->j gain
/// over external-interferer gains at j plus collision penalties from every
/// other flow node near j.  Capped at graph.sir_cap.
double sir(int i, int j, const NetworkState& s);

/// Symmetric bidirectional link capacity
///   B / (1/ln(1 + sir(i,j)) + 1/ln(1 + sir(j,i))),
/// gated by the per-node range thresholds and floored to exact zero below
/// capacity_floor_rel * B.
double link_capacity(int i, int j, const NetworkState& s);

/// Dense symmetric capacity graph with per-node degrees (row sums).
struct CapacityGraph {
  Eigen::MatrixXd adjacency;
  Eigen::VectorXd degrees;

  int size() const { return static_cast<int>(adjacency.rows()); }
  int edge_count() const;
  bool connected() const;
};

CapacityGraph build_capacity_graph(const NetworkState& s);
CapacityGraph make_graph(const Eigen::MatrixXd& adjacency);

/// Strictly positive per-node weights used by the weighted spectral metrics.
struct WeightMatrix {
  Eigen::VectorXd w;

  static WeightMatrix uniform(int n);
  /// Emphasis weights: terminal_w on sources/destinations, relay_w on relays.
  static WeightMatrix terminal_emphasis(const std::vector<NodeKind>& kinds,
                                        double terminal_w, double relay_w);
  void validate(int n) const;
};

/// The four Laplacian variants derived from one capacity graph, each paired
/// with its exact null-space direction.
struct LaplacianSet {
  Eigen::MatrixXd combinatorial;        ///< L = D - A
  Eigen::MatrixXd normalized;           ///< D^-1/2 L D^-1/2
  Eigen::MatrixXd weighted_normalized;  ///< W^-1/2 (D^-1/2 L D^-1/2) W^-1/2
  Eigen::MatrixXd weighted;             ///< W^-1/2 L W^-1/2
  Eigen::VectorXd null_combinatorial;   ///< 1
  Eigen::VectorXd null_normalized;      ///< D^1/2 1
  Eigen::VectorXd null_weighted_normalized;  ///< W^1/2 D^1/2 1
  Eigen::VectorXd null_weighted;        ///< W^1/2 1
};

/// Builds every Laplacian variant.  Throws ValidationError naming the node
/// when an isolated node makes the degree-normalized forms undefined.
LaplacianSet laplacians(const CapacityGraph& g, const WeightMatrix& w);

}  // namespace absnet::netgraph
