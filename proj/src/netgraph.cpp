#include "absnet/netgraph.hpp"

#include <cmath>
#include <numeric>

namespace absnet {

std::string to_string(NodeKind k) {
  switch (k) {
    case NodeKind::Source: return "source";
    case NodeKind::Destination: return "destination";
    case NodeKind::Relay: return "relay";
  }
  return "?";
}

}  // namespace absnet

namespace absnet::netgraph {

namespace {
void require(bool ok, const std::string& msg) {
  if (!ok) throw ValidationError(msg);
}
}  // namespace

void GraphParams::validate() const {
  require(bandwidth_hz > 0, "graph: bandwidth must be > 0");
  require(interference_radius_m > 0, "graph: interference radius must be > 0");
  require(zeta >= 0, "graph: zeta must be >= 0");
  require(kappa > 0, "graph: kappa must be > 0");
  require(y0 > 0, "graph: y0 must be > 0");
  require(sir_cap > 0, "graph: SIR cap must be > 0");
  require(capacity_floor_rel >= 0, "graph: capacity floor must be >= 0");
}

void NetworkState::validate() const {
  channel.validate();
  graph.validate();
  require(positions.size() == kinds.size(),
          "state: positions and kinds must have equal length");
  require(size() >= 2, "state: at least two flow nodes are required");
  require(range_threshold_m.empty() ||
              range_threshold_m.size() == positions.size(),
          "state: range thresholds must be empty or one per node");
  for (double r : range_threshold_m)
    require(r > 0, "state: range thresholds must be > 0");
  bool has_source = false, has_destination = false;
  for (NodeKind k : kinds) {
    has_source |= k == NodeKind::Source;
    has_destination |= k == NodeKind::Destination;
  }
  require(has_source, "state: a source node is required");
  require(has_destination, "state: a destination node is required");
  for (int i = 0; i < size(); ++i)
    for (int j = i + 1; j < size(); ++j)
      require((positions[i] - positions[j]).norm() > 0,
              "state: nodes " + std::to_string(i) + " and " +
                  std::to_string(j) + " are coincident");
}

double smoothed_step(double y, double zeta, double kappa, double y0) {
  require(y >= 0, "smoothed_step: y must be >= 0");
  require(y0 > 0 && kappa > 0 && zeta >= 0,
          "smoothed_step: require y0 > 0, kappa > 0, zeta >= 0");
  const double t = -kappa * y - std::log(y0);
  // Evaluate the logistic stably on both tails.
  if (t >= 0) {
    const double e = std::exp(-t);
    return zeta / (1.0 + e);
  }
  const double e = std::exp(t);
  return zeta * e / (1.0 + e);
}

namespace {

double node_gain(const NetworkState& s, const Vec3& from, bool from_aerial,
                 int to) {
  return channel::channel_gain(from, from_aerial, s.positions[to],
                               is_aerial(s.kinds[to]), s.channel);
}

}  // namespace

double sir(int i, int j, const NetworkState& s) {
  const int n = s.size();
  require(i >= 0 && i < n && j >= 0 && j < n && i != j,
          "sir: node indices must be distinct and in range");
  const double signal = channel::channel_gain(
      s.positions[i], is_aerial(s.kinds[i]), s.positions[j],
      is_aerial(s.kinds[j]), s.channel);
  double interference = 0.0;
  for (const Vec3& p : s.interferers)
    interference += node_gain(s, p, false, j);
  for (int k = 0; k < n; ++k) {
    if (k == i || k == j) continue;
    const double d_jk = (s.positions[j] - s.positions[k]).norm();
    interference += smoothed_step(d_jk / s.graph.interference_radius_m,
                                  s.graph.zeta, s.graph.kappa, s.graph.y0);
  }
  if (interference <= 0.0) return s.graph.sir_cap;
  return std::min(signal / interference, s.graph.sir_cap);
}

double link_capacity(int i, int j, const NetworkState& s) {
  const int n = s.size();
  require(i >= 0 && i < n && j >= 0 && j < n,
          "link_capacity: node indices out of range");
  if (i == j) return 0.0;
  if (s.graph.forbid_terminal_links && is_terminal(s.kinds[i]) &&
      is_terminal(s.kinds[j]))
    return 0.0;
  if (!s.range_threshold_m.empty()) {
    const double d = (s.positions[i] - s.positions[j]).norm();
    // Both endpoints must be in range for the bidirectional link to exist.
    if (d > std::min(s.range_threshold_m[i], s.range_threshold_m[j]))
      return 0.0;
  }
  const double forward = std::log1p(sir(i, j, s));
  const double backward = std::log1p(sir(j, i, s));
  if (forward <= 0.0 || backward <= 0.0) return 0.0;
  const double capacity =
      s.graph.bandwidth_hz / (1.0 / forward + 1.0 / backward);
  if (capacity < s.graph.capacity_floor_rel * s.graph.bandwidth_hz) return 0.0;
  return capacity;
}

int CapacityGraph::edge_count() const {
  int m = 0;
  for (int i = 0; i < size(); ++i)
    for (int j = i + 1; j < size(); ++j)
      if (adjacency(i, j) > 0) ++m;
  return m;
}

bool CapacityGraph::connected() const {
  const int n = size();
  if (n == 0) return false;
  std::vector<int> stack{0};
  std::vector<bool> seen(n, false);
  seen[0] = true;
  int reached = 1;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (int v = 0; v < n; ++v) {
      if (!seen[v] && adjacency(u, v) > 0) {
        seen[v] = true;
        ++reached;
        stack.push_back(v);
      }
    }
  }
  return reached == n;
}

CapacityGraph make_graph(const Eigen::MatrixXd& adjacency) {
  require(adjacency.rows() == adjacency.cols(),
          "graph: adjacency must be square");
  require(adjacency.rows() >= 2, "graph: at least two nodes are required");
  for (int i = 0; i < adjacency.rows(); ++i) {
    require(adjacency(i, i) == 0.0, "graph: self-capacities must be zero");
    for (int j = 0; j < adjacency.cols(); ++j) {
      require(adjacency(i, j) >= 0.0, "graph: capacities must be >= 0");
      require(adjacency(i, j) == adjacency(j, i),
              "graph: adjacency must be symmetric");
    }
  }
  CapacityGraph g;
  g.adjacency = adjacency;
  g.degrees = adjacency.rowwise().sum();
  return g;
}

CapacityGraph build_capacity_graph(const NetworkState& s) {
  s.validate();
  const int n = s.size();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) a(i, j) = a(j, i) = link_capacity(i, j, s);
  return make_graph(a);
}

WeightMatrix WeightMatrix::uniform(int n) {
  WeightMatrix w;
  w.w = Eigen::VectorXd::Ones(n);
  return w;
}

WeightMatrix WeightMatrix::terminal_emphasis(
    const std::vector<NodeKind>& kinds, double terminal_w, double relay_w) {
  WeightMatrix w;
  w.w.resize(static_cast<int>(kinds.size()));
  for (int i = 0; i < w.w.size(); ++i)
    w.w[i] = is_terminal(kinds[static_cast<size_t>(i)]) ? terminal_w : relay_w;
  w.validate(static_cast<int>(kinds.size()));
  return w;
}

void WeightMatrix::validate(int n) const {
  require(w.size() == n, "weights: expected one weight per node");
  for (int i = 0; i < w.size(); ++i)
    require(w[i] > 0, "weights: weight of node " + std::to_string(i) +
                          " must be > 0");
}

LaplacianSet laplacians(const CapacityGraph& g, const WeightMatrix& w) {
  const int n = g.size();
  w.validate(n);
  for (int i = 0; i < n; ++i)
    if (g.degrees[i] <= 0.0)
      throw ValidationError("laplacians: node " + std::to_string(i) +
                            " is isolated (zero degree)");
  LaplacianSet out;
  out.combinatorial = Eigen::MatrixXd(g.degrees.asDiagonal()) - g.adjacency;
  const Eigen::VectorXd d_isqrt = g.degrees.cwiseSqrt().cwiseInverse();
  const Eigen::VectorXd w_isqrt = w.w.cwiseSqrt().cwiseInverse();
  out.normalized =
      d_isqrt.asDiagonal() * out.combinatorial * d_isqrt.asDiagonal();
  out.weighted_normalized =
      w_isqrt.asDiagonal() * out.normalized * w_isqrt.asDiagonal();
  out.weighted =
      w_isqrt.asDiagonal() * out.combinatorial * w_isqrt.asDiagonal();
  out.null_combinatorial = Eigen::VectorXd::Ones(n);
  out.null_normalized = g.degrees.cwiseSqrt();
  out.null_weighted = w.w.cwiseSqrt();
  out.null_weighted_normalized =
      out.null_weighted.cwiseProduct(out.null_normalized);
  return out;
}

}  // namespace absnet::netgraph
