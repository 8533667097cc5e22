#include "absnet/flow.hpp"

#include <cmath>
#include <deque>
#include <limits>

namespace absnet::flow {

namespace {

constexpr double kResidualEps = 1e-9;

void require(bool ok, const std::string& msg) {
  if (!ok) throw ValidationError(msg);
}

void check_endpoint(const netgraph::CapacityGraph& g, int v,
                    const char* name) {
  require(v >= 0 && v < g.size(),
          std::string("flow: ") + name + " index out of range");
}

/// Breadth-first search for the shortest residual path; neighbors are
/// scanned in ascending index order so ties resolve deterministically.
bool shortest_residual_path(const Eigen::MatrixXd& residual, int s, int t,
                            std::vector<int>& parent) {
  const int n = static_cast<int>(residual.rows());
  parent.assign(n, -1);
  parent[s] = s;
  std::deque<int> queue{s};
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    for (int v = 0; v < n; ++v) {
      if (parent[v] == -1 && residual(u, v) > kResidualEps) {
        parent[v] = u;
        if (v == t) return true;
        queue.push_back(v);
      }
    }
  }
  return false;
}

}  // namespace

FlowResult max_flow(const netgraph::CapacityGraph& g, int source,
                    int destination) {
  check_endpoint(g, source, "source");
  check_endpoint(g, destination, "destination");
  require(source != destination, "flow: source equals destination");
  const int n = g.size();
  Eigen::MatrixXd residual = g.adjacency;
  std::vector<int> parent;
  while (shortest_residual_path(residual, source, destination, parent)) {
    double bottleneck = std::numeric_limits<double>::infinity();
    for (int v = destination; v != source; v = parent[v])
      bottleneck = std::min(bottleneck, residual(parent[v], v));
    for (int v = destination; v != source; v = parent[v]) {
      residual(parent[v], v) -= bottleneck;
      residual(v, parent[v]) += bottleneck;
    }
  }

  FlowResult out;
  // Net flow per arc, cancelled so antiparallel arcs never both carry flow.
  out.arc_flow = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double net = g.adjacency(i, j) - residual(i, j);
      if (net > 0) out.arc_flow(i, j) = net;
    }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double cancel = std::min(out.arc_flow(i, j), out.arc_flow(j, i));
      out.arc_flow(i, j) -= cancel;
      out.arc_flow(j, i) -= cancel;
    }
  out.value = out.arc_flow.row(source).sum() - out.arc_flow.col(source).sum();

  // The residual-reachable set certifies a minimum cut.
  std::vector<bool> reach(n, false);
  std::vector<int> stack{source};
  reach[source] = true;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (int v = 0; v < n; ++v)
      if (!reach[v] && residual(u, v) > kResidualEps) {
        reach[v] = true;
        stack.push_back(v);
      }
  }
  for (int i = 0; i < n; ++i)
    if (reach[i]) out.min_cut.push_back(i);
  for (int i : out.min_cut)
    for (int j = 0; j < n; ++j)
      if (!reach[j]) out.min_cut_capacity += g.adjacency(i, j);
  return out;
}

MulticastResult multicast_flow(const netgraph::CapacityGraph& g, int source,
                               const std::vector<int>& destinations) {
  require(!destinations.empty(), "flow: at least one destination is required");
  MulticastResult out;
  out.value = std::numeric_limits<double>::infinity();
  for (int d : destinations) {
    const double v = max_flow(g, source, d).value;
    out.per_destination.push_back(v);
    out.value = std::min(out.value, v);
  }
  return out;
}

namespace {

struct Arc {
  int from, to;
  double capacity;
};

/// Dijkstra on arc lengths (dense, tiny graphs); lowest index wins ties.
bool shortest_path_by_length(const std::vector<Arc>& arcs,
                             const Eigen::MatrixXd& length, int n, int s,
                             int t, std::vector<int>& path_arcs,
                             const std::vector<std::vector<int>>& out_arcs) {
  std::vector<double> dist(n, std::numeric_limits<double>::infinity());
  std::vector<int> via(n, -1);
  std::vector<bool> done(n, false);
  dist[s] = 0.0;
  for (int round = 0; round < n; ++round) {
    int u = -1;
    for (int i = 0; i < n; ++i)
      if (!done[i] && (u == -1 || dist[i] < dist[u])) u = i;
    if (u == -1 || !std::isfinite(dist[u])) break;
    done[u] = true;
    for (int a : out_arcs[u]) {
      const double nd = dist[u] + length(arcs[a].from, arcs[a].to);
      if (nd < dist[arcs[a].to]) {
        dist[arcs[a].to] = nd;
        via[arcs[a].to] = a;
      }
    }
  }
  if (!std::isfinite(dist[t])) return false;
  path_arcs.clear();
  for (int v = t; v != s; v = arcs[via[v]].from) path_arcs.push_back(via[v]);
  return true;
}

}  // namespace

ConcurrentFlowResult max_concurrent_flow(
    const netgraph::CapacityGraph& g,
    const std::vector<spectral::CommoditySpec>& commodities, double eps) {
  require(eps > 0 && eps < 0.5, "concurrent flow: eps must lie in (0, 0.5)");
  require(!commodities.empty(),
          "concurrent flow: at least one commodity is required");
  const int n = g.size();
  const int k = static_cast<int>(commodities.size());
  for (const auto& c : commodities) {
    check_endpoint(g, c.source, "source");
    check_endpoint(g, c.destination, "destination");
    require(c.source != c.destination, "flow: source equals destination");
    require(c.demand > 0, "concurrent flow: demands must be > 0");
  }

  ConcurrentFlowResult out;
  out.routed.assign(k, 0.0);
  out.arc_flow.assign(k, Eigen::MatrixXd::Zero(n, n));

  // Every commodity must be routable at all for the ratio to be positive.
  std::vector<double> single_flow(k);
  for (int c = 0; c < k; ++c) {
    single_flow[c] =
        max_flow(g, commodities[c].source, commodities[c].destination).value;
    if (single_flow[c] <= 0.0) return out;  // disconnected commodity
  }

  std::vector<Arc> arcs;
  std::vector<std::vector<int>> out_arcs(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && g.adjacency(i, j) > 0) {
        out_arcs[i].push_back(static_cast<int>(arcs.size()));
        arcs.push_back({i, j, g.adjacency(i, j)});
      }
  const int m = static_cast<int>(arcs.size());

  // Rescale demands so the optimum lies in [1, k]; keeps the phase count
  // bounded regardless of the input scale.
  double opt_upper = std::numeric_limits<double>::infinity();
  for (int c = 0; c < k; ++c)
    opt_upper = std::min(opt_upper, single_flow[c] / commodities[c].demand);
  std::vector<double> demand(k);
  for (int c = 0; c < k; ++c)
    demand[c] = commodities[c].demand * opt_upper / k;

  const double e = eps / 3.0;  // internal accuracy for the (1-eps) guarantee
  // True initial arc lengths are delta / capacity with
  // delta = (m/(1-e))^{-1/e}.  For small eps this underflows double
  // precision outright (m = 12, eps = 0.01 gives delta ~ e^{-747}), which
  // would freeze every length at zero, so lengths are stored relative to a
  // running log-scale offset: true length = stored * exp(log_scale).
  // Shortest paths depend only on length ratios, so the search can use the
  // stored values directly; only the termination test needs the offset.
  const double log_delta = -std::log(m / (1.0 - e)) / e;
  double log_scale = log_delta;
  Eigen::MatrixXd length = Eigen::MatrixXd::Zero(n, n);
  for (const Arc& a : arcs) length(a.from, a.to) = 1.0 / a.capacity;

  const auto stored_weighted_length = [&] {
    double sum = 0.0;
    for (const Arc& a : arcs) sum += length(a.from, a.to) * a.capacity;
    return sum;
  };
  // True termination test sum_a length_a * capacity_a >= 1, in log space.
  const auto lengths_saturated = [&] {
    return std::log(stored_weighted_length()) + log_scale >= 0.0;
  };

  // Phases are bounded by lambda' * log_{1+e}(1/delta) with the rescaled
  // optimum lambda' <= k; pad with a safety factor so a logic error cannot
  // spin forever.
  const double phase_bound =
      std::ceil(k * -log_delta / std::log1p(e)) * 4.0 + 16.0;

  std::vector<int> path;
  while (!lengths_saturated()) {
    ++out.phases;
    for (int c = 0; c < k; ++c) {
      double remaining = demand[c];
      while (remaining > 0 && !lengths_saturated()) {
        if (!shortest_path_by_length(arcs, length, n, commodities[c].source,
                                     commodities[c].destination, path,
                                     out_arcs))
          break;
        double bottleneck = remaining;
        for (int a : path) bottleneck = std::min(bottleneck, arcs[a].capacity);
        for (int a : path) {
          out.arc_flow[c](arcs[a].from, arcs[a].to) += bottleneck;
          length(arcs[a].from, arcs[a].to) *=
              1.0 + e * bottleneck / arcs[a].capacity;
        }
        out.routed[c] += bottleneck;
        remaining -= bottleneck;
      }
    }
    // Fold growth into the offset before the stored values can overflow.
    const double total = stored_weighted_length();
    if (total > 1e100) {
      length /= total;
      log_scale += std::log(total);
    }
    if (static_cast<double>(out.phases) > phase_bound)
      throw std::runtime_error(
          "concurrent flow: phase budget exhausted without convergence");
  }

  // Rescale to strict feasibility: joint congestion per arc must be <= 1.
  double congestion = 0.0;
  for (const Arc& a : arcs) {
    double used = 0.0;
    for (int c = 0; c < k; ++c) used += out.arc_flow[c](a.from, a.to);
    congestion = std::max(congestion, used / a.capacity);
  }
  if (congestion <= 0.0) return out;
  double ratio = std::numeric_limits<double>::infinity();
  for (int c = 0; c < k; ++c) {
    out.routed[c] /= congestion;
    out.arc_flow[c] /= congestion;
    ratio = std::min(ratio, out.routed[c] / commodities[c].demand);
  }
  out.ratio = ratio;
  return out;
}

bool verify_flow(const netgraph::CapacityGraph& g, const FlowResult& r,
                 int source, int destination) {
  const int n = g.size();
  if (r.arc_flow.rows() != n || r.arc_flow.cols() != n) return false;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (r.arc_flow(i, j) < -kResidualEps) return false;
      if (r.arc_flow(i, j) > g.adjacency(i, j) + kResidualEps) return false;
    }
  for (int v = 0; v < n; ++v) {
    if (v == source || v == destination) continue;
    const double net = r.arc_flow.row(v).sum() - r.arc_flow.col(v).sum();
    if (std::abs(net) > 1e-6) return false;
  }
  const double out_value =
      r.arc_flow.row(source).sum() - r.arc_flow.col(source).sum();
  const double in_value = r.arc_flow.col(destination).sum() -
                          r.arc_flow.row(destination).sum();
  return std::abs(out_value - r.value) <= 1e-6 &&
         std::abs(in_value - r.value) <= 1e-6;
}

}  // namespace absnet::flow
