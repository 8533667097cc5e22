#pragma once

// Shared fixtures for the unit suites: small hand-built graphs, a frozen
// four-node geometric state, and a seeded random connected-graph generator.

#include <cstdlib>
#include <string>
#include <vector>

#include "absnet/netgraph.hpp"

namespace testutil {

using absnet::NodeKind;
using absnet::Vec3;

/// Dense symmetric adjacency from an (i, j, capacity) edge list.
inline absnet::netgraph::CapacityGraph graph_from(
    int n, const std::vector<std::tuple<int, int, double>>& edges) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (const auto& [i, j, c] : edges) a(i, j) = a(j, i) = c;
  return absnet::netgraph::make_graph(a);
}

/// Path 0-1-2-3 with capacities 1, 2, 0.5 (the frozen spectral fixture).
inline absnet::netgraph::CapacityGraph p4_graph() {
  return graph_from(4, {{0, 1, 1.0}, {1, 2, 2.0}, {2, 3, 0.5}});
}

inline absnet::netgraph::WeightMatrix p4_weights() {
  absnet::netgraph::WeightMatrix w;
  w.w = Eigen::Vector4d{1.0, 0.01, 0.01, 1.0};
  return w;
}

/// Frozen geometric state: source, destination, two relays, one terrestrial
/// interference source at (30, 0, 0).
inline absnet::netgraph::NetworkState four_node_state() {
  absnet::netgraph::NetworkState s;
  s.positions = {Vec3{0.0, 0.0, 0.0}, Vec3{120.0, 0.0, 0.0},
                 Vec3{40.0, 10.0, 20.0}, Vec3{80.0, -10.0, 25.0}};
  s.kinds = {NodeKind::Source, NodeKind::Destination, NodeKind::Relay,
             NodeKind::Relay};
  s.interferers = {Vec3{30.0, 0.0, 0.0}};
  return s;
}

/// Compact five-node state used by the movement tests: everything close
/// enough that the capacity graph is solidly connected.
inline absnet::netgraph::NetworkState five_node_state() {
  absnet::netgraph::NetworkState s;
  s.positions = {Vec3{0.0, 0.0, 0.0}, Vec3{60.0, 0.0, 0.0},
                 Vec3{15.0, 8.0, 12.0}, Vec3{30.0, 16.0, 14.0},
                 Vec3{45.0, 6.0, 10.0}};
  s.kinds = {NodeKind::Source, NodeKind::Destination, NodeKind::Relay,
             NodeKind::Relay, NodeKind::Relay};
  s.interferers = {Vec3{10.0, 2.0, 0.0}};
  return s;
}

/// Random connected weighted graph: a random spanning tree plus extra random
/// edges, capacities in [0.5, 2.5].  Deterministic per seed.
inline absnet::netgraph::CapacityGraph random_connected_graph(
    std::uint64_t seed, int n, double extra_edge_prob = 0.35) {
  std::uint64_t stream = absnet::derive_stream(seed, 0xabcdefULL);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) {
    const int j = static_cast<int>(absnet::uniform_in(stream, 0.0, 1.0) * i);
    const double c = absnet::uniform_in(stream, 0.5, 2.5);
    a(i, j) = a(j, i) = c;
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (a(i, j) == 0.0 &&
          absnet::uniform_in(stream, 0.0, 1.0) < extra_edge_prob) {
        const double c = absnet::uniform_in(stream, 0.5, 2.5);
        a(i, j) = a(j, i) = c;
      }
  return absnet::netgraph::make_graph(a);
}

/// Random strictly positive node weights in [0.01, 2].
inline absnet::netgraph::WeightMatrix random_weights(std::uint64_t seed,
                                                     int n) {
  std::uint64_t stream = absnet::derive_stream(seed, 0x5eedULL);
  absnet::netgraph::WeightMatrix w;
  w.w.resize(n);
  for (int i = 0; i < n; ++i)
    w.w[i] = absnet::uniform_in(stream, 0.01, 2.0);
  return w;
}

/// Directory holding the bundled scenario files (set by ctest, with a
/// relative fallback for manual runs from the repository root).
inline std::string scenario_dir() {
  const char* env = std::getenv("ABSNET_SCENARIO_DIR");
  return env != nullptr ? std::string(env) : std::string("scenarios");
}

}  // namespace testutil
