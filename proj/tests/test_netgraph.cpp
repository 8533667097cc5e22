#include "doctest.h"

#include <vector>

#include "absnet/netgraph.hpp"
#include "helpers.hpp"

using namespace absnet;
using doctest::Approx;
using testutil::four_node_state;

namespace {

// Frozen capacity matrix of the four-node state (independent dense
// reference implementation).
constexpr double kA01 = 5.337415868223e-02;
constexpr double kA02 = 2.497153236110e-02;
constexpr double kA03 = 9.238618434007e-02;
constexpr double kA12 = 5.693725123216e-03;
constexpr double kA13 = 7.095186890747e-01;
constexpr double kA23 = 3.944191051200e-01;

}  // namespace

TEST_CASE("smoothed step matches the reference values and decreases") {
  CHECK(netgraph::smoothed_step(1.0, 1.0, 10.0, 1e-6) ==
        Approx(0.9784482432383224).epsilon(1e-12));
  CHECK(netgraph::smoothed_step(0.0, 1.0, 10.0, 1e-6) ==
        Approx(0.999999000001).epsilon(1e-12));
  CHECK(netgraph::smoothed_step(2.0, 1.0, 10.0, 1e-6) ==
        Approx(0.0020569140066826383).epsilon(1e-12));
  CHECK(netgraph::smoothed_step(1.0, 3.0, 10.0, 1e-6) ==
        Approx(3.0 * 0.9784482432383224).epsilon(1e-12));
  double prev = 2.0;
  for (double y = 0.0; y <= 3.0; y += 0.1) {
    const double v = netgraph::smoothed_step(y, 1.0, 10.0, 1e-6);
    CHECK(v < prev);
    prev = v;
  }
}

TEST_CASE("graph parameter validation") {
  netgraph::GraphParams p;
  CHECK_NOTHROW(p.validate());
  p.interference_radius_m = -5.0;
  CHECK_THROWS_AS(p.validate(), ValidationError);
  p = {};
  p.bandwidth_hz = 0.0;
  CHECK_THROWS_AS(p.validate(), ValidationError);
  p = {};
  p.y0 = 0.0;
  CHECK_THROWS_AS(p.validate(), ValidationError);
}

TEST_CASE("network state validation") {
  netgraph::NetworkState s = four_node_state();
  CHECK_NOTHROW(s.validate());
  s.kinds.pop_back();
  CHECK_THROWS_AS(s.validate(), ValidationError);
  s = four_node_state();
  s.positions[1] = s.positions[0];  // coincident nodes break the model
  CHECK_THROWS_AS(s.validate(), ValidationError);
}

TEST_CASE("interference-free two-node link hits the ratio cap") {
  netgraph::NetworkState s;
  s.positions = {Vec3{0, 0, 0}, Vec3{50, 0, 0}};
  s.kinds = {NodeKind::Source, NodeKind::Destination};
  CHECK(netgraph::sir(0, 1, s) == Approx(1e12).epsilon(1e-15));
  // capacity = ln(1 + cap) / 2 at unit bandwidth
  CHECK(netgraph::link_capacity(0, 1, s) ==
        Approx(13.815510557964273).epsilon(1e-12));
}

TEST_CASE("four-node capacity matrix matches the dense reference") {
  const netgraph::NetworkState s = four_node_state();
  const netgraph::CapacityGraph g = netgraph::build_capacity_graph(s);
  REQUIRE(g.size() == 4);
  CHECK(g.adjacency(0, 1) == Approx(kA01).epsilon(1e-9));
  CHECK(g.adjacency(0, 2) == Approx(kA02).epsilon(1e-9));
  CHECK(g.adjacency(0, 3) == Approx(kA03).epsilon(1e-9));
  CHECK(g.adjacency(1, 2) == Approx(kA12).epsilon(1e-9));
  CHECK(g.adjacency(1, 3) == Approx(kA13).epsilon(1e-9));
  CHECK(g.adjacency(2, 3) == Approx(kA23).epsilon(1e-9));
  for (int i = 0; i < 4; ++i) {
    CHECK(g.adjacency(i, i) == 0.0);
    for (int j = 0; j < 4; ++j) CHECK(g.adjacency(i, j) == g.adjacency(j, i));
  }
  CHECK(g.degrees[0] == Approx(kA01 + kA02 + kA03).epsilon(1e-12));
  CHECK(g.edge_count() == 6);
  CHECK(g.connected());
}

TEST_CASE("capacity matrix is equivariant under node relabeling") {
  const netgraph::NetworkState s = four_node_state();
  netgraph::NetworkState r = s;
  // reverse the node order
  for (int i = 0; i < 4; ++i) {
    r.positions[static_cast<size_t>(i)] = s.positions[static_cast<size_t>(3 - i)];
    r.kinds[static_cast<size_t>(i)] = s.kinds[static_cast<size_t>(3 - i)];
  }
  const netgraph::CapacityGraph g = netgraph::build_capacity_graph(s);
  const netgraph::CapacityGraph h = netgraph::build_capacity_graph(r);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      CHECK(h.adjacency(i, j) == Approx(g.adjacency(3 - i, 3 - j)).epsilon(1e-12));
}

TEST_CASE("range thresholds gate links by the more conservative endpoint") {
  netgraph::NetworkState s = four_node_state();
  s.range_threshold_m = {50.0, 1000.0, 1000.0, 1000.0};
  // d(0,1) = 120 m > min(50, 1000): the link disappears
  CHECK(netgraph::link_capacity(0, 1, s) == 0.0);
  // d(0,2) ~ 45.8 m < 50: the link survives
  CHECK(netgraph::link_capacity(0, 2, s) > 0.0);
  const netgraph::CapacityGraph g = netgraph::build_capacity_graph(s);
  CHECK(g.adjacency(0, 1) == 0.0);
  CHECK(g.adjacency(0, 2) > 0.0);
}

TEST_CASE("terminal links can be forbidden") {
  netgraph::NetworkState s = four_node_state();
  s.graph.forbid_terminal_links = true;
  const netgraph::CapacityGraph g = netgraph::build_capacity_graph(s);
  CHECK(g.adjacency(0, 1) == 0.0);       // source-destination
  CHECK(g.adjacency(0, 2) > 0.0);        // terminal-relay stays
  CHECK(g.adjacency(2, 3) > 0.0);        // relay-relay stays
}

TEST_CASE("capacities below the floor collapse to exact zero") {
  netgraph::NetworkState s = four_node_state();
  s.graph.capacity_floor_rel = 0.3;  // everything but the two relay links
  const netgraph::CapacityGraph g = netgraph::build_capacity_graph(s);
  CHECK(g.adjacency(1, 3) == Approx(kA13).epsilon(1e-9));
  CHECK(g.adjacency(0, 1) == 0.0);
  CHECK(g.adjacency(0, 2) == 0.0);
  CHECK(g.adjacency(0, 3) == 0.0);
  CHECK(g.adjacency(1, 2) == 0.0);
  CHECK(g.adjacency(2, 3) == Approx(kA23).epsilon(1e-9));
}

TEST_CASE("bandwidth scales capacities linearly") {
  netgraph::NetworkState s = four_node_state();
  s.graph.bandwidth_hz = 7.0;
  const netgraph::CapacityGraph g = netgraph::build_capacity_graph(s);
  CHECK(g.adjacency(0, 1) == Approx(7.0 * kA01).epsilon(1e-9));
}

TEST_CASE("disconnected graphs are detected") {
  netgraph::NetworkState s = four_node_state();
  s.range_threshold_m = {10.0, 10.0, 10.0, 10.0};  // shorter than any link
  const netgraph::CapacityGraph g = netgraph::build_capacity_graph(s);
  CHECK_FALSE(g.connected());
  CHECK(g.edge_count() == 0);
}

TEST_CASE("make_graph rejects malformed adjacency input") {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(3, 3);
  a(0, 1) = 1.0;  // asymmetric
  CHECK_THROWS_AS(netgraph::make_graph(a), ValidationError);
  a(1, 0) = 1.0;
  a(1, 2) = a(2, 1) = -2.0;  // negative capacity
  CHECK_THROWS_AS(netgraph::make_graph(a), ValidationError);
}

TEST_CASE("weight matrices") {
  const netgraph::WeightMatrix u = netgraph::WeightMatrix::uniform(4);
  CHECK(u.w.size() == 4);
  CHECK(u.w.minCoeff() == 1.0);
  CHECK(u.w.maxCoeff() == 1.0);
  CHECK_NOTHROW(u.validate(4));
  CHECK_THROWS_AS(u.validate(5), ValidationError);

  const netgraph::WeightMatrix e = netgraph::WeightMatrix::terminal_emphasis(
      four_node_state().kinds, 1.0, 0.01);
  CHECK(e.w[0] == 1.0);
  CHECK(e.w[1] == 1.0);
  CHECK(e.w[2] == 0.01);
  CHECK(e.w[3] == 0.01);

  netgraph::WeightMatrix bad;
  bad.w = Eigen::Vector3d{1.0, 0.0, 1.0};
  CHECK_THROWS_AS(bad.validate(3), ValidationError);
}

TEST_CASE("laplacian variants annihilate their null directions") {
  const netgraph::CapacityGraph g =
      netgraph::build_capacity_graph(four_node_state());
  const netgraph::WeightMatrix w = netgraph::WeightMatrix::terminal_emphasis(
      four_node_state().kinds, 1.0, 0.01);
  const netgraph::LaplacianSet lap = netgraph::laplacians(g, w);

  CHECK((lap.combinatorial * lap.null_combinatorial).norm() < 1e-12);
  CHECK((lap.normalized * lap.null_normalized).norm() < 1e-12);
  CHECK((lap.weighted_normalized * lap.null_weighted_normalized).norm() <
        1e-12);
  CHECK((lap.weighted * lap.null_weighted).norm() < 1e-11);

  // combinatorial row sums vanish; all variants stay symmetric
  CHECK(lap.combinatorial.rowwise().sum().norm() < 1e-12);
  CHECK((lap.weighted - lap.weighted.transpose()).norm() < 1e-12);
}

TEST_CASE("laplacians reject isolated nodes by name") {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(3, 3);
  a(0, 1) = a(1, 0) = 1.0;  // node 2 isolated
  const netgraph::CapacityGraph g = netgraph::make_graph(a);
  const netgraph::WeightMatrix w = netgraph::WeightMatrix::uniform(3);
  try {
    netgraph::laplacians(g, w);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("2") != std::string::npos);
  }
}
