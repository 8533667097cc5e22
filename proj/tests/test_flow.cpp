#include "doctest.h"

#include <vector>

#include "absnet/flow.hpp"
#include "helpers.hpp"

using namespace absnet;
using doctest::Approx;
using testutil::graph_from;
using testutil::p4_graph;

TEST_CASE("chain flow is throttled by the weakest edge") {
  const netgraph::CapacityGraph g =
      graph_from(3, {{0, 1, 2.0}, {1, 2, 3.0}});
  const flow::FlowResult r = flow::max_flow(g, 0, 2);
  CHECK(r.value == Approx(2.0).epsilon(1e-12));
  CHECK(r.min_cut_capacity == Approx(2.0).epsilon(1e-12));
  CHECK(flow::verify_flow(g, r, 0, 2));
  // the cut separates the source side from the sink
  REQUIRE(!r.min_cut.empty());
  CHECK(r.min_cut[0] == 0);
}

TEST_CASE("parallel disjoint paths add") {
  const netgraph::CapacityGraph g = graph_from(
      4, {{0, 1, 2.0}, {1, 3, 2.0}, {0, 2, 3.0}, {2, 3, 3.0}});
  const flow::FlowResult r = flow::max_flow(g, 0, 3);
  CHECK(r.value == Approx(5.0).epsilon(1e-12));
  CHECK(flow::verify_flow(g, r, 0, 3));
}

TEST_CASE("path fixture flow equals its bottleneck cut") {
  const flow::FlowResult r = flow::max_flow(p4_graph(), 0, 3);
  CHECK(r.value == Approx(0.5).epsilon(1e-12));
  CHECK(r.min_cut_capacity == Approx(r.value).epsilon(1e-12));
}

TEST_CASE("flow endpoints are validated") {
  CHECK_THROWS_AS(flow::max_flow(p4_graph(), 0, 0), ValidationError);
  CHECK_THROWS_AS(flow::max_flow(p4_graph(), -1, 3), ValidationError);
  CHECK_THROWS_AS(flow::max_flow(p4_graph(), 0, 9), ValidationError);
}

TEST_CASE("disconnected endpoints carry zero flow") {
  const netgraph::CapacityGraph g =
      graph_from(4, {{0, 1, 1.0}, {2, 3, 1.0}});
  const flow::FlowResult r = flow::max_flow(g, 0, 3);
  CHECK(r.value == 0.0);
  CHECK(r.min_cut_capacity == 0.0);
  CHECK(flow::verify_flow(g, r, 0, 3));
}

TEST_CASE("verify_flow rejects tampered solutions") {
  const netgraph::CapacityGraph g =
      graph_from(3, {{0, 1, 2.0}, {1, 2, 3.0}});
  flow::FlowResult r = flow::max_flow(g, 0, 2);
  r.arc_flow(0, 1) += 0.5;  // breaks conservation at node 1
  CHECK_FALSE(flow::verify_flow(g, r, 0, 2));
  flow::FlowResult s = flow::max_flow(g, 0, 2);
  s.value += 0.25;  // value no longer matches the net outflow
  CHECK_FALSE(flow::verify_flow(g, s, 0, 2));
}

TEST_CASE("multicast rate is the worst per-destination flow") {
  const netgraph::CapacityGraph g = graph_from(
      4, {{0, 1, 1.0}, {0, 2, 2.0}, {0, 3, 3.0}});
  const flow::MulticastResult r = flow::multicast_flow(g, 0, {1, 2, 3});
  REQUIRE(r.per_destination.size() == 3);
  CHECK(r.per_destination[0] == Approx(1.0).epsilon(1e-12));
  CHECK(r.per_destination[1] == Approx(2.0).epsilon(1e-12));
  CHECK(r.per_destination[2] == Approx(3.0).epsilon(1e-12));
  CHECK(r.value == Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(flow::multicast_flow(g, 0, {}), ValidationError);
}

TEST_CASE("single-commodity concurrent flow approaches the max flow") {
  const netgraph::CapacityGraph g =
      graph_from(3, {{0, 1, 2.0}, {1, 2, 3.0}});
  std::vector<spectral::CommoditySpec> commodities(1);
  commodities[0].source = 0;
  commodities[0].destination = 2;
  commodities[0].demand = 2.0;  // exactly the max flow
  const flow::ConcurrentFlowResult r =
      flow::max_concurrent_flow(g, commodities, 0.01);
  CHECK(r.ratio >= 0.99);
  CHECK(r.ratio <= 1.0 + 1e-9);
  REQUIRE(r.routed.size() == 1);
  CHECK(r.routed[0] == Approx(r.ratio * 2.0).epsilon(1e-9));
  CHECK(r.phases > 0);
}

TEST_CASE("two commodities share a bottleneck fairly") {
  // both commodities traverse edge (1, 2): the best common fraction is
  // 3 / (1 + 1) = 1.5 of each unit demand
  const netgraph::CapacityGraph g =
      graph_from(3, {{0, 1, 2.0}, {1, 2, 3.0}});
  std::vector<spectral::CommoditySpec> commodities(2);
  commodities[0].source = 0;
  commodities[0].destination = 2;
  commodities[1].source = 1;
  commodities[1].destination = 2;
  const flow::ConcurrentFlowResult r =
      flow::max_concurrent_flow(g, commodities, 0.02);
  CHECK(r.ratio >= 0.98 * 1.5);
  CHECK(r.ratio <= 1.5 + 1e-9);
}

TEST_CASE("concurrent flow solutions respect arc capacities") {
  const netgraph::CapacityGraph g = p4_graph();
  std::vector<spectral::CommoditySpec> commodities(2);
  commodities[0].source = 0;
  commodities[0].destination = 3;
  commodities[1].source = 3;
  commodities[1].destination = 1;
  const flow::ConcurrentFlowResult r =
      flow::max_concurrent_flow(g, commodities, 0.05);
  REQUIRE(r.arc_flow.size() == 2);
  const int n = g.size();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double total = r.arc_flow[0](i, j) + r.arc_flow[1](i, j);
      CHECK(total <= g.adjacency(i, j) + 1e-9);
    }
  CHECK(r.ratio > 0.0);
}

TEST_CASE("concurrent flow validates its inputs") {
  const netgraph::CapacityGraph g = p4_graph();
  std::vector<spectral::CommoditySpec> commodities;
  CHECK_THROWS_AS(flow::max_concurrent_flow(g, commodities, 0.01),
                  ValidationError);
  commodities.resize(1);
  commodities[0].source = 0;
  commodities[0].destination = 3;
  CHECK_THROWS_AS(flow::max_concurrent_flow(g, commodities, 0.0),
                  ValidationError);
  commodities[0].demand = -1.0;
  CHECK_THROWS_AS(flow::max_concurrent_flow(g, commodities, 0.01),
                  ValidationError);
}
