#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "absnet/distfiedler.hpp"
#include "absnet/spectral.hpp"
#include "helpers.hpp"

using namespace absnet;
using doctest::Approx;
using testutil::graph_from;
using testutil::p4_graph;
using testutil::p4_weights;

namespace {

Eigen::VectorXd centralized_reference(const netgraph::CapacityGraph& g,
                                      const netgraph::WeightMatrix& w,
                                      double* lambda2 = nullptr) {
  const netgraph::LaplacianSet lap = netgraph::laplacians(g, w);
  const spectral::SpectralResult r =
      spectral::fiedler(lap.weighted, lap.null_weighted);
  if (lambda2 != nullptr) *lambda2 = r.lambda2;
  return r.fiedler_vector;
}

double sign_free_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return std::min((a - b).norm(), (a + b).norm());
}

}  // namespace

TEST_CASE("neighbor exchange delivers one message per directed edge") {
  const netgraph::CapacityGraph g = p4_graph();  // 3 edges
  Eigen::VectorXd payload(4);
  payload << 10.0, 20.0, 30.0, 40.0;
  long long messages = 0;
  std::vector<std::pair<int, int>> log;
  const auto inbox =
      distfiedler::neighbor_exchange(g, payload, messages, &log);
  CHECK(messages == 6);  // 2 * |E|
  REQUIRE(inbox.size() == 4);
  REQUIRE(inbox[1].size() == 2);  // node 1 hears nodes 0 and 2
  CHECK(inbox[1][0].first == 0);
  CHECK(inbox[1][0].second == 10.0);
  CHECK(inbox[1][1].first == 2);
  CHECK(inbox[1][1].second == 30.0);
  REQUIRE(inbox[0].size() == 1);
  CHECK(inbox[0][0].second == 20.0);
  // the audit log only ever uses graph edges
  for (const auto& [from, to] : log) CHECK(g.adjacency(from, to) > 0.0);
}

TEST_CASE("flooding computes exact sums once rounds reach the eccentricity") {
  const netgraph::CapacityGraph g = p4_graph();  // diameter 3
  Eigen::MatrixXd contributions(4, 2);
  contributions << 1.0, 5.0, 2.0, 6.0, 3.0, 7.0, 4.0, 8.0;
  long long messages = 0;
  const Eigen::MatrixXd sums =
      distfiedler::flooded_sums(g, contributions, 3, messages, nullptr);
  REQUIRE(sums.rows() == 4);
  for (int i = 0; i < 4; ++i) {
    CHECK(sums(i, 0) == Approx(10.0).epsilon(1e-15));
    CHECK(sums(i, 1) == Approx(26.0).epsilon(1e-15));
  }
  CHECK(messages > 0);
}

TEST_CASE("insufficient flooding rounds leave only local knowledge") {
  const netgraph::CapacityGraph g = p4_graph();
  Eigen::MatrixXd contributions(4, 1);
  contributions << 1.0, 2.0, 3.0, 4.0;
  long long messages = 0;
  const Eigen::MatrixXd sums =
      distfiedler::flooded_sums(g, contributions, 1, messages, nullptr);
  // after one round, the end node knows itself and its single neighbor
  CHECK(sums(0, 0) == Approx(3.0).epsilon(1e-15));
  CHECK(sums(3, 0) == Approx(7.0).epsilon(1e-15));
  // the middle nodes know three entries
  CHECK(sums(1, 0) == Approx(6.0).epsilon(1e-15));
}

TEST_CASE("distributed estimate agrees with the centralized eigenpair") {
  const netgraph::CapacityGraph g = p4_graph();
  const netgraph::WeightMatrix w = p4_weights();
  double lambda2 = 0.0;
  const Eigen::VectorXd ref = centralized_reference(g, w, &lambda2);

  const distfiedler::Trace trace = distfiedler::distributed_fiedler(g, w);
  REQUIRE(trace.entries.size() == 4);
  CHECK(sign_free_distance(trace.entries, ref) < 1e-8);
  CHECK(trace.lambda2_estimate == Approx(0.5708471687883963).epsilon(1e-8));
  CHECK(trace.lambda2_estimate == Approx(lambda2).epsilon(1e-8));
  REQUIRE(!trace.error_per_iteration.empty());
  CHECK(trace.error_per_iteration.back() < 1e-8);
  CHECK(trace.krylov_steps >= 1);
}

TEST_CASE("error and message traces advance together") {
  const netgraph::CapacityGraph g = p4_graph();
  const distfiedler::Trace trace =
      distfiedler::distributed_fiedler(g, p4_weights());
  REQUIRE(trace.messages_per_iteration.size() ==
          trace.error_per_iteration.size());
  long long prev = 0;
  for (long long m : trace.messages_per_iteration) {
    CHECK(m >= prev);
    prev = m;
  }
  CHECK(trace.messages == trace.messages_per_iteration.back());
  // the error trace settles: the last value never exceeds the first
  CHECK(trace.error_per_iteration.back() <=
        trace.error_per_iteration.front() + 1e-12);
}

TEST_CASE("distributed solve is deterministic per seed") {
  const netgraph::CapacityGraph g = p4_graph();
  distfiedler::Options opt;
  opt.seed = 7;
  const distfiedler::Trace a =
      distfiedler::distributed_fiedler(g, p4_weights(), opt);
  const distfiedler::Trace b =
      distfiedler::distributed_fiedler(g, p4_weights(), opt);
  CHECK((a.entries - b.entries).norm() == 0.0);
  CHECK(a.messages == b.messages);
}

TEST_CASE("every recorded delivery is a graph edge") {
  const netgraph::CapacityGraph g = p4_graph();
  distfiedler::Options opt;
  opt.record_deliveries = true;
  opt.outer_iterations = 4;
  const distfiedler::Trace trace =
      distfiedler::distributed_fiedler(g, p4_weights(), opt);
  REQUIRE(!trace.deliveries.empty());
  for (const auto& [from, to] : trace.deliveries) {
    CHECK(from != to);
    CHECK(g.adjacency(from, to) > 0.0);
  }
  CHECK(static_cast<long long>(trace.deliveries.size()) == trace.messages);
}

TEST_CASE("a single edge is solved exactly in one Krylov step") {
  const netgraph::CapacityGraph g = graph_from(2, {{0, 1, 3.0}});
  const netgraph::WeightMatrix w = netgraph::WeightMatrix::uniform(2);
  const distfiedler::Trace trace = distfiedler::distributed_fiedler(g, w);
  const Eigen::VectorXd ref = centralized_reference(g, w);
  CHECK(sign_free_distance(trace.entries, ref) < 1e-10);
  CHECK(trace.lambda2_estimate == Approx(6.0).epsilon(1e-10));
  CHECK(trace.krylov_steps == 1);
}

TEST_CASE("estimates track the reference on random connected graphs") {
  for (std::uint64_t seed = 21; seed <= 26; ++seed) {
    const int n = 4 + static_cast<int>(seed % 4);
    const netgraph::CapacityGraph g =
        testutil::random_connected_graph(seed, n);
    const netgraph::WeightMatrix w = testutil::random_weights(seed, n);
    const distfiedler::Trace trace = distfiedler::distributed_fiedler(g, w);
    const Eigen::VectorXd ref = centralized_reference(g, w);
    CAPTURE(seed);
    CHECK(sign_free_distance(trace.entries, ref) < 1e-7);
  }
}
