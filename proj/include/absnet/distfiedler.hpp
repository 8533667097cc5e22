#pragma once

#include "absnet/netgraph.hpp"

#include <utility>
#include <vector>

namespace absnet::distfiedler {

struct Options {
  int outer_iterations = 200;
  int gossip_rounds = 30;  ///< neighbor-relay rounds per global reduction
  std::uint64_t seed = 2026;
  bool record_deliveries = false;  ///< keep the (sender, receiver) audit log
};

/// Outcome of the decentralized Fiedler estimation.  Every quantity a node
/// uses is either local state, a neighbor's message, or a flooded reduction,
/// so `entries[i]` is exactly what node i itself would know.
struct Trace {
  Eigen::VectorXd entries;   ///< per-node estimate of its Fiedler component
  double lambda2_estimate = 0.0;
  std::vector<double> error_per_iteration;  ///< vs the centralized solution
  long long messages = 0;    ///< every neighbor-to-neighbor delivery
  /// Cumulative delivery count at the end of each outer iteration (parallel
  /// to error_per_iteration; flat once the Krylov space is exhausted).
  std::vector<long long> messages_per_iteration;
  int krylov_steps = 0;      ///< basis size actually built
  std::vector<std::pair<int, int>> deliveries;  ///< audit log when recorded
};

/// One synchronous exchange round: every node sends its payload entry to each
/// graph neighbor.  Returns inbox[i] = (sender, value) pairs in ascending
/// sender order; counts one message per delivery (2|E| per round).
std::vector<std::vector<std::pair<int, double>>> neighbor_exchange(
    const netgraph::CapacityGraph& g, const Eigen::VectorXd& payload,
    long long& messages, std::vector<std::pair<int, int>>* delivery_log);

/// Per-node sums of `contributions` obtained by flooding value tables along
/// graph edges for `rounds` synchronous rounds.  Row i of the result is what
/// node i can know: the exact global sum once rounds >= eccentricity(i),
/// otherwise the sum over its rounds-hop neighborhood.
Eigen::MatrixXd flooded_sums(const netgraph::CapacityGraph& g,
                             const Eigen::MatrixXd& contributions, int rounds,
                             long long& messages,
                             std::vector<std::pair<int, int>>* delivery_log);

/// Decentralized estimate of the second eigenpair of W^-1/2 L W^-1/2 with
/// the null direction W^1/2 1 deflated.  Nodes build a jointly orthonormal
/// Krylov basis: each step is one neighbor exchange (the operator touches
/// only neighbor entries) plus flooded reductions for the recurrence and
/// re-orthogonalization scalars, then every node extracts its entry of the
/// smallest Ritz pair from its own copy of the flooded coefficients.
/// The per-iteration error trace is measured against the centralized dense
/// solution of the same operator.
Trace distributed_fiedler(const netgraph::CapacityGraph& g,
                          const netgraph::WeightMatrix& w,
                          const Options& opt = {});

}  // namespace absnet::distfiedler
