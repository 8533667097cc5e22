#pragma once

#include <functional>
#include <iosfwd>
#include <limits>
#include <vector>

#include "absnet/distfiedler.hpp"
#include "absnet/netgraph.hpp"
#include "absnet/spectral.hpp"

namespace absnet::mobility {

/// Controller knobs for connectivity-gradient relay placement.
struct Config {
  double step_time_s = 1.0;      ///< scheduling slot length
  double v_max_mps = 5.0;        ///< relay speed limit
  double height_floor_m = 0.0;   ///< minimum relay altitude after each move
  /// Maximum relay altitude; infinity disables it.  Setting floor == ceiling
  /// confines the relays to a fixed-altitude plane.
  double height_ceiling_m = std::numeric_limits<double>::infinity();
  int max_iterations = 300;      ///< trajectory slot budget
  double convergence_tol = 1e-6; ///< joint gradient-norm stopping threshold
  double fd_step_m = 1e-3;       ///< finite-difference step for capacities
  double degenerate_gap = 1e-8;  ///< below this the ascent direction is void
  int max_backtracks = 6;        ///< step halvings tried per slot

  void validate() const;
};

/// Where the ascent direction's eigenvector estimate comes from.
enum class FiedlerSource { Centralized, Distributed };

/// Connectivity snapshot of a state: weighted algebraic connectivity, its
/// eigenvector, and the eigenvalue gap.  Disconnected graphs report
/// lambda2 = 0 with an empty vector instead of throwing.
struct ConnectivityEval {
  double lambda2 = 0.0;
  double gap = 0.0;
  Eigen::VectorXd vector;
  bool connected = false;
};

ConnectivityEval eval_connectivity(const netgraph::NetworkState& state,
                                   const netgraph::WeightMatrix& w);

/// Central finite difference of the link capacity a(p, q) with respect to
/// coordinate `axis` (0 = x, 1 = y, 2 = z) of node `node`.  Moving any node
/// can change any link through the collision penalties, so `node` need not
/// be an endpoint of the link.
double capacity_gradient(const netgraph::NetworkState& state, int p, int q,
                         int node, int axis, double fd_step);

/// Gradient of the weighted algebraic connectivity lambda2(W^-1/2 L W^-1/2)
/// with respect to the position of `node`, using first-order eigenvalue
/// perturbation:
///   d lambda2 = sum over pairs (p, q) of
///       (x_p / sqrt(w_p) - x_q / sqrt(w_q))^2 * d a(p, q),
/// with x the supplied unit eigenvector and d a(p, q) evaluated by central
/// finite differences.
Vec3 lambda2_gradient(const netgraph::NetworkState& state,
                      const netgraph::WeightMatrix& w,
                      const Eigen::VectorXd& fiedler_vector, int node,
                      double fd_step);

/// Convenience overload that solves for the eigenvector internally.  Throws
/// ValidationError when the graph is disconnected or the eigenvalue gap is
/// at most `degenerate_gap` (the direction is not well defined there).
Vec3 lambda2_gradient(const netgraph::NetworkState& state,
                      const netgraph::WeightMatrix& w, int node,
                      double fd_step = 1e-3, double degenerate_gap = 1e-8);

/// Outcome of one synchronized relay move.
struct StepResult {
  bool moved = false;
  bool forced = false;        ///< minimal step taken without an improvement
  double lambda2 = 0.0;       ///< connectivity after the slot
  double gradient_norm = 0.0; ///< joint norm over all relay gradients
  int backtracks = 0;         ///< step halvings spent before acceptance
};

/// Moves every relay one slot along its connectivity gradient: each relay
/// with a nonzero gradient travels v_max * step_time in its normalized
/// gradient direction, altitudes are clamped to the height floor, and the
/// joint step length is halved (up to max_backtracks times) until the
/// weighted algebraic connectivity strictly improves.  When no trial length
/// improves it -- which happens where the two smallest nonzero eigenvalues
/// cross and the single-mode gradient saturates -- the relays still take the
/// smallest probed step (`forced` is set) so the formation keeps evolving.
/// `direction_vector` is the eigenvector estimate used for the gradient;
/// `lambda2_before` is the current value.
StepResult step(netgraph::NetworkState& state,
                const netgraph::WeightMatrix& w, const Config& cfg,
                const Eigen::VectorXd& direction_vector,
                double lambda2_before);

/// One logged slot of a trajectory.
struct SlotRecord {
  int slot = 0;
  std::vector<Vec3> positions;  ///< all flow nodes after the slot
  double lambda2 = 0.0;
  double flow_value = 0.0;      ///< caller-chosen flow metric
  double displacement_m = 0.0;  ///< summed relay travel within the slot
};

struct TrajectoryLog {
  std::vector<SlotRecord> slots;
  double slot_duration_s = 1.0;
  /// When positive, every logged displacement was flown at this constant
  /// speed and the craft held position for the rest of the slot, so a
  /// segment's flight time is its length divided by this speed.  Zero means
  /// the motion filled the whole slot (constant-speed replays).
  double cruise_speed_mps = 0.0;
  bool converged = false;  ///< joint gradient norm fell below tolerance
  bool stalled = false;    ///< some slot exhausted backtracking (forced step)
  /// Per-executed-slot solver traces when the distributed source is used.
  std::vector<distfiedler::Trace> solver_traces;
};

/// Flow metric evaluated on the capacity graph after every slot (max flow,
/// multicast flow, concurrent-flow value, ...).
using FlowMetric = std::function<double(const netgraph::CapacityGraph&)>;

/// Runs the gradient controller from `state` until convergence, a stall, or
/// the slot budget, logging positions, connectivity, and the flow metric
/// after every slot (slot 0 is the initial state).  When the eigenvalue gap
/// degenerates the relays are nudged by a deterministic micro-perturbation
/// (at most three attempts) before giving up with ValidationError.  With the
/// distributed source the ascent direction comes from the message-passing
/// solver and its per-iteration traces are kept in the log.
TrajectoryLog run_maxflow_trajectory(
    netgraph::NetworkState state, const netgraph::WeightMatrix& w,
    const Config& cfg, const FlowMetric& metric,
    FiedlerSource source = FiedlerSource::Centralized,
    const distfiedler::Options& solver_options = {});

/// Constant-velocity replay: every node moves in a straight line from its
/// initial position to `final_positions` so that all nodes arrive exactly at
/// `total_time_s` (derived from the fastest relay at v_max when negative).
/// Terminals must not move.  Slots subdivide the total time uniformly with
/// duration at most cfg.step_time_s.
TrajectoryLog straight_line_trajectory(const netgraph::NetworkState& initial,
                                       const std::vector<Vec3>& final_positions,
                                       const netgraph::WeightMatrix& w,
                                       const Config& cfg,
                                       const FlowMetric& metric,
                                       double total_time_s = -1.0);

/// Wall-clock estimate of an iterative update on `data_bits` of state at a
/// processor handling `processing_rate` bit-operations per second:
/// iterations * data_bits^2 / processing_rate.
double computation_latency(double data_bits, double processing_rate,
                           double iterations);

/// Writes the log as CSV with header
///   slot,abs_id,x,y,z,lambda2,flow_metric
/// one row per listed node per slot, numbers rendered by format_number.
void export_trajectory_csv(const TrajectoryLog& log,
                           const std::vector<int>& abs_ids, std::ostream& out);

}  // namespace absnet::mobility
