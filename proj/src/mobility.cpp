#include "absnet/mobility.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

namespace absnet::mobility {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw ValidationError(msg);
}

std::vector<int> relay_indices(const netgraph::NetworkState& state) {
  std::vector<int> out;
  for (int i = 0; i < state.size(); ++i)
    if (state.kinds[static_cast<size_t>(i)] == NodeKind::Relay)
      out.push_back(i);
  return out;
}

void clamp_heights(netgraph::NetworkState& state, const std::vector<int>& ids,
                   double floor, double ceiling) {
  for (int i : ids) {
    Vec3& p = state.positions[static_cast<size_t>(i)];
    p.z() = std::min(std::max(p.z(), floor), ceiling);
  }
}

/// Deterministic micro-offsets used to lift the state off an eigenvalue
/// crossing; magnitude grows with the attempt count.
void nudge_relays(netgraph::NetworkState& state, const std::vector<int>& ids,
                  const Config& cfg, int slot, int attempt) {
  const double magnitude = 1e-6 * attempt;
  for (int i : ids) {
    std::uint64_t stream = derive_stream(
        0x9e3779b97f4a7c15ULL + 1000003ULL * static_cast<std::uint64_t>(slot) +
            static_cast<std::uint64_t>(attempt),
        static_cast<std::uint64_t>(i));
    Vec3& p = state.positions[static_cast<size_t>(i)];
    for (int axis = 0; axis < 3; ++axis)
      p[axis] += magnitude * uniform_in(stream, -1.0, 1.0);
  }
  clamp_heights(state, ids, cfg.height_floor_m, cfg.height_ceiling_m);
}

/// Ensures the current state has a well-separated connectivity eigenpair,
/// nudging relays a few times before giving up.
void ensure_directional(netgraph::NetworkState& state,
                        const netgraph::WeightMatrix& w, const Config& cfg,
                        ConnectivityEval& ev, int slot) {
  const std::vector<int> ids = relay_indices(state);
  for (int attempt = 1; attempt <= 3; ++attempt) {
    if (ev.connected && ev.gap > cfg.degenerate_gap) return;
    nudge_relays(state, ids, cfg, slot, attempt);
    ev = eval_connectivity(state, w);
  }
  if (ev.connected && ev.gap > cfg.degenerate_gap) return;
  throw ValidationError(
      "trajectory: the connectivity eigenvalue stayed degenerate (gap <= " +
      std::to_string(cfg.degenerate_gap) + ") at slot " + std::to_string(slot) +
      " even after perturbing the relays; the ascent direction is undefined");
}

double total_displacement(const std::vector<Vec3>& before,
                          const std::vector<Vec3>& after) {
  double d = 0.0;
  for (size_t i = 0; i < before.size(); ++i) d += (after[i] - before[i]).norm();
  return d;
}

}  // namespace

void Config::validate() const {
  require(step_time_s > 0, "mobility config: step_time_s must be > 0");
  require(v_max_mps > 0, "mobility config: v_max_mps must be > 0");
  require(height_floor_m >= 0,
          "mobility config: height_floor_m must be >= 0");
  require(height_ceiling_m >= height_floor_m,
          "mobility config: height_ceiling_m must be >= height_floor_m");
  require(max_iterations >= 1,
          "mobility config: max_iterations must be >= 1");
  require(convergence_tol > 0,
          "mobility config: convergence_tol must be > 0");
  require(fd_step_m > 0, "mobility config: fd_step_m must be > 0");
  require(degenerate_gap > 0,
          "mobility config: degenerate_gap must be > 0");
  require(max_backtracks >= 0,
          "mobility config: max_backtracks must be >= 0");
}

ConnectivityEval eval_connectivity(const netgraph::NetworkState& state,
                                   const netgraph::WeightMatrix& w) {
  const netgraph::CapacityGraph g = netgraph::build_capacity_graph(state);
  ConnectivityEval out;
  out.connected = g.connected();
  if (!out.connected) return out;  // lambda2 is exactly zero there
  const netgraph::LaplacianSet lap = netgraph::laplacians(g, w);
  const spectral::SpectralResult r =
      spectral::fiedler(lap.weighted, lap.null_weighted, "weighted");
  out.lambda2 = r.lambda2;
  out.gap = r.spectral_gap;
  out.vector = r.fiedler_vector;
  return out;
}

double capacity_gradient(const netgraph::NetworkState& state, int p, int q,
                         int node, int axis, double fd_step) {
  const int n = state.size();
  require(p >= 0 && p < n && q >= 0 && q < n,
          "capacity gradient: link endpoints out of range");
  require(node >= 0 && node < n, "capacity gradient: node out of range");
  require(axis >= 0 && axis < 3, "capacity gradient: axis must be 0, 1, or 2");
  require(fd_step > 0, "capacity gradient: fd_step must be > 0");
  if (p == q) return 0.0;
  netgraph::NetworkState s = state;
  const double center = state.positions[static_cast<size_t>(node)][axis];
  s.positions[static_cast<size_t>(node)][axis] = center + fd_step;
  const double hi = netgraph::link_capacity(p, q, s);
  s.positions[static_cast<size_t>(node)][axis] = center - fd_step;
  const double lo = netgraph::link_capacity(p, q, s);
  return (hi - lo) / (2.0 * fd_step);
}

Vec3 lambda2_gradient(const netgraph::NetworkState& state,
                      const netgraph::WeightMatrix& w,
                      const Eigen::VectorXd& fiedler_vector, int node,
                      double fd_step) {
  const int n = state.size();
  w.validate(n);
  require(node >= 0 && node < n, "connectivity gradient: node out of range");
  require(fiedler_vector.size() == n,
          "connectivity gradient: eigenvector length must match the state");
  require(fd_step > 0, "connectivity gradient: fd_step must be > 0");

  // Scaled eigenvector entries y_i = x_i / sqrt(w_i); the pair coefficient
  // (y_p - y_q)^2 is the first-order sensitivity of lambda2 to a(p, q).
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) y[i] = fiedler_vector[i] / std::sqrt(w.w[i]);

  netgraph::NetworkState s = state;  // one mutable copy reused by all pairs
  Vec3 grad = Vec3::Zero();
  for (int axis = 0; axis < 3; ++axis) {
    const double base = state.positions[static_cast<size_t>(node)][axis];
    double acc = 0.0;
    s.positions[static_cast<size_t>(node)][axis] = base + fd_step;
    Eigen::MatrixXd hi(n, n);
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q)
        hi(p, q) = netgraph::link_capacity(p, q, s);
    s.positions[static_cast<size_t>(node)][axis] = base - fd_step;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double coef = (y[p] - y[q]) * (y[p] - y[q]);
        if (coef == 0.0) continue;
        const double da =
            (hi(p, q) - netgraph::link_capacity(p, q, s)) / (2.0 * fd_step);
        acc += coef * da;
      }
    }
    s.positions[static_cast<size_t>(node)][axis] = base;
    grad[axis] = acc;
  }
  return grad;
}

Vec3 lambda2_gradient(const netgraph::NetworkState& state,
                      const netgraph::WeightMatrix& w, int node,
                      double fd_step, double degenerate_gap) {
  const ConnectivityEval ev = eval_connectivity(state, w);
  require(ev.connected,
          "connectivity gradient: the capacity graph is disconnected");
  require(ev.gap > degenerate_gap,
          "connectivity gradient: the eigenvalue gap is degenerate (" +
              std::to_string(ev.gap) + " <= " +
              std::to_string(degenerate_gap) + ")");
  return lambda2_gradient(state, w, ev.vector, node, fd_step);
}

StepResult step(netgraph::NetworkState& state, const netgraph::WeightMatrix& w,
                const Config& cfg, const Eigen::VectorXd& direction_vector,
                double lambda2_before) {
  cfg.validate();
  state.validate();
  w.validate(state.size());
  const std::vector<int> ids = relay_indices(state);
  require(!ids.empty(), "step: the state has no relay nodes to move");

  std::vector<Vec3> grads(ids.size());
  double joint_sq = 0.0;
  for (size_t k = 0; k < ids.size(); ++k) {
    grads[k] =
        lambda2_gradient(state, w, direction_vector, ids[k], cfg.fd_step_m);
    joint_sq += grads[k].squaredNorm();
  }

  StepResult out;
  out.lambda2 = lambda2_before;
  out.gradient_norm = std::sqrt(joint_sq);
  if (out.gradient_norm < cfg.convergence_tol) return out;  // converged

  const double slot_travel = cfg.v_max_mps * cfg.step_time_s;
  double max_norm = 0.0;
  for (const Vec3& g : grads) max_norm = std::max(max_norm, g.norm());

  // Step lengths are proportional to each relay's own gradient magnitude and
  // capped at the per-slot travel budget: the steepest relay moves the full
  // v_max * step_time while relays already near their optimum barely move.
  // Giving every relay the full budget instead lets the direction noise of
  // settled relays cancel the progress of the one that still has to travel.
  const auto advance = [&](double scale) {
    netgraph::NetworkState trial = state;
    for (size_t k = 0; k < ids.size(); ++k) {
      const double norm = grads[k].norm();
      if (norm == 0.0) continue;
      const double length = slot_travel * scale * (norm / max_norm);
      trial.positions[static_cast<size_t>(ids[k])] += grads[k] / norm * length;
    }
    clamp_heights(trial, ids, cfg.height_floor_m, cfg.height_ceiling_m);
    return trial;
  };

  double scale = 1.0;
  for (int t = 0; t <= cfg.max_backtracks; ++t) {
    netgraph::NetworkState trial = advance(scale);
    const ConnectivityEval ev = eval_connectivity(trial, w);
    if (ev.lambda2 > lambda2_before) {
      state.positions = std::move(trial.positions);
      out.moved = true;
      out.lambda2 = ev.lambda2;
      out.backtracks = t;
      return out;
    }
    if (t < cfg.max_backtracks) scale *= 0.5;
  }

  // No scale improved the connectivity value.  This happens where the two
  // smallest nonzero eigenvalues cross: the single-mode gradient cannot lift
  // the minimum of the pair, yet useful ascent directions still exist along
  // the crossing.  Take the smallest probed step anyway so the formation keeps
  // evolving instead of freezing; the dip is bounded by the minimal step size.
  netgraph::NetworkState trial = advance(scale);
  const ConnectivityEval ev = eval_connectivity(trial, w);
  state.positions = std::move(trial.positions);
  out.moved = true;
  out.forced = true;
  out.lambda2 = ev.lambda2;
  out.backtracks = cfg.max_backtracks;
  return out;
}

TrajectoryLog run_maxflow_trajectory(netgraph::NetworkState state,
                                     const netgraph::WeightMatrix& w,
                                     const Config& cfg,
                                     const FlowMetric& metric,
                                     FiedlerSource source,
                                     const distfiedler::Options& solver_options) {
  cfg.validate();
  state.validate();
  w.validate(state.size());
  require(static_cast<bool>(metric), "trajectory: a flow metric is required");

  TrajectoryLog log;
  log.slot_duration_s = cfg.step_time_s;
  // Relays sprint each slot's leg at full speed and hold position for the
  // remainder, so downstream energy accounting prices the path by its length
  // rather than billing idle time at near-hover power.
  log.cruise_speed_mps = cfg.v_max_mps;

  ConnectivityEval ev = eval_connectivity(state, w);
  ensure_directional(state, w, cfg, ev, 0);
  {
    const netgraph::CapacityGraph g = netgraph::build_capacity_graph(state);
    log.slots.push_back({0, state.positions, ev.lambda2, metric(g), 0.0});
  }

  for (int slot = 1; slot <= cfg.max_iterations; ++slot) {
    Eigen::VectorXd direction;
    if (source == FiedlerSource::Centralized) {
      direction = ev.vector;
    } else {
      const netgraph::CapacityGraph g = netgraph::build_capacity_graph(state);
      distfiedler::Trace trace = distfiedler::distributed_fiedler(
          g, w, solver_options);
      direction = trace.entries;
      log.solver_traces.push_back(std::move(trace));
    }

    const std::vector<Vec3> before = state.positions;
    const StepResult r = step(state, w, cfg, direction, ev.lambda2);
    if (r.gradient_norm < cfg.convergence_tol) {
      log.converged = true;
      break;
    }
    if (r.forced) log.stalled = true;  // crossed an eigenvalue degeneracy

    ev = eval_connectivity(state, w);
    ensure_directional(state, w, cfg, ev, slot);
    const netgraph::CapacityGraph g = netgraph::build_capacity_graph(state);
    log.slots.push_back({slot, state.positions, ev.lambda2, metric(g),
                         total_displacement(before, state.positions)});
  }
  return log;
}

TrajectoryLog straight_line_trajectory(const netgraph::NetworkState& initial,
                                       const std::vector<Vec3>& final_positions,
                                       const netgraph::WeightMatrix& w,
                                       const Config& cfg,
                                       const FlowMetric& metric,
                                       double total_time_s) {
  cfg.validate();
  initial.validate();
  const int n = initial.size();
  w.validate(n);
  require(static_cast<bool>(metric), "trajectory: a flow metric is required");
  require(static_cast<int>(final_positions.size()) == n,
          "straight line: final positions must cover every node");

  double max_dist = 0.0;
  for (int i = 0; i < n; ++i) {
    const double d =
        (final_positions[static_cast<size_t>(i)] -
         initial.positions[static_cast<size_t>(i)])
            .norm();
    if (initial.kinds[static_cast<size_t>(i)] != NodeKind::Relay)
      require(d <= 1e-9,
              "straight line: terminal node " + std::to_string(i) +
                  " must not move");
    max_dist = std::max(max_dist, d);
  }

  TrajectoryLog log;
  auto record = [&](int slot, const netgraph::NetworkState& s,
                    double displacement) {
    const ConnectivityEval ev = eval_connectivity(s, w);
    const netgraph::CapacityGraph g = netgraph::build_capacity_graph(s);
    log.slots.push_back({slot, s.positions, ev.lambda2, metric(g),
                         displacement});
  };

  if (total_time_s <= 0) total_time_s = max_dist / cfg.v_max_mps;
  if (max_dist == 0.0 || total_time_s == 0.0) {
    require(max_dist == 0.0,
            "straight line: zero total time with nodes left to move");
    log.slot_duration_s = cfg.step_time_s;
    record(0, initial, 0.0);
    log.converged = true;
    return log;
  }
  require(max_dist / total_time_s <= cfg.v_max_mps * (1.0 + 1e-9),
          "straight line: covering the longest leg in " +
              std::to_string(total_time_s) + " s needs more than v_max");

  const int n_slots = std::max(
      1, static_cast<int>(std::ceil(total_time_s / cfg.step_time_s - 1e-12)));
  log.slot_duration_s = total_time_s / n_slots;

  netgraph::NetworkState s = initial;
  record(0, s, 0.0);
  double per_slot_travel = 0.0;
  for (int i = 0; i < n; ++i)
    per_slot_travel += (final_positions[static_cast<size_t>(i)] -
                        initial.positions[static_cast<size_t>(i)])
                           .norm() /
                       n_slots;
  for (int slot = 1; slot <= n_slots; ++slot) {
    const double frac = static_cast<double>(slot) / n_slots;
    for (int i = 0; i < n; ++i)
      s.positions[static_cast<size_t>(i)] =
          initial.positions[static_cast<size_t>(i)] +
          frac * (final_positions[static_cast<size_t>(i)] -
                  initial.positions[static_cast<size_t>(i)]);
    record(slot, s, per_slot_travel);
  }
  log.converged = true;
  return log;
}

double computation_latency(double data_bits, double processing_rate,
                           double iterations) {
  require(data_bits >= 0, "latency: data_bits must be >= 0");
  require(processing_rate > 0, "latency: processing_rate must be > 0");
  require(iterations >= 0, "latency: iterations must be >= 0");
  return iterations * data_bits * data_bits / processing_rate;
}

void export_trajectory_csv(const TrajectoryLog& log,
                           const std::vector<int>& abs_ids,
                           std::ostream& out) {
  out << "slot,abs_id,x,y,z,lambda2,flow_metric\n";
  for (const SlotRecord& s : log.slots) {
    for (int id : abs_ids) {
      if (id < 0 || id >= static_cast<int>(s.positions.size()))
        throw ValidationError("trajectory export: node id " +
                              std::to_string(id) + " is out of range");
      const Vec3& p = s.positions[static_cast<size_t>(id)];
      out << s.slot << ',' << id << ',' << format_number(p.x()) << ','
          << format_number(p.y()) << ',' << format_number(p.z()) << ','
          << format_number(s.lambda2) << ',' << format_number(s.flow_value)
          << '\n';
    }
  }
}

}  // namespace absnet::mobility
