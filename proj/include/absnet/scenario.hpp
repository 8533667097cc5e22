#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "absnet/energy.hpp"
#include "absnet/flow.hpp"
#include "absnet/mobility.hpp"

namespace absnet::scenario {

/// Placement strategy executed by run_experiment.
enum class Mode { Weighted, Unweighted, RandomBaseline, EnergyEfficient };

/// Flow metric logged per slot.
enum class FlowEval { Single, Multicast, MultiUnicast };

std::string to_string(Mode m);
std::string to_string(FlowEval e);
Mode parse_mode(const std::string& text);
FlowEval parse_flow_eval(const std::string& text);

struct Commodity {
  int source = 0;       ///< global node index
  int destination = 0;  ///< global node index
  double demand = 1.0;
};

/// A fully resolved experiment description.  Node indices run sources first,
/// then destinations, then relays, each group in declaration order.
struct Scenario {
  std::string name;
  Vec3 region_extent_m{200.0, 200.0, 100.0};
  std::vector<Vec3> sources;
  std::vector<Vec3> destinations;
  std::vector<Vec3> relays;
  std::vector<Vec3> interferers;
  std::vector<Commodity> commodities;  ///< resolved (never empty after load)
  Mode mode = Mode::Weighted;
  FlowEval flow_eval = FlowEval::Single;
  int runs = 1;
  std::uint64_t seed = 2026;

  double terminal_weight = 1.0;  ///< spectral emphasis on terminals
  double relay_weight = 0.01;
  double flow_eps = 0.01;        ///< concurrent-flow approximation accuracy
  double range_threshold_m = 0.0;  ///< link gate; 0 disables it

  channel::Params channel;
  netgraph::GraphParams graph;
  mobility::Config mobility;
  mobility::FiedlerSource fiedler_source = mobility::FiedlerSource::Centralized;
  distfiedler::Options distfiedler;
  energy::Params energy;
  double data_bits = 1e3;         ///< per-relay state size for latency
  double processing_rate = 1e8;   ///< bit-operations per second

  int node_count() const {
    return static_cast<int>(sources.size() + destinations.size() +
                            relays.size());
  }
  std::vector<int> source_ids() const;
  std::vector<int> destination_ids() const;
  std::vector<int> relay_ids() const;

  /// Node assembly: positions/kinds in the canonical order plus channel and
  /// graph parameters.
  netgraph::NetworkState initial_state() const;
  /// Uniform weights for the unweighted/random modes, terminal-emphasis
  /// weights otherwise.
  netgraph::WeightMatrix weights() const;
  /// The per-slot flow metric for this scenario's flow_eval and commodities.
  mobility::FlowMetric metric() const;
  std::string metric_name() const;

  void validate() const;
};

/// Parses the flat dotted-key text format (see README for the schema).
/// `origin` names the input in diagnostics.  Unknown keys, duplicate keys,
/// malformed values, and invariant violations raise ValidationError naming
/// the key and line.
Scenario parse_scenario(const std::string& text,
                        const std::string& origin = "<inline>");

Scenario load_scenario(const std::string& path);

struct BaselineResult {
  double mean = 0.0;
  double stddev = 0.0;  ///< sample standard deviation (0 for a single run)
  std::vector<double> per_run;
  std::vector<std::vector<Vec3>> positions_per_run;  ///< full node lists
};

/// Evaluates the scenario's flow metric with the relays placed uniformly at
/// random in the region's footprint at their initial altitudes, `runs`
/// times; run k draws from a stream derived from (seed, k), so results are
/// reproducible and independent of execution order.
BaselineResult random_stationary_baseline(const Scenario& sc, int runs,
                                          std::uint64_t seed);

struct EnergyRow {
  int abs_id = 0;
  double d_m = 0.0;            ///< straight-line displacement
  double e_maxflow_j = 0.0;    ///< gradient-trajectory energy
  double e_efficient_j = 0.0;  ///< straight replay over the same moving time
  double savings_pct = 0.0;
};

struct ExperimentResult {
  Mode mode = Mode::Weighted;
  std::vector<std::string> files;  ///< CSV paths written
  int slots_executed = 0;
  bool converged = false;
  bool stalled = false;
  double final_flow = 0.0;
  double final_lambda2 = 0.0;
  double baseline_mean = 0.0;
  double baseline_stddev = 0.0;
  double straight_final_flow = 0.0;
  double computation_latency_s = 0.0;
  std::vector<EnergyRow> energy;
};

/// Executes the scenario's mode and writes trajectories.csv, flow.csv, and
/// (as applicable) energy.csv and distfiedler_error.csv into out_dir,
/// creating it when missing.  Emitted trajectories are re-read from disk and
/// checked against the speed limit and height floor before returning.
ExperimentResult run_experiment(const Scenario& sc, const std::string& out_dir);

}  // namespace absnet::scenario
