// Python bindings for the aerial relay network formation library.

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "absnet/channel.hpp"
#include "absnet/distfiedler.hpp"
#include "absnet/energy.hpp"
#include "absnet/flow.hpp"
#include "absnet/mobility.hpp"
#include "absnet/netgraph.hpp"
#include "absnet/scenario.hpp"
#include "absnet/spectral.hpp"

namespace py = pybind11;
using namespace absnet;

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "Interference-aware aerial relay placement: channel models, capacity "
      "graphs, spectral connectivity, flow evaluation, movement control, and "
      "rotor energy accounting.";

  py::register_exception<ValidationError>(m, "ValidationError",
                                          PyExc_ValueError);

  py::enum_<NodeKind>(m, "NodeKind")
      .value("Source", NodeKind::Source)
      .value("Destination", NodeKind::Destination)
      .value("Relay", NodeKind::Relay);
  m.def("is_aerial", &is_aerial);

  // --- channel -------------------------------------------------------------
  py::class_<channel::Params>(m, "ChannelParams")
      .def(py::init<>())
      .def_readwrite("carrier_frequency_hz",
                     &channel::Params::carrier_frequency_hz)
      .def_readwrite("path_loss_exponent", &channel::Params::path_loss_exponent)
      .def_readwrite("mu_los_db", &channel::Params::mu_los_db)
      .def_readwrite("mu_nlos_db", &channel::Params::mu_nlos_db)
      .def_readwrite("psi", &channel::Params::psi)
      .def_readwrite("eta", &channel::Params::eta)
      .def("wave_factor", &channel::Params::wave_factor)
      .def("validate", &channel::Params::validate);
  m.def("db_to_linear", &channel::db_to_linear);
  m.def("elevation_angle_deg", &channel::elevation_angle_deg);
  m.def("los_probability", &channel::los_probability);
  m.def("a2a_path_loss", &channel::a2a_path_loss);
  m.def("a2g_path_loss_avg", &channel::a2g_path_loss_avg);
  m.def("channel_gain", &channel::channel_gain, py::arg("a"),
        py::arg("a_aerial"), py::arg("b"), py::arg("b_aerial"), py::arg("p"));

  // --- capacity graph --------------------------------------------------------
  py::class_<netgraph::GraphParams>(m, "GraphParams")
      .def(py::init<>())
      .def_readwrite("bandwidth_hz", &netgraph::GraphParams::bandwidth_hz)
      .def_readwrite("interference_radius_m",
                     &netgraph::GraphParams::interference_radius_m)
      .def_readwrite("zeta", &netgraph::GraphParams::zeta)
      .def_readwrite("kappa", &netgraph::GraphParams::kappa)
      .def_readwrite("y0", &netgraph::GraphParams::y0)
      .def_readwrite("sir_cap", &netgraph::GraphParams::sir_cap)
      .def_readwrite("capacity_floor_rel",
                     &netgraph::GraphParams::capacity_floor_rel)
      .def_readwrite("forbid_terminal_links",
                     &netgraph::GraphParams::forbid_terminal_links)
      .def("validate", &netgraph::GraphParams::validate);

  py::class_<netgraph::NetworkState>(m, "NetworkState")
      .def(py::init<>())
      .def_readwrite("positions", &netgraph::NetworkState::positions)
      .def_readwrite("kinds", &netgraph::NetworkState::kinds)
      .def_readwrite("interferers", &netgraph::NetworkState::interferers)
      .def_readwrite("range_threshold_m",
                     &netgraph::NetworkState::range_threshold_m)
      .def_readwrite("channel", &netgraph::NetworkState::channel)
      .def_readwrite("graph", &netgraph::NetworkState::graph)
      .def("size", &netgraph::NetworkState::size)
      .def("validate", &netgraph::NetworkState::validate);

  m.def("smoothed_step", &netgraph::smoothed_step, py::arg("y"),
        py::arg("zeta"), py::arg("kappa"), py::arg("y0"));
  m.def("sir", &netgraph::sir);
  m.def("link_capacity", &netgraph::link_capacity);

  py::class_<netgraph::CapacityGraph>(m, "CapacityGraph")
      .def_readonly("adjacency", &netgraph::CapacityGraph::adjacency)
      .def_readonly("degrees", &netgraph::CapacityGraph::degrees)
      .def("size", &netgraph::CapacityGraph::size)
      .def("edge_count", &netgraph::CapacityGraph::edge_count)
      .def("connected", &netgraph::CapacityGraph::connected);
  m.def("build_capacity_graph", &netgraph::build_capacity_graph);
  m.def("make_graph", &netgraph::make_graph);

  py::class_<netgraph::WeightMatrix>(m, "WeightMatrix")
      .def(py::init<>())
      .def_readwrite("w", &netgraph::WeightMatrix::w)
      .def_static("uniform", &netgraph::WeightMatrix::uniform)
      .def_static("terminal_emphasis", &netgraph::WeightMatrix::terminal_emphasis,
                  py::arg("kinds"), py::arg("terminal_w"), py::arg("relay_w"));

  py::class_<netgraph::LaplacianSet>(m, "LaplacianSet")
      .def_readonly("combinatorial", &netgraph::LaplacianSet::combinatorial)
      .def_readonly("normalized", &netgraph::LaplacianSet::normalized)
      .def_readonly("weighted_normalized",
                    &netgraph::LaplacianSet::weighted_normalized)
      .def_readonly("weighted", &netgraph::LaplacianSet::weighted)
      .def_readonly("null_combinatorial",
                    &netgraph::LaplacianSet::null_combinatorial)
      .def_readonly("null_normalized", &netgraph::LaplacianSet::null_normalized)
      .def_readonly("null_weighted_normalized",
                    &netgraph::LaplacianSet::null_weighted_normalized)
      .def_readonly("null_weighted", &netgraph::LaplacianSet::null_weighted);
  m.def("laplacians", &netgraph::laplacians);

  // --- spectral --------------------------------------------------------------
  py::class_<spectral::SpectralResult>(m, "SpectralResult")
      .def_readonly("lambda2", &spectral::SpectralResult::lambda2)
      .def_readonly("fiedler_vector", &spectral::SpectralResult::fiedler_vector)
      .def_readonly("residual", &spectral::SpectralResult::residual)
      .def_readonly("spectral_gap", &spectral::SpectralResult::spectral_gap)
      .def_readonly("variant", &spectral::SpectralResult::variant);
  m.def("fiedler", &spectral::fiedler, py::arg("m"), py::arg("null_direction"),
        py::arg("variant") = "");
  m.def("cheeger_exact", &spectral::cheeger_exact);
  m.def("weighted_cheeger_exact", &spectral::weighted_cheeger_exact);

  py::class_<spectral::CommoditySpec>(m, "CommoditySpec")
      .def(py::init<>())
      .def_readwrite("source", &spectral::CommoditySpec::source)
      .def_readwrite("destination", &spectral::CommoditySpec::destination)
      .def_readwrite("demand", &spectral::CommoditySpec::demand)
      .def_readwrite("weights", &spectral::CommoditySpec::weights);

  py::class_<spectral::CheegerBoundsReport>(m, "CheegerBoundsReport")
      .def_readonly("lambda2_normalized",
                    &spectral::CheegerBoundsReport::lambda2_normalized)
      .def_readonly("cheeger_constant",
                    &spectral::CheegerBoundsReport::cheeger_constant)
      .def_readonly("lambda2_weighted",
                    &spectral::CheegerBoundsReport::lambda2_weighted)
      .def_readonly("weighted_cheeger_constant",
                    &spectral::CheegerBoundsReport::weighted_cheeger_constant)
      .def_readonly("delta_max", &spectral::CheegerBoundsReport::delta_max)
      .def_readonly("w_min", &spectral::CheegerBoundsReport::w_min)
      .def_readonly("normalized_bounds_hold",
                    &spectral::CheegerBoundsReport::normalized_bounds_hold)
      .def_readonly("weighted_bounds_hold",
                    &spectral::CheegerBoundsReport::weighted_bounds_hold)
      .def("all_hold", &spectral::CheegerBoundsReport::all_hold);
  m.def("verify_cheeger_bounds", &spectral::verify_cheeger_bounds);
  m.def("multi_weighted_cheeger_exact",
        [](const netgraph::CapacityGraph& g,
           const std::vector<spectral::CommoditySpec>& commodities, double p) {
          const spectral::MultiWeightedCheeger r =
              spectral::multi_weighted_cheeger_exact(g, commodities, p);
          return py::make_tuple(r.value, r.aggregate_weights);
        });
  m.def("min_multicut_exact", &spectral::min_multicut_exact);

  // --- flow --------------------------------------------------------------
  py::class_<flow::FlowResult>(m, "FlowResult")
      .def_readonly("value", &flow::FlowResult::value)
      .def_readonly("arc_flow", &flow::FlowResult::arc_flow)
      .def_readonly("min_cut", &flow::FlowResult::min_cut)
      .def_readonly("min_cut_capacity", &flow::FlowResult::min_cut_capacity);
  m.def("max_flow", &flow::max_flow, py::arg("g"), py::arg("source"),
        py::arg("destination"));

  py::class_<flow::MulticastResult>(m, "MulticastResult")
      .def_readonly("value", &flow::MulticastResult::value)
      .def_readonly("per_destination", &flow::MulticastResult::per_destination);
  m.def("multicast_flow", &flow::multicast_flow);

  py::class_<flow::ConcurrentFlowResult>(m, "ConcurrentFlowResult")
      .def_readonly("ratio", &flow::ConcurrentFlowResult::ratio)
      .def_readonly("routed", &flow::ConcurrentFlowResult::routed)
      .def_readonly("arc_flow", &flow::ConcurrentFlowResult::arc_flow)
      .def_readonly("phases", &flow::ConcurrentFlowResult::phases);
  m.def("max_concurrent_flow", &flow::max_concurrent_flow, py::arg("g"),
        py::arg("commodities"), py::arg("eps") = 0.01);
  m.def("verify_flow", &flow::verify_flow);

  // --- decentralized eigen-solver -----------------------------------------
  py::class_<distfiedler::Options>(m, "DistFiedlerOptions")
      .def(py::init<>())
      .def_readwrite("outer_iterations",
                     &distfiedler::Options::outer_iterations)
      .def_readwrite("gossip_rounds", &distfiedler::Options::gossip_rounds)
      .def_readwrite("seed", &distfiedler::Options::seed)
      .def_readwrite("record_deliveries",
                     &distfiedler::Options::record_deliveries);

  py::class_<distfiedler::Trace>(m, "DistFiedlerTrace")
      .def_readonly("entries", &distfiedler::Trace::entries)
      .def_readonly("lambda2_estimate", &distfiedler::Trace::lambda2_estimate)
      .def_readonly("error_per_iteration",
                    &distfiedler::Trace::error_per_iteration)
      .def_readonly("messages", &distfiedler::Trace::messages)
      .def_readonly("messages_per_iteration",
                    &distfiedler::Trace::messages_per_iteration)
      .def_readonly("krylov_steps", &distfiedler::Trace::krylov_steps)
      .def_readonly("deliveries", &distfiedler::Trace::deliveries);
  m.def("distributed_fiedler", &distfiedler::distributed_fiedler, py::arg("g"),
        py::arg("w"), py::arg("opt") = distfiedler::Options{});

  // --- movement ------------------------------------------------------------
  py::class_<mobility::Config>(m, "MobilityConfig")
      .def(py::init<>())
      .def_readwrite("step_time_s", &mobility::Config::step_time_s)
      .def_readwrite("v_max_mps", &mobility::Config::v_max_mps)
      .def_readwrite("height_floor_m", &mobility::Config::height_floor_m)
      .def_readwrite("height_ceiling_m", &mobility::Config::height_ceiling_m)
      .def_readwrite("max_iterations", &mobility::Config::max_iterations)
      .def_readwrite("convergence_tol", &mobility::Config::convergence_tol)
      .def_readwrite("fd_step_m", &mobility::Config::fd_step_m)
      .def_readwrite("degenerate_gap", &mobility::Config::degenerate_gap)
      .def_readwrite("max_backtracks", &mobility::Config::max_backtracks)
      .def("validate", &mobility::Config::validate);

  py::enum_<mobility::FiedlerSource>(m, "FiedlerSource")
      .value("Centralized", mobility::FiedlerSource::Centralized)
      .value("Distributed", mobility::FiedlerSource::Distributed);

  py::class_<mobility::ConnectivityEval>(m, "ConnectivityEval")
      .def_readonly("lambda2", &mobility::ConnectivityEval::lambda2)
      .def_readonly("gap", &mobility::ConnectivityEval::gap)
      .def_readonly("vector", &mobility::ConnectivityEval::vector)
      .def_readonly("connected", &mobility::ConnectivityEval::connected);
  m.def("eval_connectivity", &mobility::eval_connectivity);
  m.def("lambda2_gradient",
        py::overload_cast<const netgraph::NetworkState&,
                          const netgraph::WeightMatrix&, int, double, double>(
            &mobility::lambda2_gradient),
        py::arg("state"), py::arg("w"), py::arg("node"),
        py::arg("fd_step") = 1e-3, py::arg("degenerate_gap") = 1e-8);

  py::class_<mobility::SlotRecord>(m, "SlotRecord")
      .def_readonly("slot", &mobility::SlotRecord::slot)
      .def_readonly("positions", &mobility::SlotRecord::positions)
      .def_readonly("lambda2", &mobility::SlotRecord::lambda2)
      .def_readonly("flow_value", &mobility::SlotRecord::flow_value)
      .def_readonly("displacement_m", &mobility::SlotRecord::displacement_m);

  py::class_<mobility::TrajectoryLog>(m, "TrajectoryLog")
      .def_readonly("slots", &mobility::TrajectoryLog::slots)
      .def_readonly("slot_duration_s", &mobility::TrajectoryLog::slot_duration_s)
      .def_readonly("cruise_speed_mps",
                    &mobility::TrajectoryLog::cruise_speed_mps)
      .def_readonly("converged", &mobility::TrajectoryLog::converged)
      .def_readonly("stalled", &mobility::TrajectoryLog::stalled)
      .def_readonly("solver_traces", &mobility::TrajectoryLog::solver_traces);
  m.def("run_maxflow_trajectory", &mobility::run_maxflow_trajectory,
        py::arg("state"), py::arg("w"), py::arg("cfg"), py::arg("metric"),
        py::arg("source") = mobility::FiedlerSource::Centralized,
        py::arg("solver_options") = distfiedler::Options{});
  m.def("straight_line_trajectory", &mobility::straight_line_trajectory,
        py::arg("initial"), py::arg("final_positions"), py::arg("w"),
        py::arg("cfg"), py::arg("metric"), py::arg("total_time_s") = -1.0);
  m.def("computation_latency", &mobility::computation_latency,
        py::arg("data_bits"), py::arg("processing_rate"),
        py::arg("iterations"));

  // --- rotor energy ----------------------------------------------------------
  py::class_<energy::Params>(m, "EnergyParams")
      .def(py::init<>())
      .def_readwrite("air_density", &energy::Params::air_density)
      .def_readwrite("drag_coefficient", &energy::Params::drag_coefficient)
      .def_readwrite("reference_area_m2", &energy::Params::reference_area_m2)
      .def_readwrite("blade_chord_m", &energy::Params::blade_chord_m)
      .def_readwrite("blade_count", &energy::Params::blade_count)
      .def_readwrite("angular_velocity_rad_s",
                     &energy::Params::angular_velocity_rad_s)
      .def_readwrite("rotor_radius_m", &energy::Params::rotor_radius_m)
      .def_readwrite("weight_n", &energy::Params::weight_n)
      .def_readwrite("clamp_descent", &energy::Params::clamp_descent)
      .def("validate", &energy::Params::validate);

  py::enum_<energy::VerticalDirection>(m, "VerticalDirection")
      .value("Climb", energy::VerticalDirection::Climb)
      .value("Descend", energy::VerticalDirection::Descend);

  m.def("induced_velocity_ratio", &energy::induced_velocity_ratio);
  m.def("parasitic_power", &energy::parasitic_power);
  m.def("induced_power", &energy::induced_power);
  m.def("horizontal_power", &energy::horizontal_power);
  m.def("vertical_power", &energy::vertical_power);
  m.def("straight_leg_energy", &energy::straight_leg_energy);

  py::class_<energy::SegmentEnergy>(m, "SegmentEnergy")
      .def_readonly("slot", &energy::SegmentEnergy::slot)
      .def_readonly("duration_s", &energy::SegmentEnergy::duration_s)
      .def_readonly("distance_m", &energy::SegmentEnergy::distance_m)
      .def_readonly("v_h", &energy::SegmentEnergy::v_h)
      .def_readonly("v_v", &energy::SegmentEnergy::v_v)
      .def_readonly("horizontal_power_w",
                    &energy::SegmentEnergy::horizontal_power_w)
      .def_readonly("vertical_power_w", &energy::SegmentEnergy::vertical_power_w)
      .def_readonly("energy_j", &energy::SegmentEnergy::energy_j);

  py::class_<energy::NodeEnergy>(m, "NodeEnergy")
      .def_readonly("node", &energy::NodeEnergy::node)
      .def_readonly("path_length_m", &energy::NodeEnergy::path_length_m)
      .def_readonly("displacement_m", &energy::NodeEnergy::displacement_m)
      .def_readonly("moving_time_s", &energy::NodeEnergy::moving_time_s)
      .def_readonly("energy_j", &energy::NodeEnergy::energy_j)
      .def_readonly("segments", &energy::NodeEnergy::segments);

  py::class_<energy::EnergyReport>(m, "EnergyReport")
      .def_readonly("nodes", &energy::EnergyReport::nodes);
  m.def("trajectory_energy", &energy::trajectory_energy);
  m.def("energy_savings", &energy::energy_savings, py::arg("e_efficient"),
        py::arg("e_maxflow"));

  // --- scenario ---------------------------------------------------------
  py::enum_<scenario::Mode>(m, "Mode")
      .value("Weighted", scenario::Mode::Weighted)
      .value("Unweighted", scenario::Mode::Unweighted)
      .value("RandomBaseline", scenario::Mode::RandomBaseline)
      .value("EnergyEfficient", scenario::Mode::EnergyEfficient);

  py::enum_<scenario::FlowEval>(m, "FlowEval")
      .value("Single", scenario::FlowEval::Single)
      .value("Multicast", scenario::FlowEval::Multicast)
      .value("MultiUnicast", scenario::FlowEval::MultiUnicast);

  py::class_<scenario::Commodity>(m, "Commodity")
      .def(py::init<>())
      .def_readwrite("source", &scenario::Commodity::source)
      .def_readwrite("destination", &scenario::Commodity::destination)
      .def_readwrite("demand", &scenario::Commodity::demand);

  py::class_<scenario::Scenario>(m, "Scenario")
      .def(py::init<>())
      .def_readwrite("name", &scenario::Scenario::name)
      .def_readwrite("region_extent_m", &scenario::Scenario::region_extent_m)
      .def_readwrite("sources", &scenario::Scenario::sources)
      .def_readwrite("destinations", &scenario::Scenario::destinations)
      .def_readwrite("relays", &scenario::Scenario::relays)
      .def_readwrite("interferers", &scenario::Scenario::interferers)
      .def_readwrite("commodities", &scenario::Scenario::commodities)
      .def_readwrite("mode", &scenario::Scenario::mode)
      .def_readwrite("flow_eval", &scenario::Scenario::flow_eval)
      .def_readwrite("runs", &scenario::Scenario::runs)
      .def_readwrite("seed", &scenario::Scenario::seed)
      .def_readwrite("terminal_weight", &scenario::Scenario::terminal_weight)
      .def_readwrite("relay_weight", &scenario::Scenario::relay_weight)
      .def_readwrite("flow_eps", &scenario::Scenario::flow_eps)
      .def_readwrite("range_threshold_m", &scenario::Scenario::range_threshold_m)
      .def_readwrite("channel", &scenario::Scenario::channel)
      .def_readwrite("graph", &scenario::Scenario::graph)
      .def_readwrite("mobility", &scenario::Scenario::mobility)
      .def_readwrite("fiedler_source", &scenario::Scenario::fiedler_source)
      .def_readwrite("distfiedler", &scenario::Scenario::distfiedler)
      .def_readwrite("energy", &scenario::Scenario::energy)
      .def_readwrite("data_bits", &scenario::Scenario::data_bits)
      .def_readwrite("processing_rate", &scenario::Scenario::processing_rate)
      .def("node_count", &scenario::Scenario::node_count)
      .def("source_ids", &scenario::Scenario::source_ids)
      .def("destination_ids", &scenario::Scenario::destination_ids)
      .def("relay_ids", &scenario::Scenario::relay_ids)
      .def("initial_state", &scenario::Scenario::initial_state)
      .def("weights", &scenario::Scenario::weights)
      .def("metric", &scenario::Scenario::metric)
      .def("metric_name", &scenario::Scenario::metric_name)
      .def("validate", &scenario::Scenario::validate);

  m.def("parse_scenario", &scenario::parse_scenario, py::arg("text"),
        py::arg("origin") = "<inline>");
  m.def("load_scenario", &scenario::load_scenario);

  py::class_<scenario::BaselineResult>(m, "BaselineResult")
      .def_readonly("mean", &scenario::BaselineResult::mean)
      .def_readonly("stddev", &scenario::BaselineResult::stddev)
      .def_readonly("per_run", &scenario::BaselineResult::per_run)
      .def_readonly("positions_per_run",
                    &scenario::BaselineResult::positions_per_run);
  m.def("random_stationary_baseline", &scenario::random_stationary_baseline,
        py::arg("sc"), py::arg("runs"), py::arg("seed"));

  py::class_<scenario::EnergyRow>(m, "EnergyRow")
      .def_readonly("abs_id", &scenario::EnergyRow::abs_id)
      .def_readonly("d_m", &scenario::EnergyRow::d_m)
      .def_readonly("e_maxflow_j", &scenario::EnergyRow::e_maxflow_j)
      .def_readonly("e_efficient_j", &scenario::EnergyRow::e_efficient_j)
      .def_readonly("savings_pct", &scenario::EnergyRow::savings_pct);

  py::class_<scenario::ExperimentResult>(m, "ExperimentResult")
      .def_readonly("mode", &scenario::ExperimentResult::mode)
      .def_readonly("files", &scenario::ExperimentResult::files)
      .def_readonly("slots_executed", &scenario::ExperimentResult::slots_executed)
      .def_readonly("converged", &scenario::ExperimentResult::converged)
      .def_readonly("stalled", &scenario::ExperimentResult::stalled)
      .def_readonly("final_flow", &scenario::ExperimentResult::final_flow)
      .def_readonly("final_lambda2", &scenario::ExperimentResult::final_lambda2)
      .def_readonly("baseline_mean", &scenario::ExperimentResult::baseline_mean)
      .def_readonly("baseline_stddev",
                    &scenario::ExperimentResult::baseline_stddev)
      .def_readonly("straight_final_flow",
                    &scenario::ExperimentResult::straight_final_flow)
      .def_readonly("computation_latency_s",
                    &scenario::ExperimentResult::computation_latency_s)
      .def_readonly("energy", &scenario::ExperimentResult::energy);
  m.def("run_experiment", &scenario::run_experiment, py::arg("sc"),
        py::arg("out_dir"));
}
