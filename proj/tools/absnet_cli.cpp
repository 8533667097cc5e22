// Command-line front end: run scenarios, validate scenario files, and
// compute random stationary baselines.  Exit codes: 0 success, 2 invalid
// input (scenario or flags), 3 internal error.
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "absnet/scenario.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

void write_json(const std::string& out_dir, const char* name,
                const json& payload) {
  if (out_dir.empty()) return;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  std::ofstream out(fs::path(out_dir) / name, std::ios::binary);
  if (out.good()) out << payload.dump(2) << '\n';
}

json result_to_json(const absnet::scenario::ExperimentResult& res) {
  json j;
  j["mode"] = absnet::scenario::to_string(res.mode);
  j["files"] = res.files;
  if (res.mode == absnet::scenario::Mode::RandomBaseline) {
    j["baseline_mean"] = res.baseline_mean;
    j["baseline_stddev"] = res.baseline_stddev;
  } else {
    j["slots_executed"] = res.slots_executed;
    j["converged"] = res.converged;
    j["stalled"] = res.stalled;
    j["final_flow"] = res.final_flow;
    j["final_lambda2"] = res.final_lambda2;
  }
  if (res.mode == absnet::scenario::Mode::EnergyEfficient) {
    j["straight_final_flow"] = res.straight_final_flow;
    j["computation_latency_s"] = res.computation_latency_s;
    json rows = json::array();
    for (const absnet::scenario::EnergyRow& row : res.energy)
      rows.push_back({{"abs_id", row.abs_id},
                      {"D_m", row.d_m},
                      {"E_maxflow_J", row.e_maxflow_j},
                      {"E_efficient_J", row.e_efficient_j},
                      {"savings_pct", row.savings_pct}});
    j["energy"] = rows;
  }
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"aerial relay network formation toolkit"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string out_dir;
  std::string mode_override;
  int iters_override = 0;
  int runs_override = 0;
  std::uint64_t seed_override = 0;

  CLI::App* run = app.add_subcommand(
      "run", "execute a scenario and write its CSV outputs");
  run->add_option("--scenario", scenario_path, "scenario file")->required();
  run->add_option("--out", out_dir, "output directory")->required();
  CLI::Option* run_mode = run->add_option(
      "--mode", mode_override,
      "override mode (weighted|unweighted|random-baseline|energy-efficient)");
  CLI::Option* run_iters = run->add_option(
      "--iters", iters_override, "override mobility.max_iterations");
  CLI::Option* run_runs =
      run->add_option("--runs", runs_override, "override runs");
  CLI::Option* run_seed =
      run->add_option("--seed", seed_override, "override seed");

  CLI::App* validate = app.add_subcommand(
      "validate", "parse and check a scenario file, writing nothing");
  validate->add_option("--scenario", scenario_path, "scenario file")
      ->required();

  CLI::App* baseline = app.add_subcommand(
      "baseline", "evaluate the random stationary placement baseline");
  baseline->add_option("--scenario", scenario_path, "scenario file")
      ->required();
  CLI::Option* base_runs =
      baseline->add_option("--runs", runs_override, "number of placements");
  CLI::Option* base_seed =
      baseline->add_option("--seed", seed_override, "override seed");
  baseline->add_option("--out", out_dir, "optional output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints usage/help text
    return e.get_name() == "CallForHelp" ? 0 : 2;
  }

  try {
    absnet::scenario::Scenario sc =
        absnet::scenario::load_scenario(scenario_path);

    if (*validate) {
      sc.initial_state().validate();
      std::cout << "scenario ok: mode=" << absnet::scenario::to_string(sc.mode)
                << " flow_eval=" << absnet::scenario::to_string(sc.flow_eval)
                << " nodes=" << sc.node_count()
                << " (sources=" << sc.sources.size()
                << " destinations=" << sc.destinations.size()
                << " abs=" << sc.relays.size()
                << ") interferers=" << sc.interferers.size()
                << " commodities=" << sc.commodities.size() << '\n';
      return 0;
    }

    if (*run) {
      if (run_mode->count() > 0)
        sc.mode = absnet::scenario::parse_mode(mode_override);
      if (run_iters->count() > 0) sc.mobility.max_iterations = iters_override;
      if (run_runs->count() > 0) sc.runs = runs_override;
      if (run_seed->count() > 0) sc.seed = seed_override;

      const absnet::scenario::ExperimentResult res =
          absnet::scenario::run_experiment(sc, out_dir);
      write_json(out_dir, "result.json", result_to_json(res));
      std::cout << "mode: " << absnet::scenario::to_string(res.mode) << '\n';
      if (res.mode == absnet::scenario::Mode::RandomBaseline) {
        std::cout << "baseline mean: " << absnet::format_number(res.baseline_mean)
                  << "\nbaseline stddev: "
                  << absnet::format_number(res.baseline_stddev) << '\n';
      } else {
        std::cout << "slots executed: " << res.slots_executed
                  << "\nconverged: " << (res.converged ? "yes" : "no")
                  << "\nstalled: " << (res.stalled ? "yes" : "no")
                  << "\nfinal flow metric: "
                  << absnet::format_number(res.final_flow)
                  << "\nfinal connectivity: "
                  << absnet::format_number(res.final_lambda2) << '\n';
        if (res.mode == absnet::scenario::Mode::EnergyEfficient)
          std::cout << "straight replay flow: "
                    << absnet::format_number(res.straight_final_flow)
                    << "\ncomputation latency s: "
                    << absnet::format_number(res.computation_latency_s)
                    << '\n';
      }
      for (const std::string& f : res.files)
        std::cout << "wrote " << f << '\n';
      return 0;
    }

    // baseline subcommand
    const int runs = base_runs->count() > 0 ? runs_override : sc.runs;
    const std::uint64_t seed =
        base_seed->count() > 0 ? seed_override : sc.seed;
    if (!out_dir.empty()) {
      sc.mode = absnet::scenario::Mode::RandomBaseline;
      sc.runs = runs;
      sc.seed = seed;
      const absnet::scenario::ExperimentResult res =
          absnet::scenario::run_experiment(sc, out_dir);
      write_json(out_dir, "result.json", result_to_json(res));
      std::cout << "baseline mean: " << absnet::format_number(res.baseline_mean)
                << "\nbaseline stddev: "
                << absnet::format_number(res.baseline_stddev) << '\n';
      for (const std::string& f : res.files)
        std::cout << "wrote " << f << '\n';
    } else {
      const absnet::scenario::BaselineResult b =
          absnet::scenario::random_stationary_baseline(sc, runs, seed);
      std::cout << "baseline mean: " << absnet::format_number(b.mean)
                << "\nbaseline stddev: " << absnet::format_number(b.stddev)
                << "\nruns: " << b.per_run.size() << '\n';
    }
    return 0;
  } catch (const absnet::ValidationError& e) {
    write_json(out_dir, "error.json",
               {{"status", "error"}, {"kind", "validation"},
                {"message", e.what()}});
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    write_json(out_dir, "error.json",
               {{"status", "error"}, {"kind", "internal"},
                {"message", e.what()}});
    std::cerr << "internal error: " << e.what() << '\n';
    return 3;
  }
}
