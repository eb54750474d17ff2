#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include "netarm/analysis.hpp"
#include "netarm/config_io.hpp"
#include "netarm/csv.hpp"
#include "netarm/presets.hpp"
#include "netarm/simulation.hpp"

namespace {

namespace fs = std::filesystem;
using namespace netarm;

struct Target {
  sim::ScenarioConfig config;
  io::PresetKind kind = io::PresetKind::kSingleRun;
};

Target resolve(const std::string& name_or_path) {
  if (auto preset = io::find_preset(name_or_path))
    return {preset->config, preset->kind};
  if (!fs::exists(name_or_path))
    throw ConfigError("no such preset or config file: " + name_or_path);
  return {io::load_config(name_or_path), io::PresetKind::kSingleRun};
}

int run_command(const std::string& target_name, const std::string& out_dir,
                std::optional<std::uint64_t> seed, std::optional<double> dt,
                std::optional<double> t_end,
                std::optional<std::string> integrator, int jobs) {
  Target target = resolve(target_name);
  sim::ScenarioConfig& cfg = target.config;
  if (seed) cfg.seed = *seed;
  if (dt) cfg.dt = *dt;
  if (t_end) cfg.t_end = *t_end;
  if (integrator) {
    if (*integrator == "rk4")
      cfg.integrator = sim::Integrator::kRk4;
    else if (*integrator == "euler")
      cfg.integrator = sim::Integrator::kEuler;
    else
      throw ConfigError("integrator: expected rk4 or euler");
  }

  const auto problems = io::validate_config(cfg);
  if (!problems.empty()) {
    for (const std::string& p : problems)
      std::cerr << "error: invalid scenario: " << p << "\n";
    return 2;
  }

  fs::create_directories(out_dir);
  if (target.kind == io::PresetKind::kTeleopSweep) {
    const double scales[] = {1.0, 2.0, 4.0, 8.0};
    const auto rows = analysis::damping_sweep_teleop(
        cfg, scales, cfg.teleop.tau_h, cfg.t_end, jobs);
    io::write_teleop_sweep_csv((fs::path(out_dir) / "sweep.csv").string(),
                               rows);
    for (const auto& row : rows)
      if (!row.ok) {
        std::cerr << "error: sweep row kd_scale=" << row.kd_scale << ": "
                  << row.error << "\n";
        return 1;
      }
    // Baseline trace for inspection.
    const sim::Trace trace = sim::run_scenario(cfg);
    io::write_trace_csv((fs::path(out_dir) / "trace.csv").string(), trace);
    const auto rep = analysis::consensus_report(trace, cfg.graph, 1e-3);
    io::write_report_csv((fs::path(out_dir) / "report.csv").string(), rep);
    std::cout << "wrote " << out_dir << "/sweep.csv (" << rows.size()
              << " rows), trace.csv, report.csv\n";
    return 0;
  }

  const sim::Trace trace = sim::run_scenario(cfg);
  io::write_trace_csv((fs::path(out_dir) / "trace.csv").string(), trace);
  const auto rep = analysis::consensus_report(trace, cfg.graph, 1e-3);
  io::write_report_csv((fs::path(out_dir) / "report.csv").string(), rep);
  std::cout << "wrote " << out_dir << "/trace.csv (" << trace.size()
            << " rows) and report.csv\n";
  std::cout << "settled=" << (rep.settled ? "true" : "false")
            << " settling_time=" << rep.settling_time
            << " final=(" << rep.final_plain(0) << ", " << rep.final_plain(1)
            << ")\n";
  return 0;
}

int validate_command(const std::string& target_name, bool emit) {
  Target target = resolve(target_name);
  const auto problems = io::validate_config(target.config);
  if (!problems.empty()) {
    for (const std::string& p : problems) std::cout << "violation: " << p << "\n";
    return 2;
  }
  if (emit) {
    std::cout << io::emit_config(target.config);
    return 0;
  }
  std::cout << "ok\n";
  if (target.config.mode != sim::ControllerMode::kTeleopPd) {
    sim::World world(target.config);
    const auto states = world.initial_states();
    Eigen::MatrixXd x_o0(target.config.n(), 2);
    for (int i = 0; i < target.config.n(); ++i) x_o0.row(i) = states[i].x_o;
    const Eigen::VectorXd value =
        graph::predicted_consensus_value(target.config.graph, x_o0);
    std::cout << "predicted consensus value: (" << value(0) << ", " << value(1)
              << ")\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Networked-arm consensus simulator"};
  app.require_subcommand(1);

  std::string target;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
  std::optional<double> dt, t_end;
  std::optional<std::string> integrator;
  int jobs = 1;
  bool emit = false;

  CLI::App* run = app.add_subcommand("run", "Run a preset or a config file");
  run->add_option("target", target, "preset name or config path")->required();
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--seed", seed, "override the scenario seed");
  run->add_option("--dt", dt, "override the integration step (s)");
  run->add_option("--t-end", t_end, "override the run length (s)");
  run->add_option("--integrator", integrator, "rk4 or euler");
  run->add_option("--jobs", jobs, "parallel sweep rows");

  CLI::App* validate =
      app.add_subcommand("validate", "Check a scenario without running it");
  validate->add_option("target", target, "preset name or config path")
      ->required();
  validate->add_flag("--emit", emit, "print the normalized config JSON");

  CLI::App* presets = app.add_subcommand("presets", "List bundled presets");

  try {
    app.parse(argc, argv);
    if (presets->parsed()) {
      for (const std::string& name : netarm::io::preset_names())
        std::cout << name << "\n";
      return 0;
    }
    if (run->parsed())
      return run_command(target, out_dir, seed, dt, t_end, integrator, jobs);
    return validate_command(target, emit);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const netarm::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
