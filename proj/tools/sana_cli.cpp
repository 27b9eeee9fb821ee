// Command-line front end: run, sweep, validate, replay.
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "sana/engine.hpp"
#include "sana/report.hpp"

namespace fs = std::filesystem;
using namespace sana;

namespace {

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kCheckFailed = 2;

bool rates_in_range(const Metrics& m) {
  for (const auto& r : {m.prevention_rate, m.overhead}) {
    if (r && (*r < 0.0 || *r > 1.0)) return false;
  }
  return true;
}

int cmd_run(const std::string& scenario, std::uint64_t seed, std::optional<TimeStep> steps, const std::string& out,
            const std::string& format, bool check) {
  const ScenarioConfig config = load_scenario(scenario);
  const auto fmt = parse_report_format(format);
  RunResult result = run(config, seed, steps);

  fs::create_directories(out);
  const auto log_path = (fs::path(out) / "events.log").string();
  const auto report_path = (fs::path(out) / ("metrics." + format)).string();
  result.log.write_file(log_path);
  emit_report(result.metrics, seed, fmt, report_path);
  std::cout << render_json(result.metrics);

  if (!check) return kOk;
  bool ok = rates_in_range(result.metrics);
  if (compute_metrics(EventLog::read_file(log_path)) != result.metrics) {
    std::cerr << "check: replayed metrics differ\n";
    ok = false;
  }
  if (run(config, seed, steps).log.to_text() != result.log.to_text()) {
    std::cerr << "check: rerun produced a different log\n";
    ok = false;
  }
  return ok ? kOk : kCheckFailed;
}

int cmd_sweep(const std::string& scenario, const std::string& grid, const std::string& seeds,
              const std::string& out, const std::string& format, bool check) {
  const ScenarioConfig config = load_scenario(scenario);
  const auto fmt = parse_report_format(format);
  const Table table = sweep(config, load_grid(grid), parse_seed_range(seeds));
  if (out.empty()) {
    std::cout << (fmt == ReportFormat::Csv ? render_csv(table) : render_json(table));
  } else {
    emit_report(table, fmt, out);
  }
  if (!check) return kOk;
  for (const auto& row : table.rows) {
    if (!rates_in_range(row.metrics)) return kCheckFailed;
  }
  return kOk;
}

int cmd_validate(const std::string& scenario) {
  const ScenarioConfig config = load_scenario(scenario);
  World world(config, config.seed);
  std::cout << "ok: " << config.name << " (" << world.state().network.node_count() << " nodes, "
            << world.state().network.links().size() << " links)\n";
  try {
    validate_scenario(config, 2);
  } catch (const Error& e) {
    std::cout << "warning: no station redundancy (" << e.what() << ")\n";
  }
  return kOk;
}

int cmd_replay(const std::string& log, const std::string& format) {
  const Metrics m = compute_metrics(EventLog::read_file(log));
  if (parse_report_format(format) == ReportFormat::Json) {
    std::cout << render_json(m);
  } else {
    Table t;
    t.rows.push_back({{}, 0, m});
    std::cout << render_csv(t);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Artificial immune system network simulator"};
  app.require_subcommand(1);

  std::string scenario, grid, seeds = "1", out_dir = "out", out, format = "json", log;
  std::uint64_t seed = 1;
  std::optional<TimeStep> steps;
  bool check = false;

  auto* run_cmd = app.add_subcommand("run", "Run one scenario");
  run_cmd->add_option("--scenario", scenario)->required();
  run_cmd->add_option("--seed", seed);
  run_cmd->add_option("--steps", steps);
  run_cmd->add_option("--out", out_dir);
  run_cmd->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
  run_cmd->add_flag("--check", check, "Verify replay and determinism; exit 2 on failure");

  auto* sweep_cmd = app.add_subcommand("sweep", "Run a parameter grid over a seed range");
  sweep_cmd->add_option("--scenario", scenario)->required();
  sweep_cmd->add_option("--grid", grid)->required();
  sweep_cmd->add_option("--seeds", seeds);
  sweep_cmd->add_option("--out", out);
  sweep_cmd->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
  sweep_cmd->add_flag("--check", check);

  auto* validate_cmd = app.add_subcommand("validate", "Check a scenario file");
  validate_cmd->add_option("--scenario", scenario)->required();

  auto* replay_cmd = app.add_subcommand("replay", "Recompute metrics from an event log");
  replay_cmd->add_option("--log", log)->required();
  replay_cmd->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) return cmd_run(scenario, seed, steps, out_dir, format, check);
    if (*sweep_cmd) return cmd_sweep(scenario, grid, seeds, out, format, check);
    if (*validate_cmd) return cmd_validate(scenario);
    if (*replay_cmd) return cmd_replay(log, format);
  } catch (const Error& e) {
    std::cerr << e.code() << ": " << e.what() << "\n";
    return kInvalid;
  }
  return kOk;
}
