// tools/mecgame_cli.cpp
//
//   mecgame solve    --scenario s.yaml [--kind ne|se|priced|regulated]
//   mecgame converge --scenario s.yaml
//   mecgame sweep    --scenario s.yaml --axis n|d
//   mecgame simulate --scenario s.yaml
//
// Common: --out <dir> --seed <u64> --format csv|json. Without --out the
// table goes to stdout and the status JSON to stderr.
//
// Exit codes: 0 ok, 1 bad input or runtime error, 2 not converged or a
// validation check failed.

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "mecgame/experiments.hpp"
#include "mecgame/scenario.hpp"

namespace fs = std::filesystem;
using namespace mecgame;

namespace {

struct CommonArgs {
  std::string scenario;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::string format = "csv";
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--scenario", args.scenario, "scenario YAML file")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--out", args.out_dir, "output directory (default: stdout)");
  cmd->add_option("--seed", args.seed, "override scenario seeds");
  cmd->add_option("--format", args.format, "table format")
      ->check(CLI::IsMember({"csv", "json"}));
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

int emit(const std::string& name, const CommonArgs& args, const ScenarioFile& scenario,
         CommandOutput out) {
  out.table.metadata()["command"] = name;
  out.table.metadata()["scenario"] = args.scenario;
  out.table.metadata()["seed"] = std::to_string(scenario.experiment.seed);
  out.table.metadata()["timestamp"] = utc_timestamp();

  const std::string body = args.format == "json" ? out.table.to_json() : out.table.to_csv();
  const std::string status = out.status.to_json(out.table);
  if (args.out_dir.empty()) {
    std::cout << body;
    std::cerr << status;
  } else {
    fs::create_directories(args.out_dir);
    std::ofstream(fs::path(args.out_dir) / (name + "." + args.format), std::ios::binary) << body;
    std::ofstream(fs::path(args.out_dir) / (name + "_status.json"), std::ios::binary) << status;
  }
  return out.status.ok() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Equilibria of the multi-user edge offloading game"};
  app.set_version_flag("--version", std::string(MECGAME_VERSION));
  app.require_subcommand(1);

  CommonArgs args;
  std::string kind = "ne";
  std::string axis = "n";

  auto* solve = app.add_subcommand("solve", "solve one equilibrium");
  add_common(solve, args);
  solve->add_option("--kind", kind, "ne | se | priced | regulated")
      ->check(CLI::IsMember({"ne", "se", "priced", "regulated"}));

  auto* converge = app.add_subcommand("converge", "best-response convergence traces");
  add_common(converge, args);

  auto* sweep = app.add_subcommand("sweep", "Nash vs social over a parameter grid");
  add_common(sweep, args);
  sweep->add_option("--axis", axis, "n | d")->check(CLI::IsMember({"n", "d"}));

  auto* simulate = app.add_subcommand("simulate", "queueing simulation at the social optimum");
  add_common(simulate, args);

  CLI11_PARSE(app, argc, argv);

  try {
    ScenarioFile scenario = load_scenario(args.scenario);
    if (args.seed) scenario.set_seed(*args.seed);
    if (*solve) return emit("solve", args, scenario, cmd_solve(scenario, solve_kind_from_string(kind)));
    if (*converge) return emit("converge", args, scenario, cmd_convergence(scenario));
    if (*sweep) {
      const SweepAxis a = axis == "d" ? SweepAxis::Distance : SweepAxis::Users;
      return emit("sweep_" + axis, args, scenario, cmd_sweep(scenario, a));
    }
    if (*simulate) return emit("simulate", args, scenario, cmd_sim_validate(scenario));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    std::cerr << R"({"status": "error", "sweeps": 0, "residual": null, "wall_time_ms": 0})" << "\n";
    return 1;
  }
  return 1;
}
