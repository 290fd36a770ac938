// include/mecgame/experiments.hpp
//
// Experiment drivers behind the command line: each takes a validated
// scenario and returns a result table plus a machine-readable status. Every
// number in a table is a function of the scenario (and its seeds) alone.

#pragma once

#include <string>

#include "mecgame/result_table.hpp"
#include "mecgame/scenario.hpp"

namespace mecgame {

struct RunStatus {
  std::string status = "ok";   // ok | not_converged | validation_failed | error
  int sweeps = 0;              // best-response sweeps, summed over runs
  double residual = 0.0;       // worst equilibrium residual over runs
  double wall_time_ms = 0.0;

  bool ok() const { return status == "ok"; }
  std::string to_json(const ResultTable& table) const;
};

struct CommandOutput {
  ResultTable table;
  RunStatus status;
};

enum class SolveKind { Nash, Social, Priced, Regulated };
SolveKind solve_kind_from_string(const std::string& name);

enum class SweepAxis { Users, Distance };

/// One equilibrium, one row per user. Priced: optimal (homogeneous) or
/// uniform (heterogeneous) price; Regulated: system.price.
CommandOutput cmd_solve(const ScenarioFile& scenario, SolveKind kind);

/// Traces (series, sweep, mean_x, delta_x) of the unpriced selfish game, the
/// optimally priced game and the social iteration.
CommandOutput cmd_convergence(const ScenarioFile& scenario);

/// Nash vs social equilibrium over the n or distance grid.
CommandOutput cmd_sweep(const ScenarioFile& scenario, SweepAxis axis);

/// Queueing simulation at the social equilibrium against the analytic
/// offloading frequencies and delays.
CommandOutput cmd_sim_validate(const ScenarioFile& scenario);

}  // namespace mecgame
