// Experiment drivers behind the command line.

#include <cmath>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "mecgame/experiments.hpp"
#include "mecgame/homogeneous.hpp"

using namespace mecgame;

#ifndef MECGAME_SCENARIO_DIR
#define MECGAME_SCENARIO_DIR "scenarios"
#endif

namespace {

const std::string kDir = MECGAME_SCENARIO_DIR;

double as_double(const Cell& c) { return std::get<double>(c); }

ScenarioFile reference(int n, double epsilon) {
  ScenarioFile s = load_scenario(kDir + "/homogeneous.yaml");
  s.set_user_count(n);
  s.system.epsilon = epsilon;
  return s;
}

// Final mean_x of each series in a convergence table.
std::map<std::string, double> final_means(const ResultTable& t) {
  std::map<std::string, double> out;
  for (std::size_t r = 0; r < t.size(); ++r) {
    out[std::get<std::string>(t.at(r, "series"))] = as_double(t.at(r, "mean_x"));
  }
  return out;
}

}  // namespace

TEST_SUITE("experiments") {

TEST_CASE("solve emits one row per user") {
  const ScenarioFile s = reference(100, 1e-3);
  const CommandOutput ne = cmd_solve(s, SolveKind::Nash);
  CHECK(ne.status.ok());
  REQUIRE(ne.table.size() == 100);
  const double x = solve_ne_homogeneous({100, std::get<HomogeneousUsers>(s.users).profile,
                                         s.system}).x[0];
  CHECK(as_double(ne.table.at(0, "x")) == x);
  CHECK(ne.status.residual < 1e-8);
  const CommandOutput priced = cmd_solve(s, SolveKind::Priced);
  CHECK(priced.status.sweeps > 0);
  CHECK(as_double(priced.table.at(0, "price")) == doctest::Approx(1.50365).epsilon(1e-5));
  CHECK_THROWS_AS(solve_kind_from_string("xx"), std::invalid_argument);
}

TEST_CASE("convergence traces reach the closed-form references") {
  const ScenarioFile s = reference(100, 1e-9);
  const CommandOutput out = cmd_convergence(s);
  CHECK(out.status.ok());
  const auto means = final_means(out.table);
  REQUIRE(means.size() == 3);
  const auto& prof = std::get<HomogeneousUsers>(s.users).profile;
  const double ne = solve_ne_homogeneous({100, prof, s.system}).x[0];
  const double se = solve_se_homogeneous({100, prof, s.system}).x[0];
  CHECK(std::abs(means.at("regulated_p0") - ne) < 1e-3);
  CHECK(std::abs(means.at("regulated_optimal") - se) < 1e-3);
  CHECK(std::abs(means.at("social") - se) < 1e-3);
  CHECK(as_double(out.table.at(0, "reference_mean_x")) == ne);
}

TEST_CASE("single-user traces coincide") {
  const CommandOutput out = cmd_convergence(reference(1, 1e-3));
  const auto means = final_means(out.table);
  CHECK(means.at("regulated_p0") == doctest::Approx(means.at("social")).epsilon(1e-9));
  CHECK(means.at("regulated_optimal") == doctest::Approx(means.at("social")).epsilon(1e-9));
}

TEST_CASE("ring convergence: priced and social limits agree") {
  ScenarioFile s = load_scenario(kDir + "/ring.yaml");
  s.system.epsilon = 1e-9;
  const CommandOutput out = cmd_convergence(s);
  CHECK(out.status.ok());
  const auto means = final_means(out.table);
  CHECK(std::abs(means.at("regulated_optimal") - means.at("social")) < 1e-3);
  CHECK(std::holds_alternative<std::monostate>(out.table.at(0, "reference_mean_x")));
}

TEST_CASE("sweep over users") {
  const CommandOutput out = cmd_sweep(reference(100, 1e-3), SweepAxis::Users);
  CHECK(out.status.ok());
  REQUIRE(out.table.size() == 5);
  double prev_ratio = 0.0;
  for (std::size_t r = 0; r < out.table.size(); ++r) {
    const double ratio = as_double(out.table.at(r, "profit_ratio"));
    CHECK(ratio >= 1.0);
    CHECK(ratio >= prev_ratio);
    prev_ratio = ratio;
    CHECK(as_double(out.table.at(r, "x_ne")) >= as_double(out.table.at(r, "x_se")));
  }
}

TEST_CASE("sweep over distance") {
  const CommandOutput out = cmd_sweep(reference(100, 1e-3), SweepAxis::Distance);
  REQUIRE(out.table.size() == 4);
  for (std::size_t r = 1; r < out.table.size(); ++r) {
    CHECK(as_double(out.table.at(r, "x_ne")) < as_double(out.table.at(r - 1, "x_ne")));
    CHECK(as_double(out.table.at(r, "x_se")) < as_double(out.table.at(r - 1, "x_se")));
  }
  CHECK_THROWS_AS(cmd_sweep(load_scenario(kDir + "/ring.yaml"), SweepAxis::Distance),
                  ScenarioError);
}

TEST_CASE("non-converging grid points are flagged and the sweep continues") {
  ScenarioFile s = load_scenario(kDir + "/ring.yaml");
  s.system.max_sweeps = 2;
  s.experiment.n_grid = {1, 100};
  const CommandOutput out = cmd_sweep(s, SweepAxis::Users);
  REQUIRE(out.table.size() == 2);
  CHECK(std::get<std::string>(out.table.at(0, "status")) == "ok");
  CHECK(std::get<std::string>(out.table.at(1, "status")) == "not_converged");
  CHECK(out.status.status == "not_converged");
}

TEST_CASE("non-convergence still yields a convergence table") {
  ScenarioFile s = reference(100, 1e-3);
  s.system.max_sweeps = 4;
  const CommandOutput out = cmd_convergence(s);
  CHECK(out.status.status == "not_converged");
  CHECK(out.table.size() > 0);
}

TEST_CASE("zero-offload scenario leaves the edge columns empty") {
  ScenarioFile s = load_scenario(kDir + "/no_offload.yaml");
  s.experiment.horizon_slots = 200'000;
  const CommandOutput out = cmd_sim_validate(s);
  bool found = false;
  for (std::size_t r = 0; r < out.table.size(); ++r) {
    if (std::get<std::string>(out.table.at(r, "quantity")) != "edge_sojourn") continue;
    found = true;
    CHECK(std::holds_alternative<std::monostate>(out.table.at(r, "analytic")));
    CHECK(std::holds_alternative<std::monostate>(out.table.at(r, "simulated")));
  }
  CHECK(found);
}

TEST_CASE("seeded reruns give identical bytes") {
  ScenarioFile s = reference(20, 1e-3);
  s.experiment.horizon_slots = 300'000;
  const std::string a = cmd_sim_validate(s).table.to_csv();
  CHECK(a == cmd_sim_validate(s).table.to_csv());
  s.set_seed(2);
  CHECK(a != cmd_sim_validate(s).table.to_csv());
  ScenarioFile ring = load_scenario(kDir + "/ring.yaml");
  CHECK(cmd_sweep(ring, SweepAxis::Users).table.to_csv() ==
        cmd_sweep(ring, SweepAxis::Users).table.to_csv());
}

TEST_CASE("status json") {
  const CommandOutput out = cmd_solve(reference(10, 1e-3), SolveKind::Social);
  const auto j = nlohmann::json::parse(out.status.to_json(out.table));
  CHECK(j["status"] == "ok");
  CHECK(j.contains("sweeps"));
  CHECK(j.contains("residual"));
  CHECK(j.contains("wall_time_ms"));
  CHECK(j["metadata"].contains("version"));
}

}  // TEST_SUITE
