// Scenario files: parsing, validation, round trip, ring placement.

#include <algorithm>
#include <string>

#include "doctest.h"
#include "mecgame/scenario.hpp"

using namespace mecgame;

#ifndef MECGAME_SCENARIO_DIR
#define MECGAME_SCENARIO_DIR "scenarios"
#endif

namespace {

const std::string kDir = MECGAME_SCENARIO_DIR;

const char* kMinimal = R"(
users:
  homogeneous:
    n: 4
    profile: {snr: 0.89}
)";

}  // namespace

TEST_SUITE("scenario") {

TEST_CASE("shipped scenarios load and round-trip") {
  for (const char* name : {"homogeneous.yaml", "ring.yaml", "no_offload.yaml"}) {
    CAPTURE(name);
    const ScenarioFile a = load_scenario(kDir + "/" + name);
    const std::string text = serialize_scenario(a);
    const ScenarioFile b = parse_scenario(text);
    CHECK(a == b);
    CHECK(serialize_scenario(b) == text);
  }
}

TEST_CASE("defaults and derived fields") {
  const ScenarioFile s = parse_scenario(kMinimal);
  CHECK(s.homogeneous());
  CHECK(s.user_count() == 4);
  CHECK(s.system.n_users == 4);
  CHECK(s.system == [] { SystemConfig c; c.n_users = 4; return c; }());
  const auto users = s.materialize_users();
  REQUIRE(users.size() == 4);
  CHECK(users[0].snr_override == 0.89);
  CHECK(s.experiment.n_grid == std::vector<int>{1, 10, 50, 100, 200});
  CHECK(s.experiment.d_grid == std::vector<double>{10, 30, 50, 70});
}

TEST_CASE("round trip preserves awkward numbers") {
  ScenarioFile s = parse_scenario(kMinimal);
  s.system.noise_power = 1.0 / 3.0 * 1e-7;
  s.system.epsilon = 0.1 + 0.2;
  std::get<HomogeneousUsers>(s.users).profile.snr_override = 0.1 + 0.7;
  s.experiment.warmup_slots = 12345;
  CHECK(parse_scenario(serialize_scenario(s)) == s);
}

TEST_CASE("schema violations are rejected") {
  CHECK_THROWS_AS(parse_scenario("users: {homogeneous: {n: 2, profile: {}}}\nbogus: 1\n"),
                  ScenarioError);
  CHECK_THROWS_AS(parse_scenario("users: {homogeneous: {n: 2, profile: {colour: red}}}\n"),
                  ScenarioError);
  CHECK_THROWS_AS(parse_scenario("system: {epsilon: 0}\nusers: {homogeneous: {n: 2, profile: {}}}\n"),
                  ScenarioError);
  CHECK_THROWS_AS(parse_scenario("system: {epsilon: abc}\nusers: {homogeneous: {n: 2, profile: {}}}\n"),
                  ScenarioError);
  CHECK_THROWS_AS(parse_scenario("users: {homogeneous: {n: 0, profile: {}}}\n"), ScenarioError);
  CHECK_THROWS_AS(parse_scenario("users: {ring: {n: 5, r_min: 50, r_max: 20, profile: {}}}\n"),
                  ScenarioError);
  CHECK_THROWS_AS(parse_scenario("users: {ring: {n: 5, r_min: 0, r_max: 20, profile: {}}}\n"),
                  ScenarioError);
  CHECK_THROWS_AS(
      parse_scenario("users: {homogeneous: {n: 2, profile: {}}, ring: {n: 2, profile: {}}}\n"),
      ScenarioError);
  CHECK_THROWS_AS(parse_scenario("experiment: {kind: dance}\nusers: {homogeneous: {n: 2, profile: {}}}\n"),
                  ScenarioError);
  CHECK_THROWS_AS(parse_scenario("users: {homogeneous: {n: 2, profile: {local_cpu_hz: 5.0e7}}}\n"),
                  std::exception);
  CHECK_THROWS_AS(parse_scenario("system: {channel: {family: nakagami}}\nusers: {homogeneous: {n: 2, profile: {}}}\n"),
                  ScenarioError);
  CHECK_THROWS_AS(load_scenario(kDir + "/does_not_exist.yaml"), ScenarioError);
}

TEST_CASE("ring placement") {
  RingUsers ring;
  ring.n = 200;
  ring.seed = 9;
  const auto r = ring_radii(ring);
  REQUIRE(r.size() == 200);
  CHECK(*std::min_element(r.begin(), r.end()) >= ring.r_min);
  CHECK(*std::max_element(r.begin(), r.end()) <= ring.r_max);
  CHECK(ring_radii(ring) == r);
  ring.seed = 10;
  CHECK(ring_radii(ring) != r);

  ScenarioFile s = load_scenario(kDir + "/ring.yaml");
  const auto users = s.materialize_users();
  REQUIRE(users.size() == 50);
  for (const auto& u : users) {
    CHECK_FALSE(u.snr_override.has_value());
    CHECK(u.distance >= 10.0);
    CHECK(u.distance <= 75.0);
  }
  s.set_seed(77);
  CHECK(std::get<RingUsers>(s.users).seed == 77);
  CHECK(s.experiment.seed == 77);
  CHECK(s.materialize_users() != users);
  s.set_user_count(12);
  CHECK(s.user_count() == 12);
  CHECK(s.system.n_users == 12);
  CHECK(s.materialize_users().size() == 12);
}

TEST_CASE("experiment kinds") {
  for (auto k : {ExperimentKind::Convergence, ExperimentKind::SweepN, ExperimentKind::SweepD,
                 ExperimentKind::Delays, ExperimentKind::SimValidate}) {
    CHECK(experiment_kind_from_string(to_string(k)) == k);
  }
  CHECK_THROWS(experiment_kind_from_string("nope"));
}

}  // TEST_SUITE
