// include/mecgame/scenario.hpp
//
// Scenario files: one YAML document with three top-level tables.
//
//   system:      SystemConfig fields (all optional, defaults otherwise)
//   users:       exactly one of
//                  homogeneous: {n, profile: {...}}
//                  ring:        {n, r_min, r_max, seed, profile: {...}}
//   experiment:  {kind, n_grid, d_grid, horizon_slots, warmup_slots, seed}
//
// Unknown keys and ill-typed values are rejected before any computation.
// See docs/scenario-format.md for the full key list.

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "mecgame/types.hpp"

namespace mecgame {

class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct HomogeneousUsers {
  int n = 1;
  UserProfile profile;

  friend bool operator==(const HomogeneousUsers&, const HomogeneousUsers&) = default;
};

/// Users placed uniformly at random on r_min <= d <= r_max around the access
/// point. The profile is a template; distance is drawn and the SNR follows
/// from path loss.
struct RingUsers {
  int n = 1;
  double r_min = 10.0;
  double r_max = 75.0;
  std::uint64_t seed = 1;
  UserProfile profile;

  friend bool operator==(const RingUsers&, const RingUsers&) = default;
};

using UsersSpec = std::variant<HomogeneousUsers, RingUsers>;

enum class ExperimentKind { Convergence, SweepN, SweepD, Delays, SimValidate };

std::string to_string(ExperimentKind kind);
ExperimentKind experiment_kind_from_string(const std::string& name);

struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::Convergence;
  std::vector<int> n_grid{1, 10, 50, 100, 200};
  std::vector<double> d_grid{10.0, 30.0, 50.0, 70.0};
  std::int64_t horizon_slots = 10'000'000;
  std::optional<std::int64_t> warmup_slots;
  std::uint64_t seed = 1;

  friend bool operator==(const ExperimentSpec&, const ExperimentSpec&) = default;
};

struct ScenarioFile {
  SystemConfig system;
  UsersSpec users = HomogeneousUsers{};
  ExperimentSpec experiment;

  bool homogeneous() const { return std::holds_alternative<HomogeneousUsers>(users); }
  int user_count() const;
  /// Replaces the user count (ring placements keep their seed).
  void set_user_count(int n);
  /// Overrides the ring placement seed and the simulation seed.
  void set_seed(std::uint64_t seed);

  /// Concrete per-user profiles; ring radii come from a seeded stream.
  std::vector<UserProfile> materialize_users() const;

  void validate() const;

  friend bool operator==(const ScenarioFile&, const ScenarioFile&) = default;
};

ScenarioFile parse_scenario(const std::string& yaml_text);
ScenarioFile load_scenario(const std::string& path);
std::string serialize_scenario(const ScenarioFile& scenario);

/// Radii of a ring placement, in user order.
std::vector<double> ring_radii(const RingUsers& ring);

}  // namespace mecgame
