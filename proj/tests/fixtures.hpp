// tests/fixtures.hpp: reference scenarios shared by the test binaries.

#pragma once

#include <vector>

#include "mecgame/homogeneous.hpp"
#include "mecgame/philox.hpp"
#include "mecgame/scenario.hpp"

namespace fixtures {

inline mecgame::UserProfile reference_user() {
  mecgame::UserProfile u;
  u.snr_override = 0.89;
  return u;
}

inline mecgame::HomogeneousScenario reference(int n, double epsilon = 1e-3) {
  mecgame::HomogeneousScenario s;
  s.n_users = n;
  s.profile = reference_user();
  s.cfg.n_users = n;
  s.cfg.epsilon = epsilon;
  return s;
}

// Users on the ring r in [10, 75] m, SNR from distance.
inline std::vector<mecgame::UserProfile> ring_users(int n, std::uint64_t seed) {
  mecgame::RingUsers ring;
  ring.n = n;
  ring.seed = seed;
  mecgame::ScenarioFile f;
  f.users = ring;
  f.system.n_users = n;
  return f.materialize_users();
}

inline mecgame::SystemConfig ring_config(int n, double epsilon = 1e-3) {
  mecgame::SystemConfig cfg;
  cfg.n_users = n;
  cfg.epsilon = epsilon;
  return cfg;
}

// Random feasible start: uniform frequencies scaled to half the edge capacity.
inline mecgame::OffloadVector random_start(int n, const mecgame::SystemConfig& cfg,
                                           mecgame::PhiloxStream& rng) {
  mecgame::OffloadVector x(n);
  for (int k = 0; k < n; ++k) x[k] = rng.uniform();
  const double load = cfg.arrival_rate * x.sum();
  const double cap = 0.5 * cfg.edge_service_rate();
  if (load > cap) x *= cap / load;
  return x;
}

}  // namespace fixtures
