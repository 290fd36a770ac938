// include/mecgame/queue_sim.hpp
//
// Discrete-event check of the queueing formulas. Time advances in slots of
// t0 seconds; in every slot each user sees a job with probability lambda t0,
// draws a channel gain and offloads iff the gain clears its threshold.
// Retained jobs enter the user's FIFO queue, offloaded jobs the shared edge
// FIFO queue; services are exponential in continuous time. Sojourns are
// measured for jobs arriving after the warmup. Upload airtime is not part of
// the edge sojourn.

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mecgame/types.hpp"

namespace mecgame {

struct SimConfig {
  std::int64_t horizon_slots = 10'000'000;
  std::optional<std::int64_t> warmup_slots;  // default: 10% of the horizon
  std::uint64_t seed = 1;
  std::vector<UserProfile> users;
  std::vector<double> thresholds;            // beta_k per user, nats
  SystemConfig system;

  std::int64_t warmup() const { return warmup_slots.value_or(horizon_slots / 10); }
  void validate() const;
};

struct QueueStats {
  std::int64_t arrivals = 0;     // over the whole horizon
  std::int64_t departures = 0;   // completed by the end of the horizon
  std::int64_t in_system = 0;    // still queued or in service at the end
  std::int64_t samples = 0;      // sojourns measured after warmup
  double mean_sojourn = 0.0;     // s; NaN without samples
  double ci_half_width = 0.0;    // 95%, batch means; NaN when too few samples
};

struct UserSimStats {
  std::int64_t arrivals = 0;
  std::int64_t offloads = 0;
  double offload_frequency = 0.0;
  QueueStats local;
};

struct SimReport {
  std::vector<UserSimStats> users;
  QueueStats edge;
  double pooled_local_mean = 0.0;   // over all retained jobs of all users
  double pooled_local_ci = 0.0;
  std::int64_t pooled_local_samples = 0;
};

/// Throws InfeasibleError for an unstable configuration before simulating.
SimReport run_sim(const SimConfig& sc);

struct FrequencyCheck {
  double empirical = 0.0;
  double analytic = 0.0;
  double gap = 0.0;          // empirical - analytic
  double std_error = 0.0;    // binomial, sqrt(x (1 - x) / arrivals)
  bool within_3se = false;
};

std::vector<FrequencyCheck> validate_frequency(const SimConfig& sc, const SimReport& report);
std::vector<FrequencyCheck> validate_frequency(const SimConfig& sc);

/// Analytic offloading frequency of each simulated user.
std::vector<double> analytic_frequencies(const SimConfig& sc);

/// Substream ids; each user owns one stream per purpose.
enum class SimStream : std::uint64_t { Arrival = 1, Channel = 2, LocalService = 3, EdgeService = 4 };
std::uint64_t stream_id(int user, SimStream purpose);

}  // namespace mecgame
