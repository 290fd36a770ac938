// include/mecgame/types.hpp
//
// Parameter and result types shared by every part of the offloading game:
// the system-wide configuration, per-user profiles, strategy profiles and the
// error types thrown when a model precondition is violated.

#pragma once

#include <Eigen/Core>

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mecgame/channel.hpp"

namespace mecgame {

/// Offloading frequencies x = (x_1, ..., x_N), one entry per user in [0, 1].
using OffloadVector = Eigen::VectorXd;

/// A precondition on an argument value was violated (negative distance,
/// frequency outside [0, 1], ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The requested operating point is not a stable queueing system.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Global physical and economic parameters. Defaults are the reference
/// scenario: 0.6 jobs/s of 100 Mcycle jobs, 100 nats per upload, 100 mW
/// transmit power over -40 dBm noise, a 3 GHz edge server and 1 ms slots.
struct SystemConfig {
  double slot_seconds = 1e-3;          // t0
  double arrival_rate = 0.6;           // jobs/s per user
  double cycles_per_job = 1e8;         // mean CPU cycles per job
  double offload_nats = 100.0;         // data per offloaded job
  double transmit_power = 0.1;         // W
  double noise_power = 1e-7;           // W
  double path_loss_exponent = 3.5;
  double edge_cpu_hz = 3e9;
  // Seconds of airtime per unit of offload_nats / beta. The default equals
  // slot_seconds, i.e. the rate threshold beta is read as nats per slot.
  double rate_unit_scale = 1e-3;
  double price = 0.0;                  // per unit of offloading frequency
  double epsilon = 1e-3;               // mean-change stop threshold
  int n_users = 1;
  int max_sweeps = 10000;
  ChannelModel channel = ChannelModel::rayleigh();

  /// Edge service rate in jobs/s.
  double edge_service_rate() const { return edge_cpu_hz / cycles_per_job; }
  /// Per-slot arrival probability of the Bernoulli arrival process.
  double arrival_probability() const { return arrival_rate * slot_seconds; }

  /// Throws DomainError naming the first violated invariant.
  void validate() const;

  friend bool operator==(const SystemConfig&, const SystemConfig&) = default;
};

struct UserProfile {
  double distance = 50.0;              // m
  std::optional<double> snr_override;  // used instead of the path-loss SNR
  double delay_weight = 0.9;           // 1/s, in (0, 1)
  double energy_weight = 0.1;          // 1/J, in (0, 1)
  double local_cpu_hz = 1e8;
  double energy_coefficient = 1e-26;   // J s^2 / cycle^3

  double local_service_rate(const SystemConfig& cfg) const {
    return local_cpu_hz / cfg.cycles_per_job;
  }

  /// Received SNR: the override when present, otherwise path loss.
  double snr(const SystemConfig& cfg) const;

  void validate(const SystemConfig& cfg) const;

  friend bool operator==(const UserProfile&, const UserProfile&) = default;
};

struct LocalCost {
  double delay = 0.0;     // mean sojourn in the local M/M/1 queue (s)
  double energy = 0.0;    // J per job
  double weighted = 0.0;
};

struct EdgeCost {
  double airtime = 0.0;       // upload time (s)
  double energy = 0.0;        // upload energy (J)
  double edge_delay = 0.0;    // mean sojourn at the edge server (s)
  double weighted = 0.0;
};

/// Everything known about one user at one strategy profile.
struct CostBreakdown {
  LocalCost local;
  EdgeCost edge;
  double total = 0.0;       // expected cost per job
  double utility = 0.0;
  double congestion = 0.0;
  double profit = 0.0;      // cost saving against never offloading
};

enum class EquilibriumKind { Nash, Social, RegulatedNash };

std::string to_string(EquilibriumKind kind);

struct SweepRecord {
  int sweep = 0;
  double mean_x = 0.0;
  double delta_x = 0.0;
};

struct EquilibriumResult {
  OffloadVector x;
  EquilibriumKind kind = EquilibriumKind::Nash;
  double price = 0.0;
  double residual = 0.0;      // max equilibrium-condition residual
  int iterations = 0;
  bool trivial = false;       // nobody offloads
  bool converged = true;
  std::vector<SweepRecord> trace;
};

/// Thrown when best-response dynamics exhaust their sweep budget. The partial
/// result (including the full trace) is kept for diagnostics.
class NonConvergenceError : public std::runtime_error {
 public:
  NonConvergenceError(const std::string& what, EquilibriumResult partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const EquilibriumResult& partial() const { return partial_; }

 private:
  EquilibriumResult partial_;
};

}  // namespace mecgame
