// include/mecgame/model.hpp
//
// Physical-layer and economic model of one access point serving N users.
//
// A user offloads an arriving job when the instantaneous channel supports the
// rate threshold beta, so the offloading frequency is
//
//     x = ccdf((e^beta - 1) / rho)
//
// Retained jobs queue at the device (M/M/1, rate mu_m = f_m / mu_a), offloaded
// jobs queue at the edge (M/M/1, rate mu_B = f_B / mu_a, fed by all users).
// The profit of offloading splits into a private utility U(x_k) and a
// congestion cost C_k(x) = c_t x_k D_edge(x); the demand g = dU/dx drives
// every equilibrium condition.
//
// All functions are pure and thread-safe.

#pragma once

#include <limits>
#include <span>

#include "mecgame/types.hpp"

namespace mecgame {

/// Threshold reported for a user that never offloads (x = 0).
inline constexpr double kNeverOffload = std::numeric_limits<double>::infinity();

double snr_from_distance(double distance, const SystemConfig& cfg);

/// Offloading frequency produced by the rate threshold beta (nats).
double frequency_from_threshold(double beta, double snr, const ChannelModel& ch);
/// Inverse of frequency_from_threshold; x = 0 gives kNeverOffload.
double threshold_from_frequency(double x, double snr, const ChannelModel& ch);
/// d beta / d x for x in (0, 1].
double threshold_slope(double x, double snr, const ChannelModel& ch);

LocalCost local_cost(double x, const UserProfile& u, const SystemConfig& cfg);

/// Cost of the offloaded fraction when the other users put load_others
/// jobs/s on the edge server. Requires x > 0.
EdgeCost edge_cost(double x, double load_others, const UserProfile& u,
                   const SystemConfig& cfg);

/// U(x) = Z_lc(0) - (1 - x) Z_lc(x) - x (c_e E_up(x) + c_t D_up(x)).
double utility(double x, const UserProfile& u, const SystemConfig& cfg);

/// Marginal utility g(x) = dU/dx on the open interval (0, 1).
double demand(double x, const UserProfile& u, const SystemConfig& cfg);
/// lim g(x) as x -> 0+.
double demand_at_zero(const UserProfile& u, const SystemConfig& cfg);
/// g(x) on the closed interval: the limit at 0 and -inf at 1.
double demand_or_limit(double x, const UserProfile& u, const SystemConfig& cfg);

/// Unique x in (0, 1) with g(x) = level, or 0 when g(0+) <= level.
double demand_level_root(const UserProfile& u, const SystemConfig& cfg, double level);
/// x_up: the zero of the demand function.
inline double demand_root(const UserProfile& u, const SystemConfig& cfg) {
  return demand_level_root(u, cfg, 0.0);
}

/// Total edge arrival rate sum_k lambda x_k.
double edge_load(const OffloadVector& x, const SystemConfig& cfg);
bool is_stable(const OffloadVector& x, const SystemConfig& cfg);
/// Throws DomainError for entries outside [0, 1] and InfeasibleError when
/// the edge queue is unstable.
void check_strategy(const OffloadVector& x, const SystemConfig& cfg);

struct ProfitTerms {
  double profit = 0.0;      // Z_lc(0) - Z_k(x)
  double utility = 0.0;
  double congestion = 0.0;
};

/// Profit of user k, computed from the total expected cost; utility and
/// congestion are evaluated separately so profit == utility - congestion can
/// be checked.
ProfitTerms profit(int k, const OffloadVector& x, std::span<const UserProfile> users,
                   const SystemConfig& cfg);

CostBreakdown cost_breakdown(int k, const OffloadVector& x,
                             std::span<const UserProfile> users, const SystemConfig& cfg);

}  // namespace mecgame
