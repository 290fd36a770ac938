// include/mecgame/best_response.hpp
//
// Decentralized best-response dynamics. Each user only needs the residual
// edge capacity b = mu_B - sum_{j != k} lambda x_j left by the others and
// answers with the frequency solving its first-order condition:
//
//   regulated selfish:  F_N(x) = lambda x + c/(2 gh) + sqrt((c/(2 gh))^2 + c lambda x / gh) = b
//   social:             F_S(x) = lambda x + sqrt(c mu_B / g(x))                                 = b
//
// with gh = g - P. Both response curves increase from their value at 0+ to
// +inf at the zero of the (net) demand, so the best response is the corner
// x = 0 when b does not exceed the value at 0+ and the unique interior root
// otherwise.
//
// run_gauss_seidel sweeps users in a fixed order using the freshest values
// of everybody else, until the mean per-user change of a sweep is at most
// cfg.epsilon.

#pragma once

#include <span>
#include <vector>

#include "mecgame/types.hpp"

namespace mecgame {

struct GameKind {
  enum class Variant { RegulatedSelfish, Social };
  Variant variant = Variant::RegulatedSelfish;
  double price = 0.0;

  static GameKind regulated(double price) { return {Variant::RegulatedSelfish, price}; }
  static GameKind social() { return {Variant::Social, 0.0}; }
  bool is_social() const { return variant == Variant::Social; }
};

/// One user's best-response map b -> x, with the per-user constants (demand
/// at zero, zero of the net demand) computed once.
class BestResponse {
 public:
  BestResponse(const UserProfile& u, const SystemConfig& cfg, GameKind kind);

  /// Best response to residual capacity b > 0.
  double operator()(double b) const;
  /// F_N or F_S at x (x = 0 means the limit 0+).
  double response_curve(double x) const;
  /// response_curve(0+): the smallest capacity that triggers offloading.
  double corner_capacity() const { return corner_; }
  /// Upper end of the interior bracket.
  double demand_cap() const { return cap_; }

 private:
  double net_demand(double x) const;

  UserProfile user_;
  SystemConfig cfg_;
  GameKind kind_;
  double corner_ = 0.0;
  double cap_ = 0.0;
};

double best_response_regulated(double b, const UserProfile& u, double price,
                               const SystemConfig& cfg);
double best_response_social(double b, const UserProfile& u, const SystemConfig& cfg);

struct GaussSeidelOptions {
  /// Update order as a permutation of user indices; empty means ascending.
  std::vector<int> order;
};

/// Best-response iteration from x0 (all zeros when empty). Throws
/// NonConvergenceError after cfg.max_sweeps sweeps.
EquilibriumResult run_gauss_seidel(std::span<const UserProfile> users, const SystemConfig& cfg,
                                   GameKind kind, const OffloadVector& x0 = {},
                                   const GaussSeidelOptions& opt = {});

/// Max per-user residual of the first-order (KKT) conditions of the game at
/// x: interior users must satisfy the equality, users at 0 must not gain from
/// offloading.
double equilibrium_residual(std::span<const UserProfile> users, const SystemConfig& cfg,
                            GameKind kind, const OffloadVector& x);

/// max_k |BR_k(x_{-k}) - x_k| with every response computed against x itself.
double max_best_response_change(std::span<const UserProfile> users, const SystemConfig& cfg,
                                GameKind kind, const OffloadVector& x);

/// Uniform congestion price c_t L / (mu_B - L)^2 at the social profile, L the
/// total edge load.
double uniform_price(const OffloadVector& se, double delay_weight, const SystemConfig& cfg);

struct PricingOutcome {
  EquilibriumResult social;
  double price = 0.0;
  EquilibriumResult regulated;
};

/// Social iteration, then the uniform price at its limit, then the regulated
/// selfish game at that price. All users must share one delay weight.
PricingOutcome priced_social_pipeline(std::span<const UserProfile> users,
                                      const SystemConfig& cfg);

}  // namespace mecgame
