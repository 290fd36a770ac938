// include/mecgame/homogeneous.hpp
//
// Closed-form equilibria when all N users share one profile. Every user
// then plays the same frequency x and the N coupled first-order conditions
// collapse to one scalar equation:
//
//   Nash:    N lambda x + sqrt(c_t (mu_B - (N-1) lambda x) / g(x)) = mu_B
//   Social:  N lambda x + sqrt(c_t mu_B / g(x))                    = mu_B
//
// Both left-hand sides increase from sqrt(c_t mu_B / g(0+)) to +inf on
// (0, x_up), so a positive root exists iff g(0+) > c_t / mu_B.

#pragma once

#include <vector>

#include "mecgame/types.hpp"

namespace mecgame {

struct HomogeneousScenario {
  int n_users = 1;
  UserProfile profile;
  SystemConfig cfg;

  void validate() const;
  std::vector<UserProfile> users() const;
};

/// g(0+) > c_t / mu_B. Shared by the Nash and the social game.
bool ne_exists(const HomogeneousScenario& s);
inline bool se_exists(const HomogeneousScenario& s) { return ne_exists(s); }

/// Left-hand sides of the two scalar equilibrium equations, +inf where the
/// demand is no longer positive.
double nash_lhs(double x, const HomogeneousScenario& s);
double social_lhs(double x, const HomogeneousScenario& s);

/// All-zero (trivial) result when no positive equilibrium exists.
EquilibriumResult solve_ne_homogeneous(const HomogeneousScenario& s);
EquilibriumResult solve_se_homogeneous(const HomogeneousScenario& s);

/// Price P = (N-1) lambda x_se g(x_se) / mu_B that moves the regulated Nash
/// equilibrium onto the social one. Zero when the social equilibrium is
/// trivial.
double optimal_price_homogeneous(const HomogeneousScenario& s);
double optimal_price_homogeneous(const HomogeneousScenario& s, double x_se);

/// Max residual of the per-user first-order conditions at a common x.
double nash_residual(double x, const HomogeneousScenario& s);
double social_residual(double x, const HomogeneousScenario& s);

}  // namespace mecgame
