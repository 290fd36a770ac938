// src/homogeneous.cpp

#include "mecgame/homogeneous.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mecgame/model.hpp"
#include "mecgame/roots.hpp"

namespace mecgame {

namespace {

constexpr double kBracketGap = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Bisection to machine precision; the brackets are tiny intervals of [0, 1].
constexpr BisectOptions kTight{0.0, 0.0, 200};

EquilibriumResult trivial_result(const HomogeneousScenario& s, EquilibriumKind kind) {
  EquilibriumResult r;
  r.x = OffloadVector::Zero(s.n_users);
  r.kind = kind;
  r.trivial = true;
  return r;
}

double upper_bracket(const HomogeneousScenario& s) {
  const double x_up = demand_root(s.profile, s.cfg);
  const double x_cap = s.cfg.edge_service_rate() / (s.n_users * s.cfg.arrival_rate);
  return std::min(x_up - kBracketGap, x_cap - kBracketGap);
}

template <class Lhs>
EquilibriumResult solve_scalar(const HomogeneousScenario& s, EquilibriumKind kind, Lhs lhs) {
  s.validate();
  if (!ne_exists(s)) return trivial_result(s, kind);
  const double mu_b = s.cfg.edge_service_rate();
  const auto f = [&](double x) { return lhs(x, s) - mu_b; };
  const BisectResult root = bisect(f, 0.0, upper_bracket(s), kTight);

  EquilibriumResult r;
  r.x = OffloadVector::Constant(s.n_users, root.x);
  r.kind = kind;
  r.iterations = root.iterations;
  r.residual = kind == EquilibriumKind::Social ? social_residual(root.x, s)
                                               : nash_residual(root.x, s);
  return r;
}

}  // namespace

void HomogeneousScenario::validate() const {
  if (n_users < 1) throw DomainError("homogeneous scenario needs at least one user");
  cfg.validate();
  profile.validate(cfg);
}

std::vector<UserProfile> HomogeneousScenario::users() const {
  return std::vector<UserProfile>(static_cast<std::size_t>(n_users), profile);
}

bool ne_exists(const HomogeneousScenario& s) {
  return demand_at_zero(s.profile, s.cfg) > s.profile.delay_weight / s.cfg.edge_service_rate();
}

double nash_lhs(double x, const HomogeneousScenario& s) {
  const double g = demand_or_limit(x, s.profile, s.cfg);
  if (!(g > 0.0)) return kInf;
  const double lambda = s.cfg.arrival_rate;
  const double others = s.cfg.edge_service_rate() - (s.n_users - 1) * lambda * x;
  return s.n_users * lambda * x + std::sqrt(s.profile.delay_weight * others / g);
}

double social_lhs(double x, const HomogeneousScenario& s) {
  const double g = demand_or_limit(x, s.profile, s.cfg);
  if (!(g > 0.0)) return kInf;
  return s.n_users * s.cfg.arrival_rate * x +
         std::sqrt(s.profile.delay_weight * s.cfg.edge_service_rate() / g);
}

double nash_residual(double x, const HomogeneousScenario& s) {
  const double mu_b = s.cfg.edge_service_rate();
  const double lambda = s.cfg.arrival_rate;
  const double slack = mu_b - s.n_users * lambda * x;
  const double rhs =
      s.profile.delay_weight * (mu_b - (s.n_users - 1) * lambda * x) / (slack * slack);
  if (x == 0.0) return std::max(0.0, demand_at_zero(s.profile, s.cfg) - rhs);
  return std::abs(demand(x, s.profile, s.cfg) - rhs);
}

double social_residual(double x, const HomogeneousScenario& s) {
  const double mu_b = s.cfg.edge_service_rate();
  const double slack = mu_b - s.n_users * s.cfg.arrival_rate * x;
  const double rhs = s.profile.delay_weight * mu_b / (slack * slack);
  if (x == 0.0) return std::max(0.0, demand_at_zero(s.profile, s.cfg) - rhs);
  return std::abs(demand(x, s.profile, s.cfg) - rhs);
}

EquilibriumResult solve_ne_homogeneous(const HomogeneousScenario& s) {
  return solve_scalar(s, EquilibriumKind::Nash, nash_lhs);
}

EquilibriumResult solve_se_homogeneous(const HomogeneousScenario& s) {
  return solve_scalar(s, EquilibriumKind::Social, social_lhs);
}

double optimal_price_homogeneous(const HomogeneousScenario& s, double x_se) {
  if (x_se <= 0.0) return 0.0;
  return (s.n_users - 1) * s.cfg.arrival_rate * x_se * demand(x_se, s.profile, s.cfg) /
         s.cfg.edge_service_rate();
}

double optimal_price_homogeneous(const HomogeneousScenario& s) {
  const EquilibriumResult se = solve_se_homogeneous(s);
  return se.trivial ? 0.0 : optimal_price_homogeneous(s, se.x[0]);
}

}  // namespace mecgame
