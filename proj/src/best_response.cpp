// src/best_response.cpp

#include "mecgame/best_response.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "mecgame/model.hpp"
#include "mecgame/roots.hpp"

namespace mecgame {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr BisectOptions kTight{0.0, 0.0, 200};

std::vector<int> resolve_order(const GaussSeidelOptions& opt, int n) {
  if (opt.order.empty()) {
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    return order;
  }
  if (static_cast<int>(opt.order.size()) != n) {
    throw DomainError("update order must list every user exactly once");
  }
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  for (int k : opt.order) {
    if (k < 0 || k >= n || seen[static_cast<std::size_t>(k)]) {
      throw DomainError("update order must be a permutation of the users");
    }
    seen[static_cast<std::size_t>(k)] = 1;
  }
  return opt.order;
}

std::vector<BestResponse> make_responders(std::span<const UserProfile> users,
                                          const SystemConfig& cfg, GameKind kind) {
  std::vector<BestResponse> out;
  out.reserve(users.size());
  for (const auto& u : users) out.emplace_back(u, cfg, kind);
  return out;
}

EquilibriumKind result_kind(GameKind kind) {
  if (kind.is_social()) return EquilibriumKind::Social;
  return kind.price > 0.0 ? EquilibriumKind::RegulatedNash : EquilibriumKind::Nash;
}

}  // namespace

BestResponse::BestResponse(const UserProfile& u, const SystemConfig& cfg, GameKind kind)
    : user_(u), cfg_(cfg), kind_(kind) {
  if (!kind.is_social() && !(kind.price >= 0.0)) {
    throw DomainError("regulated game needs a non-negative price");
  }
  const double levy = kind.is_social() ? 0.0 : kind.price;
  cap_ = demand_level_root(user_, cfg_, levy);
  if (!(cap_ < 1.0)) throw DomainError("net demand has no zero below x = 1");
  corner_ = response_curve(0.0);
}

double BestResponse::net_demand(double x) const {
  const double g = demand_or_limit(x, user_, cfg_);
  return kind_.is_social() ? g : g - kind_.price;
}

double BestResponse::response_curve(double x) const {
  const double gh = net_demand(x);
  if (!(gh > 0.0)) return kInf;
  const double c = user_.delay_weight;
  const double lambda = cfg_.arrival_rate;
  if (kind_.is_social()) {
    return lambda * x + std::sqrt(c * cfg_.edge_service_rate() / gh);
  }
  const double half = c / (2.0 * gh);
  return lambda * x + half + std::sqrt(half * half + c * lambda * x / gh);
}

double BestResponse::operator()(double b) const {
  if (!(b > 0.0)) throw InfeasibleError("best response: no residual edge capacity");
  if (b <= corner_) return 0.0;
  const auto f = [&](double x) { return response_curve(x) - b; };
  return bisect(f, 0.0, cap_, kTight).x;
}

double best_response_regulated(double b, const UserProfile& u, double price,
                               const SystemConfig& cfg) {
  return BestResponse(u, cfg, GameKind::regulated(price))(b);
}

double best_response_social(double b, const UserProfile& u, const SystemConfig& cfg) {
  return BestResponse(u, cfg, GameKind::social())(b);
}

EquilibriumResult run_gauss_seidel(std::span<const UserProfile> users, const SystemConfig& cfg,
                                   GameKind kind, const OffloadVector& x0,
                                   const GaussSeidelOptions& opt) {
  cfg.validate();
  if (users.empty()) throw DomainError("run_gauss_seidel: no users");
  for (const auto& u : users) u.validate(cfg);
  const int n = static_cast<int>(users.size());

  OffloadVector x = x0.size() == 0 ? OffloadVector::Zero(n) : x0;
  if (x.size() != n) throw DomainError("run_gauss_seidel: start vector has wrong size");
  check_strategy(x, cfg);

  const std::vector<int> order = resolve_order(opt, n);
  const std::vector<BestResponse> respond = make_responders(users, cfg, kind);
  const double mu_b = cfg.edge_service_rate();
  const double lambda = cfg.arrival_rate;

  EquilibriumResult r;
  r.kind = result_kind(kind);
  r.price = kind.is_social() ? 0.0 : kind.price;

  for (int sweep = 1;; ++sweep) {
    const OffloadVector previous = x;
    double load = edge_load(x, cfg);
    for (int k : order) {
      const double b = mu_b - (load - lambda * x[k]);
      const double next = respond[static_cast<std::size_t>(k)](b);
      if (!(next <= 1.0)) throw DomainError("best response left the unit box");
      load += lambda * (next - x[k]);
      x[k] = next;
      if (!(load < mu_b)) throw InfeasibleError("best response overloaded the edge queue");
    }
    const double delta = (x - previous).cwiseAbs().mean();
    r.trace.push_back({sweep, x.mean(), delta});
    r.iterations = sweep;
    if (delta <= cfg.epsilon) break;
    if (sweep >= cfg.max_sweeps) {
      r.x = x;
      r.converged = false;
      r.residual = equilibrium_residual(users, cfg, kind, x);
      throw NonConvergenceError(
          "best-response iteration did not converge in " + std::to_string(sweep) + " sweeps",
          std::move(r));
    }
  }

  r.x = x;
  r.trivial = (x.array() == 0.0).all();
  r.residual = equilibrium_residual(users, cfg, kind, x);
  return r;
}

double equilibrium_residual(std::span<const UserProfile> users, const SystemConfig& cfg,
                            GameKind kind, const OffloadVector& x) {
  check_strategy(x, cfg);
  const double mu_b = cfg.edge_service_rate();
  const double load = edge_load(x, cfg);
  const double slack = mu_b - load;
  double worst = 0.0;
  for (int k = 0; k < x.size(); ++k) {
    const UserProfile& u = users[static_cast<std::size_t>(k)];
    const double c = u.delay_weight;
    const double levy = kind.is_social() ? 0.0 : kind.price;
    const double others = load - cfg.arrival_rate * x[k];
    // Marginal congestion cost of user k's own offloading.
    const double marginal = kind.is_social() ? c * mu_b / (slack * slack)
                                             : c * (mu_b - others) / (slack * slack);
    double res;
    if (x[k] == 0.0) {
      res = std::max(0.0, demand_at_zero(u, cfg) - levy - marginal);
    } else {
      res = std::abs(demand(x[k], u, cfg) - levy - marginal);
    }
    worst = std::max(worst, res);
  }
  return worst;
}

double max_best_response_change(std::span<const UserProfile> users, const SystemConfig& cfg,
                                GameKind kind, const OffloadVector& x) {
  check_strategy(x, cfg);
  const double load = edge_load(x, cfg);
  double worst = 0.0;
  for (int k = 0; k < x.size(); ++k) {
    const BestResponse respond(users[static_cast<std::size_t>(k)], cfg, kind);
    const double b = cfg.edge_service_rate() - (load - cfg.arrival_rate * x[k]);
    worst = std::max(worst, std::abs(respond(b) - x[k]));
  }
  return worst;
}

double uniform_price(const OffloadVector& se, double delay_weight, const SystemConfig& cfg) {
  check_strategy(se, cfg);
  const double load = edge_load(se, cfg);
  const double slack = cfg.edge_service_rate() - load;
  return delay_weight * load / (slack * slack);
}

PricingOutcome priced_social_pipeline(std::span<const UserProfile> users,
                                      const SystemConfig& cfg) {
  if (users.empty()) throw DomainError("priced_social_pipeline: no users");
  const double c = users.front().delay_weight;
  for (const auto& u : users) {
    if (u.delay_weight != c) {
      throw DomainError("uniform pricing needs a common delay weight across users");
    }
  }
  PricingOutcome out;
  out.social = run_gauss_seidel(users, cfg, GameKind::social());
  out.price = uniform_price(out.social.x, c, cfg);
  out.regulated = run_gauss_seidel(users, cfg, GameKind::regulated(out.price));
  return out;
}

}  // namespace mecgame
