// src/model.cpp

#include "mecgame/model.hpp"

#include <cmath>
#include <string>

#include "mecgame/roots.hpp"

namespace mecgame {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw DomainError(what);
}

bool positive_finite(double v) { return v > 0.0 && std::isfinite(v); }

// Mean sojourn of the local queue when a fraction 1 - x of the jobs is kept.
double local_delay(double x, double local_rate, double arrival_rate) {
  const double slack = local_rate - arrival_rate * (1.0 - x);
  if (!(slack > 0.0)) {
    throw InfeasibleError("local queue unstable: mu_m <= lambda (1 - x)");
  }
  return 1.0 / slack;
}

// (c_t + c_e P_t) * data * rate_unit_scale: numerator of the upload cost.
double upload_weight(const UserProfile& u, const SystemConfig& cfg) {
  return (u.delay_weight + u.energy_weight * cfg.transmit_power) * cfg.offload_nats *
         cfg.rate_unit_scale;
}

double local_energy(const UserProfile& u, const SystemConfig& cfg) {
  return u.energy_coefficient * u.local_cpu_hz * u.local_cpu_hz * cfg.cycles_per_job;
}

}  // namespace

std::string to_string(EquilibriumKind kind) {
  switch (kind) {
    case EquilibriumKind::Nash:
      return "NE";
    case EquilibriumKind::Social:
      return "SE";
    case EquilibriumKind::RegulatedNash:
      return "RegulatedNE";
  }
  return "unknown";
}

void SystemConfig::validate() const {
  require(positive_finite(slot_seconds), "slot_seconds must be positive");
  require(positive_finite(arrival_rate), "arrival_rate must be positive");
  require(positive_finite(cycles_per_job), "cycles_per_job must be positive");
  require(positive_finite(offload_nats), "offload_nats must be positive");
  require(transmit_power >= 0.0 && std::isfinite(transmit_power),
          "transmit_power must be non-negative");
  require(positive_finite(noise_power), "noise_power must be positive");
  require(positive_finite(path_loss_exponent), "path_loss_exponent must be positive");
  require(positive_finite(edge_cpu_hz), "edge_cpu_hz must be positive");
  require(positive_finite(rate_unit_scale), "rate_unit_scale must be positive");
  require(price >= 0.0 && std::isfinite(price), "price must be non-negative");
  require(positive_finite(epsilon), "epsilon must be positive");
  require(n_users >= 1, "n_users must be at least 1");
  require(max_sweeps >= 1, "max_sweeps must be at least 1");
  require(arrival_probability() <= 1.0, "arrival_rate * slot_seconds must not exceed 1");
}

double UserProfile::snr(const SystemConfig& cfg) const {
  if (snr_override) return *snr_override;
  return snr_from_distance(distance, cfg);
}

void UserProfile::validate(const SystemConfig& cfg) const {
  require(delay_weight > 0.0 && delay_weight < 1.0, "delay_weight must lie in (0, 1)");
  require(energy_weight > 0.0 && energy_weight < 1.0, "energy_weight must lie in (0, 1)");
  require(positive_finite(local_cpu_hz), "local_cpu_hz must be positive");
  require(energy_coefficient >= 0.0 && std::isfinite(energy_coefficient),
          "energy_coefficient must be non-negative");
  if (snr_override) {
    require(positive_finite(*snr_override), "snr must be positive");
  } else {
    require(positive_finite(distance), "distance must be positive");
  }
  if (!(local_service_rate(cfg) > cfg.arrival_rate)) {
    throw InfeasibleError("local queue unstable: f_m / mu_a must exceed the arrival rate");
  }
}

double snr_from_distance(double distance, const SystemConfig& cfg) {
  require(distance > 0.0, "snr_from_distance: distance must be positive");
  return std::pow(distance, -cfg.path_loss_exponent) * cfg.transmit_power / cfg.noise_power;
}

double frequency_from_threshold(double beta, double snr, const ChannelModel& ch) {
  require(beta >= 0.0, "frequency_from_threshold: negative threshold");
  require(snr > 0.0, "frequency_from_threshold: snr must be positive");
  if (std::isinf(beta)) return 0.0;
  return ch.ccdf(std::expm1(beta) / snr);
}

double threshold_from_frequency(double x, double snr, const ChannelModel& ch) {
  require(x >= 0.0 && x <= 1.0, "threshold_from_frequency: frequency outside [0, 1]");
  require(snr > 0.0, "threshold_from_frequency: snr must be positive");
  if (x == 0.0) return kNeverOffload;
  return std::log1p(snr * ch.inverse_ccdf(x));
}

double threshold_slope(double x, double snr, const ChannelModel& ch) {
  require(x > 0.0 && x <= 1.0, "threshold_slope: frequency outside (0, 1]");
  return snr * ch.inverse_ccdf_derivative(x) / (1.0 + snr * ch.inverse_ccdf(x));
}

LocalCost local_cost(double x, const UserProfile& u, const SystemConfig& cfg) {
  require(x >= 0.0 && x <= 1.0, "local_cost: frequency outside [0, 1]");
  LocalCost c;
  c.delay = local_delay(x, u.local_service_rate(cfg), cfg.arrival_rate);
  c.energy = local_energy(u, cfg);
  c.weighted = u.energy_weight * c.energy + u.delay_weight * c.delay;
  return c;
}

EdgeCost edge_cost(double x, double load_others, const UserProfile& u,
                   const SystemConfig& cfg) {
  require(x > 0.0 && x <= 1.0, "edge_cost: frequency must lie in (0, 1]");
  const double slack = cfg.edge_service_rate() - load_others - cfg.arrival_rate * x;
  if (!(slack > 0.0)) throw InfeasibleError("edge queue unstable: load >= mu_B");
  const double beta = threshold_from_frequency(x, u.snr(cfg), cfg.channel);
  EdgeCost c;
  c.airtime = cfg.rate_unit_scale * cfg.offload_nats / beta;
  c.energy = cfg.transmit_power * c.airtime;
  c.edge_delay = 1.0 / slack;
  c.weighted = u.energy_weight * c.energy + u.delay_weight * (c.airtime + c.edge_delay);
  return c;
}

double utility(double x, const UserProfile& u, const SystemConfig& cfg) {
  require(x >= 0.0 && x <= 1.0, "utility: frequency outside [0, 1]");
  const double z0 = local_cost(0.0, u, cfg).weighted;
  if (x == 0.0) return 0.0;
  const double zx = local_cost(x, u, cfg).weighted;
  const double beta = threshold_from_frequency(x, u.snr(cfg), cfg.channel);
  const double upload = upload_weight(u, cfg) / beta;
  return z0 - (1.0 - x) * zx - x * upload;
}

double demand(double x, const UserProfile& u, const SystemConfig& cfg) {
  require(x > 0.0 && x < 1.0, "demand: frequency must lie in (0, 1)");
  const double rho = u.snr(cfg);
  const double beta = threshold_from_frequency(x, rho, cfg.channel);
  const double slope = threshold_slope(x, rho, cfg.channel);
  const double eta = upload_weight(u, cfg);
  const double mu_m = u.local_service_rate(cfg);
  const double d = local_delay(x, mu_m, cfg.arrival_rate);
  return u.energy_weight * local_energy(u, cfg) - eta / beta +
         eta * slope * x / (beta * beta) + u.delay_weight * mu_m * d * d;
}

double demand_at_zero(const UserProfile& u, const SystemConfig& cfg) {
  const double mu_m = u.local_service_rate(cfg);
  const double d = local_delay(0.0, mu_m, cfg.arrival_rate);
  return u.energy_weight * local_energy(u, cfg) + u.delay_weight * mu_m * d * d;
}

double demand_or_limit(double x, const UserProfile& u, const SystemConfig& cfg) {
  if (x <= 0.0) return demand_at_zero(u, cfg);
  if (x >= 1.0) return -std::numeric_limits<double>::infinity();
  return demand(x, u, cfg);
}

double demand_level_root(const UserProfile& u, const SystemConfig& cfg, double level) {
  if (demand_at_zero(u, cfg) <= level) return 0.0;
  const auto f = [&](double x) { return demand_or_limit(x, u, cfg) - level; };
  const double root = bisect(f, 0.0, 1.0).x;
  if (!(root < 1.0)) throw DomainError("demand_level_root: root reached x = 1");
  return root;
}

double edge_load(const OffloadVector& x, const SystemConfig& cfg) {
  return cfg.arrival_rate * x.sum();
}

bool is_stable(const OffloadVector& x, const SystemConfig& cfg) {
  return edge_load(x, cfg) < cfg.edge_service_rate();
}

void check_strategy(const OffloadVector& x, const SystemConfig& cfg) {
  if (x.size() > 0 && ((x.array() < 0.0).any() || (x.array() > 1.0).any() ||
                       !x.allFinite())) {
    throw DomainError("offloading frequencies must lie in [0, 1]");
  }
  if (!is_stable(x, cfg)) {
    throw InfeasibleError("edge queue unstable: sum lambda x >= mu_B");
  }
}

ProfitTerms profit(int k, const OffloadVector& x, std::span<const UserProfile> users,
                   const SystemConfig& cfg) {
  const CostBreakdown c = cost_breakdown(k, x, users, cfg);
  return {c.profit, c.utility, c.congestion};
}

CostBreakdown cost_breakdown(int k, const OffloadVector& x,
                             std::span<const UserProfile> users, const SystemConfig& cfg) {
  if (static_cast<std::size_t>(x.size()) != users.size()) {
    throw DomainError("cost_breakdown: strategy and user counts differ");
  }
  if (k < 0 || k >= x.size()) throw DomainError("cost_breakdown: user index out of range");
  check_strategy(x, cfg);

  const UserProfile& u = users[static_cast<std::size_t>(k)];
  const double xk = x[k];
  CostBreakdown c;
  c.local = local_cost(xk, u, cfg);
  const double z0 = local_cost(0.0, u, cfg).weighted;
  if (xk == 0.0) {
    c.total = c.local.weighted;
  } else {
    const double others = edge_load(x, cfg) - cfg.arrival_rate * xk;
    c.edge = edge_cost(xk, others, u, cfg);
    c.total = (1.0 - xk) * c.local.weighted + xk * c.edge.weighted;
    c.congestion = u.delay_weight * xk * c.edge.edge_delay;
  }
  c.utility = utility(xk, u, cfg);
  c.profit = z0 - c.total;
  return c;
}

}  // namespace mecgame
