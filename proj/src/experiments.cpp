// src/experiments.cpp

#include "mecgame/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <optional>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "mecgame/best_response.hpp"
#include "mecgame/homogeneous.hpp"
#include "mecgame/model.hpp"
#include "mecgame/queue_sim.hpp"

#ifndef MECGAME_VERSION
#define MECGAME_VERSION "unknown"
#endif

namespace mecgame {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

// Runs fn(0..n-1) on a small worker pool; results come back in index order.
template <class Fn>
auto parallel_map(std::size_t n, Fn fn) -> std::vector<decltype(fn(std::size_t{}))> {
  using R = decltype(fn(std::size_t{}));
  std::vector<std::optional<R>> slots(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(n, std::thread::hardware_concurrency()));
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          slots[i].emplace(fn(i));
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  std::vector<R> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    out.push_back(std::move(*slots[i]));
  }
  return out;
}

Cell num(double v) { return std::isfinite(v) ? Cell{v} : na(); }
Cell count(std::int64_t v) { return Cell{v}; }

HomogeneousScenario homogeneous_of(const ScenarioFile& s) {
  const auto& h = std::get<HomogeneousUsers>(s.users);
  HomogeneousScenario out{h.n, h.profile, s.system};
  out.cfg.n_users = h.n;
  return out;
}

double common_delay_weight(const std::vector<UserProfile>& users) {
  return users.front().delay_weight;
}

// Equilibria used by several commands: closed forms for identical users,
// best-response iteration otherwise.
struct Equilibria {
  EquilibriumResult ne;
  EquilibriumResult se;
  double price = 0.0;
  int sweeps = 0;
};

Equilibria solve_equilibria(const ScenarioFile& s, const std::vector<UserProfile>& users) {
  Equilibria e;
  if (s.homogeneous()) {
    const HomogeneousScenario hs = homogeneous_of(s);
    e.ne = solve_ne_homogeneous(hs);
    e.se = solve_se_homogeneous(hs);
    e.price = e.se.trivial ? 0.0 : optimal_price_homogeneous(hs, e.se.x[0]);
  } else {
    e.ne = run_gauss_seidel(users, s.system, GameKind::regulated(0.0));
    e.se = run_gauss_seidel(users, s.system, GameKind::social());
    e.price = uniform_price(e.se.x, common_delay_weight(users), s.system);
    e.sweeps = e.ne.iterations + e.se.iterations;
  }
  return e;
}

double optimal_price(const ScenarioFile& s, const std::vector<UserProfile>& users) {
  if (s.homogeneous()) return optimal_price_homogeneous(homogeneous_of(s));
  const EquilibriumResult se = run_gauss_seidel(users, s.system, GameKind::social());
  return uniform_price(se.x, common_delay_weight(users), s.system);
}

double mean_profit(const OffloadVector& x, const std::vector<UserProfile>& users,
                   const SystemConfig& cfg) {
  double total = 0.0;
  for (int k = 0; k < x.size(); ++k) total += profit(k, x, users, cfg).profit;
  return total / static_cast<double>(x.size());
}

double mean_local_delay(const OffloadVector& x, const std::vector<UserProfile>& users,
                        const SystemConfig& cfg) {
  double total = 0.0;
  for (int k = 0; k < x.size(); ++k) {
    total += local_cost(x[k], users[static_cast<std::size_t>(k)], cfg).delay;
  }
  return total / static_cast<double>(x.size());
}

double edge_delay(const OffloadVector& x, const SystemConfig& cfg) {
  if ((x.array() == 0.0).all()) return std::numeric_limits<double>::quiet_NaN();
  return 1.0 / (cfg.edge_service_rate() - edge_load(x, cfg));
}

}  // namespace

std::string RunStatus::to_json(const ResultTable& table) const {
  nlohmann::ordered_json j;
  j["status"] = status;
  j["sweeps"] = sweeps;
  if (std::isfinite(residual)) {
    j["residual"] = residual;
  } else {
    j["residual"] = nullptr;
  }
  j["wall_time_ms"] = wall_time_ms;
  nlohmann::ordered_json meta = nlohmann::ordered_json::object();
  meta["version"] = MECGAME_VERSION;
  for (const auto& [k, v] : table.metadata()) meta[k] = v;
  j["metadata"] = meta;
  return j.dump(2) + "\n";
}

SolveKind solve_kind_from_string(const std::string& name) {
  if (name == "ne") return SolveKind::Nash;
  if (name == "se") return SolveKind::Social;
  if (name == "priced") return SolveKind::Priced;
  if (name == "regulated") return SolveKind::Regulated;
  throw std::invalid_argument("unknown equilibrium kind '" + name +
                              "' (expected ne, se, priced or regulated)");
}

CommandOutput cmd_solve(const ScenarioFile& s, SolveKind kind) {
  const auto start = Clock::now();
  s.validate();
  const std::vector<UserProfile> users = s.materialize_users();
  const SystemConfig& cfg = s.system;

  CommandOutput out;
  EquilibriumResult eq;
  try {
    switch (kind) {
      case SolveKind::Nash:
        eq = s.homogeneous() ? solve_ne_homogeneous(homogeneous_of(s))
                             : run_gauss_seidel(users, cfg, GameKind::regulated(0.0));
        break;
      case SolveKind::Social:
        eq = s.homogeneous() ? solve_se_homogeneous(homogeneous_of(s))
                             : run_gauss_seidel(users, cfg, GameKind::social());
        break;
      case SolveKind::Priced:
        eq = run_gauss_seidel(users, cfg, GameKind::regulated(optimal_price(s, users)));
        break;
      case SolveKind::Regulated:
        eq = run_gauss_seidel(users, cfg, GameKind::regulated(cfg.price));
        break;
    }
  } catch (const NonConvergenceError& e) {
    eq = e.partial();
    out.status.status = "not_converged";
  }

  out.table = ResultTable({"user", "kind", "price", "distance", "snr", "x", "beta", "profit",
                           "utility", "congestion", "local_delay", "airtime", "edge_delay"});
  for (int k = 0; k < eq.x.size(); ++k) {
    const UserProfile& u = users[static_cast<std::size_t>(k)];
    const CostBreakdown c = cost_breakdown(k, eq.x, users, cfg);
    const double rho = u.snr(cfg);
    const bool offloads = eq.x[k] > 0.0;
    out.table.add_row({count(k), to_string(eq.kind), num(eq.price),
                       u.snr_override ? na() : num(u.distance), num(rho), num(eq.x[k]),
                       num(threshold_from_frequency(eq.x[k], rho, cfg.channel)), num(c.profit),
                       num(c.utility), num(c.congestion), num(c.local.delay),
                       offloads ? num(c.edge.airtime) : na(),
                       offloads ? num(c.edge.edge_delay) : na()});
  }
  out.status.sweeps = eq.trace.empty() ? 0 : eq.iterations;
  out.status.residual = eq.residual;
  out.status.wall_time_ms = elapsed_ms(start);
  return out;
}

CommandOutput cmd_convergence(const ScenarioFile& s) {
  const auto start = Clock::now();
  s.validate();
  const std::vector<UserProfile> users = s.materialize_users();
  const SystemConfig& cfg = s.system;

  std::optional<double> ne_ref;
  std::optional<double> se_ref;
  double price = 0.0;
  if (s.homogeneous()) {
    const HomogeneousScenario hs = homogeneous_of(s);
    const EquilibriumResult ne = solve_ne_homogeneous(hs);
    const EquilibriumResult se = solve_se_homogeneous(hs);
    ne_ref = ne.x[0];
    se_ref = se.x[0];
    price = se.trivial ? 0.0 : optimal_price_homogeneous(hs, se.x[0]);
  }

  struct Series {
    std::string name;
    GameKind kind;
    std::optional<double> reference;
  };
  CommandOutput out;
  out.table = ResultTable({"series", "sweep", "mean_x", "delta_x", "price", "reference_mean_x",
                           "status"});

  // Social limit first: on heterogeneous users it sets the uniform price.
  std::vector<Series> plan;
  EquilibriumResult social;
  std::string social_status = "converged";
  try {
    social = run_gauss_seidel(users, cfg, GameKind::social());
  } catch (const NonConvergenceError& e) {
    social = e.partial();
    social_status = "not_converged";
    out.status.status = "not_converged";
  }
  if (!s.homogeneous()) {
    price = uniform_price(social.x, common_delay_weight(users), cfg);
    se_ref = social.x.mean();
  }

  const auto emit = [&](const std::string& name, const EquilibriumResult& r,
                        const std::string& status, std::optional<double> reference) {
    for (const SweepRecord& rec : r.trace) {
      out.table.add_row({name, count(rec.sweep), num(rec.mean_x), num(rec.delta_x), num(r.price),
                         reference ? num(*reference) : na(), status});
    }
    out.status.sweeps += r.iterations;
    out.status.residual = std::max(out.status.residual, r.residual);
  };

  for (const auto& [name, kind, reference] :
       {Series{"regulated_p0", GameKind::regulated(0.0), ne_ref},
        Series{"regulated_optimal", GameKind::regulated(price), se_ref}}) {
    EquilibriumResult r;
    std::string status = "converged";
    try {
      r = run_gauss_seidel(users, cfg, kind);
    } catch (const NonConvergenceError& e) {
      r = e.partial();
      status = "not_converged";
      out.status.status = "not_converged";
    }
    emit(name, r, status, reference);
  }
  emit("social", social, social_status, s.homogeneous() ? se_ref : std::nullopt);
  out.status.wall_time_ms = elapsed_ms(start);
  return out;
}

CommandOutput cmd_sweep(const ScenarioFile& s, SweepAxis axis) {
  const auto start = Clock::now();
  s.validate();
  if (axis == SweepAxis::Distance && !s.homogeneous()) {
    throw ScenarioError("distance sweeps need homogeneous users");
  }

  std::vector<ScenarioFile> points;
  if (axis == SweepAxis::Users) {
    for (int n : s.experiment.n_grid) {
      ScenarioFile p = s;
      p.set_user_count(n);
      points.push_back(p);
    }
  } else {
    for (double d : s.experiment.d_grid) {
      ScenarioFile p = s;
      auto& h = std::get<HomogeneousUsers>(p.users);
      h.profile.distance = d;
      h.profile.snr_override.reset();
      points.push_back(p);
    }
  }

  struct Row {
    std::vector<Cell> cells;
    int sweeps = 0;
    double residual = 0.0;
    bool ok = true;
  };

  const auto rows = parallel_map(points.size(), [&](std::size_t i) {
    const ScenarioFile& p = points[i];
    const SystemConfig& cfg = p.system;
    Row row;
    Cell distance = na();
    Cell snr = na();
    if (p.homogeneous()) {
      const auto& prof = std::get<HomogeneousUsers>(p.users).profile;
      distance = prof.snr_override ? na() : num(prof.distance);
      snr = num(prof.snr(cfg));
    }
    try {
      p.validate();
      const std::vector<UserProfile> users = p.materialize_users();
      const Equilibria e = solve_equilibria(p, users);
      const double profit_ne = mean_profit(e.ne.x, users, cfg);
      const double profit_se = mean_profit(e.se.x, users, cfg);
      row.cells = {count(p.user_count()),
                   distance,
                   snr,
                   num(e.ne.x.mean()),
                   num(e.se.x.mean()),
                   num(e.price),
                   num(profit_ne),
                   num(profit_se),
                   profit_ne > 0.0 ? num(profit_se / profit_ne) : na(),
                   num(mean_local_delay(e.ne.x, users, cfg)),
                   num(edge_delay(e.ne.x, cfg)),
                   num(mean_local_delay(e.se.x, users, cfg)),
                   num(edge_delay(e.se.x, cfg)),
                   std::string(e.se.trivial ? "trivial" : "ok")};
      row.sweeps = e.sweeps;
      row.residual = std::max(e.ne.residual, e.se.residual);
    } catch (const NonConvergenceError& err) {
      row.ok = false;
      row.cells = {count(p.user_count()), distance, snr, na(), na(), na(), na(), na(), na(),
                   na(), na(), na(), na(), std::string("not_converged")};
    } catch (const std::exception& err) {
      row.cells = {count(p.user_count()), distance, snr, na(), na(), na(), na(), na(), na(),
                   na(), na(), na(), na(), std::string("infeasible: ") + err.what()};
    }
    return row;
  });

  CommandOutput out;
  out.table = ResultTable({"n_users", "distance", "snr", "x_ne", "x_se", "price", "profit_ne",
                           "profit_se", "profit_ratio", "local_delay_ne", "edge_delay_ne",
                           "local_delay_se", "edge_delay_se", "status"});
  for (const Row& r : rows) {
    out.table.add_row(r.cells);
    out.status.sweeps += r.sweeps;
    out.status.residual = std::max(out.status.residual, r.residual);
    if (!r.ok) out.status.status = "not_converged";
  }
  out.status.wall_time_ms = elapsed_ms(start);
  return out;
}

CommandOutput cmd_sim_validate(const ScenarioFile& s) {
  const auto start = Clock::now();
  s.validate();
  const std::vector<UserProfile> users = s.materialize_users();
  const SystemConfig& cfg = s.system;

  EquilibriumResult se = s.homogeneous() ? solve_se_homogeneous(homogeneous_of(s))
                                         : run_gauss_seidel(users, cfg, GameKind::social());

  SimConfig sc;
  sc.horizon_slots = s.experiment.horizon_slots;
  sc.warmup_slots = s.experiment.warmup_slots;
  sc.seed = s.experiment.seed;
  sc.users = users;
  sc.system = cfg;
  for (int k = 0; k < se.x.size(); ++k) {
    sc.thresholds.push_back(
        threshold_from_frequency(se.x[k], users[static_cast<std::size_t>(k)].snr(cfg), cfg.channel));
  }
  const SimReport report = run_sim(sc);
  const std::vector<FrequencyCheck> freq = validate_frequency(sc, report);

  CommandOutput out;
  out.status.sweeps = se.trace.empty() ? 0 : se.iterations;
  out.status.residual = se.residual;
  out.table = ResultTable({"quantity", "user", "analytic", "simulated", "ci_half_width",
                           "rel_gap", "samples", "passed"});
  bool all_ok = true;
  const auto rel = [](double sim, double ana) { return std::abs(sim - ana) / ana; };

  int freq_ok = 0;
  double weight_sum = 0.0;
  double weighted_delay = 0.0;
  for (std::size_t k = 0; k < users.size(); ++k) {
    const FrequencyCheck& f = freq[k];
    freq_ok += f.within_3se ? 1 : 0;
    out.table.add_row({std::string("offload_frequency"), count(static_cast<std::int64_t>(k)),
                       num(f.analytic), num(f.empirical), num(3.0 * f.std_error),
                       f.analytic > 0.0 ? num(rel(f.empirical, f.analytic)) : na(),
                       count(report.users[k].arrivals), f.within_3se});
  }
  for (std::size_t k = 0; k < users.size(); ++k) {
    const double analytic = local_cost(se.x[static_cast<int>(k)], users[k], cfg).delay;
    const QueueStats& q = report.users[k].local;
    const double w = cfg.arrival_rate * (1.0 - se.x[static_cast<int>(k)]);
    weight_sum += w;
    weighted_delay += w * analytic;
    out.table.add_row({std::string("local_sojourn"), count(static_cast<std::int64_t>(k)),
                       num(analytic), num(q.mean_sojourn), num(q.ci_half_width),
                       num(rel(q.mean_sojourn, analytic)), count(q.samples), na()});
  }

  const double share = static_cast<double>(freq_ok) / static_cast<double>(users.size());
  const bool freq_pass = share >= 0.95;
  all_ok = all_ok && freq_pass;
  out.table.add_row({std::string("offload_frequency_within_3se_share"), na(), num(0.95),
                     num(share), na(), na(), count(static_cast<std::int64_t>(users.size())),
                     freq_pass});

  const double local_analytic = weighted_delay / weight_sum;
  const double local_gap = rel(report.pooled_local_mean, local_analytic);
  const bool local_pass = local_gap < 0.05;
  all_ok = all_ok && local_pass;
  out.table.add_row({std::string("local_sojourn_pooled"), na(), num(local_analytic),
                     num(report.pooled_local_mean), num(report.pooled_local_ci), num(local_gap),
                     count(report.pooled_local_samples), local_pass});

  const double load = edge_load(se.x, cfg);
  if (load > 0.0) {
    const double edge_analytic = 1.0 / (cfg.edge_service_rate() - load);
    const double edge_gap = rel(report.edge.mean_sojourn, edge_analytic);
    const bool edge_pass = edge_gap < 0.05;
    all_ok = all_ok && edge_pass;
    out.table.add_row({std::string("edge_sojourn"), na(), num(edge_analytic),
                       num(report.edge.mean_sojourn), num(report.edge.ci_half_width),
                       num(edge_gap), count(report.edge.samples), edge_pass});

    // Superposition: edge arrivals are a sum of independent Bernoulli streams.
    const double p = cfg.arrival_probability();
    const double slots = static_cast<double>(s.experiment.horizon_slots);
    double expected = 0.0;
    double variance = 0.0;
    for (int k = 0; k < se.x.size(); ++k) {
      const double q = p * se.x[k];
      expected += slots * q;
      variance += slots * q * (1.0 - q);
    }
    const double observed = static_cast<double>(report.edge.arrivals);
    const bool arrivals_pass = std::abs(observed - expected) <= 3.0 * std::sqrt(variance);
    all_ok = all_ok && arrivals_pass;
    out.table.add_row({std::string("edge_arrivals"), na(), num(expected), num(observed),
                       num(3.0 * std::sqrt(variance)), num(rel(observed, expected)),
                       count(report.edge.arrivals), arrivals_pass});
  } else {
    out.table.add_row({std::string("edge_sojourn"), na(), na(), na(), na(), na(),
                       count(report.edge.samples), na()});
  }

  if (!all_ok) out.status.status = "validation_failed";
  out.status.wall_time_ms = elapsed_ms(start);
  return out;
}

}  // namespace mecgame
