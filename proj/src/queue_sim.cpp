// src/queue_sim.cpp

#include "mecgame/queue_sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "mecgame/model.hpp"
#include "mecgame/philox.hpp"

namespace mecgame {

namespace {

constexpr int kBatches = 20;
constexpr double kStudent975 = 2.093;  // t quantile, 19 degrees of freedom
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct EdgeJob {
  double arrival;
  double service;
  int user;
  bool measured;
};

// Mean and batch-means 95% half-width of a sample in arrival order.
void summarize(const std::vector<double>& sojourns, QueueStats& q) {
  q.samples = static_cast<std::int64_t>(sojourns.size());
  if (sojourns.empty()) {
    q.mean_sojourn = kNaN;
    q.ci_half_width = kNaN;
    return;
  }
  q.mean_sojourn = std::accumulate(sojourns.begin(), sojourns.end(), 0.0) /
                   static_cast<double>(sojourns.size());
  const std::size_t per_batch = sojourns.size() / kBatches;
  if (per_batch < 2) {
    q.ci_half_width = kNaN;
    return;
  }
  std::vector<double> means(kBatches);
  for (int b = 0; b < kBatches; ++b) {
    const auto first = sojourns.begin() + static_cast<std::ptrdiff_t>(b * per_batch);
    means[static_cast<std::size_t>(b)] =
        std::accumulate(first, first + static_cast<std::ptrdiff_t>(per_batch), 0.0) /
        static_cast<double>(per_batch);
  }
  const double grand = std::accumulate(means.begin(), means.end(), 0.0) / kBatches;
  double ss = 0.0;
  for (double m : means) ss += (m - grand) * (m - grand);
  const double sd = std::sqrt(ss / (kBatches - 1));
  q.ci_half_width = kStudent975 * sd / std::sqrt(static_cast<double>(kBatches));
}

}  // namespace

std::uint64_t stream_id(int user, SimStream purpose) {
  return (static_cast<std::uint64_t>(user) << 8) | static_cast<std::uint64_t>(purpose);
}

void SimConfig::validate() const {
  system.validate();
  if (horizon_slots <= 0) throw DomainError("simulation horizon must be positive");
  if (warmup() < 0 || warmup() >= horizon_slots) {
    throw DomainError("warmup must satisfy 0 <= warmup < horizon");
  }
  if (users.empty()) throw DomainError("simulation needs at least one user");
  if (thresholds.size() != users.size()) {
    throw DomainError("one offloading threshold per user is required");
  }
  for (const auto& u : users) u.validate(system);
  for (double beta : thresholds) {
    if (!(beta >= 0.0)) throw DomainError("offloading thresholds must be non-negative");
  }
}

std::vector<double> analytic_frequencies(const SimConfig& sc) {
  std::vector<double> x(sc.users.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    x[k] = frequency_from_threshold(sc.thresholds[k], sc.users[k].snr(sc.system),
                                    sc.system.channel);
  }
  return x;
}

SimReport run_sim(const SimConfig& sc) {
  sc.validate();
  const SystemConfig& cfg = sc.system;
  const std::vector<double> x = analytic_frequencies(sc);
  double load = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (!(cfg.arrival_rate * (1.0 - x[k]) < sc.users[k].local_service_rate(cfg))) {
      throw InfeasibleError("simulation: local queue of user " + std::to_string(k) +
                            " is unstable");
    }
    load += cfg.arrival_rate * x[k];
  }
  if (!(load < cfg.edge_service_rate())) {
    throw InfeasibleError("simulation: edge queue is unstable");
  }

  const double t0 = cfg.slot_seconds;
  const double p_arrival = cfg.arrival_probability();
  const double horizon_end = static_cast<double>(sc.horizon_slots) * t0;
  const std::int64_t warmup = sc.warmup();
  const double mu_b = cfg.edge_service_rate();

  SimReport report;
  report.users.resize(sc.users.size());
  std::vector<EdgeJob> edge_jobs;
  double pooled_sum = 0.0;
  double pooled_var = 0.0;
  bool pooled_ci_ok = true;

  for (std::size_t k = 0; k < sc.users.size(); ++k) {
    const int user = static_cast<int>(k);
    const UserProfile& u = sc.users[k];
    PhiloxStream arrivals(sc.seed, stream_id(user, SimStream::Arrival));
    PhiloxStream channel(sc.seed, stream_id(user, SimStream::Channel));
    PhiloxStream local_service(sc.seed, stream_id(user, SimStream::LocalService));
    PhiloxStream edge_service(sc.seed, stream_id(user, SimStream::EdgeService));

    const double beta = sc.thresholds[k];
    const double gain_threshold =
        std::isinf(beta) ? std::numeric_limits<double>::infinity()
                         : std::expm1(beta) / u.snr(cfg);
    const double mu_m = u.local_service_rate(cfg);

    UserSimStats& st = report.users[k];
    std::vector<double> sojourns;
    double last_departure = 0.0;

    // Skipping whole runs of empty slots is equivalent to a Bernoulli draw
    // per slot.
    std::int64_t slot = static_cast<std::int64_t>(arrivals.geometric(p_arrival)) - 1;
    while (slot < sc.horizon_slots) {
      const double t = static_cast<double>(slot) * t0;
      const bool measured = slot >= warmup;
      ++st.arrivals;
      if (cfg.channel.sample(channel.uniform()) > gain_threshold) {
        ++st.offloads;
        edge_jobs.push_back({t, edge_service.exponential(mu_b), user, measured});
      } else {
        const double departure = std::max(t, last_departure) + local_service.exponential(mu_m);
        last_departure = departure;
        ++st.local.arrivals;
        if (departure <= horizon_end) {
          ++st.local.departures;
        } else {
          ++st.local.in_system;
        }
        if (measured) sojourns.push_back(departure - t);
      }
      const auto gap = static_cast<std::int64_t>(arrivals.geometric(p_arrival));
      if (gap > sc.horizon_slots - slot) break;
      slot += gap;
    }
    st.offload_frequency =
        st.arrivals > 0 ? static_cast<double>(st.offloads) / static_cast<double>(st.arrivals)
                        : kNaN;
    summarize(sojourns, st.local);
    if (!sojourns.empty()) {
      const double n = static_cast<double>(sojourns.size());
      pooled_sum += st.local.mean_sojourn * n;
      const double se = st.local.ci_half_width / kStudent975;
      if (std::isnan(se)) pooled_ci_ok = false;
      pooled_var += n * n * se * se;
    }
    report.pooled_local_samples += st.local.samples;
  }

  if (report.pooled_local_samples > 0) {
    const double n = static_cast<double>(report.pooled_local_samples);
    report.pooled_local_mean = pooled_sum / n;
    report.pooled_local_ci = pooled_ci_ok ? kStudent975 * std::sqrt(pooled_var) / n : kNaN;
  } else {
    report.pooled_local_mean = kNaN;
    report.pooled_local_ci = kNaN;
  }

  // FIFO at the edge: same-slot arrivals are served in user-index order.
  std::sort(edge_jobs.begin(), edge_jobs.end(), [](const EdgeJob& a, const EdgeJob& b) {
    return a.arrival < b.arrival || (a.arrival == b.arrival && a.user < b.user);
  });
  std::vector<double> edge_sojourns;
  double last_departure = 0.0;
  for (const EdgeJob& job : edge_jobs) {
    const double departure = std::max(job.arrival, last_departure) + job.service;
    last_departure = departure;
    ++report.edge.arrivals;
    if (departure <= horizon_end) {
      ++report.edge.departures;
    } else {
      ++report.edge.in_system;
    }
    if (job.measured) edge_sojourns.push_back(departure - job.arrival);
  }
  summarize(edge_sojourns, report.edge);
  return report;
}

std::vector<FrequencyCheck> validate_frequency(const SimConfig& sc, const SimReport& report) {
  const std::vector<double> analytic = analytic_frequencies(sc);
  std::vector<FrequencyCheck> out(analytic.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    const UserSimStats& st = report.users.at(k);
    FrequencyCheck& c = out[k];
    c.analytic = analytic[k];
    c.empirical = st.offload_frequency;
    c.gap = c.empirical - c.analytic;
    const double n = static_cast<double>(st.arrivals);
    c.std_error = n > 0 ? std::sqrt(c.analytic * (1.0 - c.analytic) / n) : kNaN;
    // A degenerate probability (0 or 1) has zero spread and must match exactly.
    c.within_3se = n > 0 && std::abs(c.gap) <= 3.0 * c.std_error;
  }
  return out;
}

std::vector<FrequencyCheck> validate_frequency(const SimConfig& sc) {
  return validate_frequency(sc, run_sim(sc));
}

}  // namespace mecgame
