// Closed-form equilibria of identical users.

#include <cmath>
#include <optional>

#include "doctest.h"
#include "fixtures.hpp"
#include "mecgame/best_response.hpp"
#include "mecgame/model.hpp"
#include "oracle.hpp"

using namespace mecgame;
using fixtures::reference;

namespace {

// An edge CPU speed with c_t / mu_B exactly equal to g(0+), if one exists
// within a few ulps of the real-valued boundary.
std::optional<double> boundary_edge_hz(const HomogeneousScenario& s) {
  const double g0 = demand_at_zero(s.profile, s.cfg);
  double hz = s.profile.delay_weight / g0 * s.cfg.cycles_per_job;
  for (int step = 0; step < 64; ++step) {
    SystemConfig c = s.cfg;
    c.edge_cpu_hz = hz;
    const double lhs = s.profile.delay_weight / c.edge_service_rate();
    if (lhs == g0) return hz;
    hz = lhs < g0 ? std::nextafter(hz, 0.0) : std::nextafter(hz, INFINITY);
  }
  return std::nullopt;
}

}  // namespace

TEST_SUITE("homogeneous") {

TEST_CASE("existence threshold") {
  CHECK(ne_exists(reference(100)));
  CHECK(se_exists(reference(100)));

  auto slow = reference(100);
  slow.cfg.edge_cpu_hz = 1e-3 * slow.cfg.cycles_per_job;  // c_t / mu_B = 900
  CHECK_FALSE(ne_exists(slow));
  CHECK_FALSE(se_exists(slow));

  auto edge = reference(10);
  const auto hz = boundary_edge_hz(edge);
  REQUIRE(hz.has_value());
  edge.cfg.edge_cpu_hz = *hz;
  CHECK_FALSE(ne_exists(edge));
  CHECK(solve_ne_homogeneous(edge).trivial);
  edge.cfg.edge_cpu_hz = std::nextafter(*hz, INFINITY) * (1 + 1e-12);
  CHECK(ne_exists(edge));
}

TEST_CASE("single user: Nash and social coincide") {
  const auto s = reference(1);
  const EquilibriumResult ne = solve_ne_homogeneous(s);
  const EquilibriumResult se = solve_se_homogeneous(s);
  CHECK(ne.x[0] == doctest::Approx(se.x[0]).epsilon(1e-12));
  CHECK(ne.x[0] == doctest::Approx(0.716634).epsilon(1e-5));
  CHECK(optimal_price_homogeneous(s) == 0.0);
}

TEST_CASE("reference values at N = 100") {
  const auto s = reference(100);
  const EquilibriumResult ne = solve_ne_homogeneous(s);
  const EquilibriumResult se = solve_se_homogeneous(s);
  CHECK(ne.kind == EquilibriumKind::Nash);
  CHECK(se.kind == EquilibriumKind::Social);
  CHECK(ne.x[0] == doctest::Approx(0.486396).epsilon(1e-5));
  CHECK(se.x[0] == doctest::Approx(0.434494).epsilon(1e-5));
  CHECK(optimal_price_homogeneous(s) == doctest::Approx(1.50365).epsilon(1e-5));
}

TEST_CASE("solver postconditions across N") {
  for (int n : {1, 2, 5, 10, 20, 50, 100, 150, 200}) {
    CAPTURE(n);
    const auto s = reference(n);
    const EquilibriumResult ne = solve_ne_homogeneous(s);
    const EquilibriumResult se = solve_se_homogeneous(s);
    REQUIRE(ne.x.size() == n);
    REQUIRE(se.x.size() == n);
    CHECK_FALSE(ne.trivial);
    CHECK((ne.x.array() == ne.x[0]).all());
    CHECK((se.x.array() == se.x[0]).all());
    CHECK(nash_residual(ne.x[0], s) < 1e-8);
    CHECK(social_residual(se.x[0], s) < 1e-8);
    CHECK(ne.residual < 1e-8);
    CHECK(se.residual < 1e-8);
    CHECK(is_stable(ne.x, s.cfg));
    CHECK(is_stable(se.x, s.cfg));
    CHECK(ne.x[0] < demand_root(s.profile, s.cfg));
    if (n >= 2) CHECK(ne.x[0] > se.x[0]);
  }
}

TEST_CASE("comparative statics in N and distance") {
  double prev_ne = 2.0, prev_se = 2.0;
  for (int n = 1; n <= 200; n += 7) {
    const auto s = reference(n);
    const double ne = solve_ne_homogeneous(s).x[0];
    const double se = solve_se_homogeneous(s).x[0];
    CHECK(ne <= prev_ne);
    CHECK(se <= prev_se);
    prev_ne = ne;
    prev_se = se;
  }
  prev_ne = prev_se = 2.0;
  for (double d = 5.0; d <= 120.0; d += 5.0) {
    auto s = reference(100);
    s.profile.snr_override.reset();
    s.profile.distance = d;
    const double ne = solve_ne_homogeneous(s).x[0];
    const double se = solve_se_homogeneous(s).x[0];
    CHECK(ne <= prev_ne);
    CHECK(se <= prev_se);
    prev_ne = ne;
    prev_se = se;
  }
}

TEST_CASE("trivial equilibrium below the existence threshold") {
  auto s = reference(20);
  s.cfg.edge_cpu_hz = 1e5;
  const EquilibriumResult ne = solve_ne_homogeneous(s);
  const EquilibriumResult se = solve_se_homogeneous(s);
  CHECK(ne.trivial);
  CHECK(se.trivial);
  CHECK(ne.kind == EquilibriumKind::Nash);
  CHECK(se.kind == EquilibriumKind::Social);
  CHECK(ne.x.size() == 20);
  CHECK((ne.x.array() == 0.0).all());
  CHECK((se.x.array() == 0.0).all());
  CHECK(optimal_price_homogeneous(s) == 0.0);
}

TEST_CASE("price formula against the oracle demand") {
  for (int n : {2, 10, 100, 200}) {
    const auto s = reference(n);
    const double x = solve_se_homogeneous(s).x[0];
    const oracle::User u = oracle::make_user(s.profile, s.cfg);
    const oracle::System sys = oracle::make_system(s.cfg);
    const double expected = (n - 1) * sys.lambda * x * oracle::demand(x, u, sys) / sys.mu_b;
    CHECK(optimal_price_homogeneous(s) == doctest::Approx(expected).epsilon(1e-10));
  }
}

TEST_CASE("uniform price overshoots the exact price by 1/(N-1)") {
  for (int n : {2, 10, 100, 200}) {
    const auto s = reference(n);
    const EquilibriumResult se = solve_se_homogeneous(s);
    const double exact = optimal_price_homogeneous(s, se.x[0]);
    const double uniform = uniform_price(se.x, s.profile.delay_weight, s.cfg);
    CHECK((uniform - exact) / exact == doctest::Approx(1.0 / (n - 1)).epsilon(1e-7));
  }
}

TEST_CASE("social optimum does not lose total profit") {
  for (int n : {1, 10, 50, 100, 200}) {
    const auto s = reference(n);
    const auto users = s.users();
    const OffloadVector ne = solve_ne_homogeneous(s).x;
    const OffloadVector se = solve_se_homogeneous(s).x;
    double sum_ne = 0.0, sum_se = 0.0;
    for (int k = 0; k < n; ++k) {
      sum_ne += profit(k, ne, users, s.cfg).profit;
      sum_se += profit(k, se, users, s.cfg).profit;
    }
    CHECK(sum_se >= sum_ne - 1e-12 * std::abs(sum_ne));
  }
}

TEST_CASE("equation left sides at the bracket ends") {
  // Where the equilibrium exists the Nash left side starts below mu_B.
  const auto s = reference(100);
  CHECK(nash_lhs(0.0, s) < s.cfg.edge_service_rate());
  CHECK(social_lhs(0.0, s) < s.cfg.edge_service_rate());
  const double x_up = demand_root(s.profile, s.cfg);
  CHECK(std::isinf(social_lhs(x_up + 1e-6, s)));
}

}  // TEST_SUITE
