#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "replab/equilibrium.hpp"
#include "replab/ode.hpp"
#include "test_support.hpp"

using namespace replab;
using namespace replab::testing;

namespace {

StrategyProfileXd profile2(double x1, double y1) {
  return StrategyProfileXd(SimplexPointXd(Eigen::Vector2d(x1, 1 - x1)),
                           SimplexPointXd(Eigen::Vector2d(y1, 1 - y1)));
}

}  // namespace

TEST_CASE("replicator field values on matching pennies") {
  const GameXd g = matching_pennies();

  const auto at_nash = replicator_field(g, profile2(0.5, 0.5));
  CHECK(at_nash.first.isZero(0.0));
  CHECK(at_nash.second.isZero(0.0));

  // Hand evaluation of the reduced form 2 x(1-x)(2y-1).
  const auto f = replicator_field(g, profile2(0.9, 0.9));
  CHECK(f.first[0] == doctest::Approx(0.144).epsilon(1e-12));
  CHECK(f.second[0] == doctest::Approx(-0.144).epsilon(1e-12));

  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const auto at_corner =
          replicator_field(g, StrategyProfileXd::vertex(2, 2, i, j));
      CHECK(at_corner.first.isZero(0.0));
      CHECK(at_corner.second.isZero(0.0));
    }
}

TEST_CASE("replicator field is tangent to the simplex product") {
  std::mt19937_64 rng(31);
  for (int k = 0; k < 300; ++k) {
    const GameXd g = random_game(rng);
    const auto f = replicator_field(g, random_profile(rng, g));
    CHECK(std::abs(f.first.sum()) <= 1e-12);
    CHECK(std::abs(f.second.sum()) <= 1e-12);
  }
}

TEST_CASE("constant of motion on matching pennies") {
  const GameXd g = matching_pennies();
  const StrategyProfileXd ref = StrategyProfileXd::uniform(2, 2);
  const auto traj =
      integrate_ode(g, OdeConfigXd(1e-3, 100.0, profile2(0.6, 0.4), 10));
  const double v0 = cross_entropy(ref, traj.states.front());
  double worst = 0;
  for (const auto& s : traj.states)
    worst = std::max(worst, std::abs(cross_entropy(ref, s) - v0));
  CHECK(worst < 1e-6);

  // Interior inits stay interior, and simplex invariants hold throughout.
  for (const auto& s : traj.states) {
    CHECK(s.x.coeffs().minCoeff() > 0.0);
    CHECK(std::abs(s.x.coeffs().sum() - 1.0) <= 1e-9);
    CHECK(std::abs(s.y.coeffs().sum() - 1.0) <= 1e-9);
  }
  CHECK(traj.times.front() == 0.0);
  CHECK(traj.t_back() == doctest::Approx(100.0).epsilon(1e-12));
}

TEST_CASE("3x2 game: convergence to the boundary with monotone V") {
  const GameXd g = mp_3x2();
  const auto report = maximal_support_equilibrium(g);
  const StrategyProfileXd ref(report.p, report.q);

  std::mt19937_64 rng(32);
  const StrategyProfileXd init = random_interior_profile(rng, g, 0.1);
  const auto traj = integrate_ode(g, OdeConfigXd(1e-3, 100.0, init, 10));

  CHECK(traj.states.back().x[2] < 1e-3);
  double prev = cross_entropy(ref, traj.states.front());
  for (std::size_t k = 1; k < traj.size(); ++k) {
    const double cur = cross_entropy(ref, traj.states[k]);
    CHECK(cur <= prev + 1e-5);
    prev = cur;
  }
}

TEST_CASE("divergence of the anti-equilibrium cross entropy") {
  const GameXd g = mp_3x2();
  const auto report = maximal_support_equilibrium(g);
  const StrategyProfileXd anti(report.p_star, report.q_star);
  std::mt19937_64 rng(33);
  const auto traj = integrate_ode(
      g, OdeConfigXd(1e-3, 200.0, random_interior_profile(rng, g, 0.1), 100));
  CHECK(cross_entropy(anti, traj.states.back()) >
        cross_entropy(anti, traj.states.front()) + 5.0);
}

TEST_CASE("zero game gives a constant trajectory") {
  const GameXd g("zero", Eigen::MatrixXd::Zero(2, 2));
  const auto traj = integrate_ode(g, OdeConfigXd(1e-2, 1.0, profile2(0.3, 0.8)));
  for (const auto& s : traj.states) {
    CHECK(s.x[0] == 0.3);
    CHECK(s.y[0] == 0.8);
  }
}

TEST_CASE("non-finite states raise an error naming the step") {
  Eigen::MatrixXd a(2, 2);
  a << 1e308, -1e308, -1e308, 1e308;
  const GameXd g("huge", a);
  OdeConfigXd cfg(0.5, 50.0, profile2(0.9, 0.8), 1000, /*renorm=*/false);
  CHECK_THROWS_AS(integrate_ode(g, cfg), NonFiniteState);
}

TEST_CASE("ode config preconditions") {
  CHECK_THROWS_AS(OdeConfigXd(0.0, 1.0, profile2(0.5, 0.5)), PreconditionError);
  CHECK_THROWS_AS(OdeConfigXd(2.0, 1.0, profile2(0.5, 0.5)), PreconditionError);
  CHECK_THROWS_AS(OdeConfigXd(1e-3, 1.0, profile2(0.5, 0.5), 0),
                  PreconditionError);
}

TEST_CASE("cross entropy and KL values") {
  const StrategyProfileXd ref = StrategyProfileXd::uniform(2, 2);
  CHECK(cross_entropy(ref, ref) ==
        doctest::Approx(2 * std::log(2.0)).epsilon(1e-12));
  CHECK(kl_sum(ref, ref) == 0.0);

  const StrategyProfileXd s = profile2(0.9, 0.5);
  const double expected = -0.5 * (std::log(0.9) + std::log(0.1)) + std::log(2.0);
  CHECK(cross_entropy(ref, s) == doctest::Approx(expected).epsilon(1e-14));
  CHECK(cross_entropy(ref, s) == doctest::Approx(1.8971200).epsilon(1e-6));
  CHECK(kl_sum(ref, s) ==
        doctest::Approx(expected - 2 * std::log(2.0)).epsilon(1e-12));
  CHECK(kl_sum(ref, s) == doctest::Approx(0.5108256).epsilon(1e-6));
  CHECK(kl_sum(ref, s) >= -1e-12);

  // Vanishing state component on the reference support diverges.
  const StrategyProfileXd boundary(SimplexPointXd(Eigen::Vector2d(0.0, 1.0)),
                                   SimplexPointXd(Eigen::Vector2d(0.5, 0.5)));
  CHECK_THROWS_AS(cross_entropy(ref, boundary), DivergedToBoundary);
}

TEST_CASE("lyapunov time derivative signs and finite-difference check") {
  const GameXd mp = matching_pennies();
  const StrategyProfileXd nash = StrategyProfileXd::uniform(2, 2);
  std::mt19937_64 rng(34);
  for (int k = 0; k < 50; ++k) {
    const auto s = random_interior_profile(rng, mp);
    CHECK(lyapunov_time_derivative(mp, nash, s) == 0.0);
  }

  const GameXd g = mp_3x2();
  const auto report = maximal_support_equilibrium(g);
  const StrategyProfileXd eq(report.p, report.q);
  const StrategyProfileXd anti(report.p_star, report.q_star);
  for (int k = 0; k < 50; ++k) {
    const auto s = random_interior_profile(rng, g);
    CHECK(lyapunov_time_derivative(g, eq, s) < 0.0);
    CHECK(lyapunov_time_derivative(g, anti, s) > 0.0);
  }

  // Centered differences of V along a fine trajectory agree with the
  // analytic derivative to 1e-4 relative error.
  const auto traj = integrate_ode(
      g, OdeConfigXd(1e-3, 2.0, random_interior_profile(rng, g, 0.15), 1));
  const double h = traj.times[1] - traj.times[0];
  int checked = 0;
  for (std::size_t k = 1; k + 1 < traj.size(); k += 50) {
    const double fd = (cross_entropy(eq, traj.states[k + 1]) -
                       cross_entropy(eq, traj.states[k - 1])) /
                      (2 * h);
    const double an = lyapunov_time_derivative(g, eq, traj.states[k]);
    if (std::abs(an) > 1e-3) {
      CHECK(std::abs(fd - an) <= 1e-4 * std::abs(an));
      ++checked;
    }
  }
  CHECK(checked > 10);

  // For the conserved case the finite difference is numerically zero.
  const auto mp_traj = integrate_ode(mp, OdeConfigXd(1e-3, 1.0, profile2(0.7, 0.4), 1));
  for (std::size_t k = 1; k + 1 < mp_traj.size(); k += 100) {
    const double fd = (cross_entropy(nash, mp_traj.states[k + 1]) -
                       cross_entropy(nash, mp_traj.states[k - 1])) /
                      (2 * h);
    CHECK(std::abs(fd) <= 1e-6);
  }
}
