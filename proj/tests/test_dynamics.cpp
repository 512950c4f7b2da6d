#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "ipolicy/dynamics.hpp"

using namespace ipolicy;

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kThetaMax = 10.0;

double wrapped_metric(const DynamicsModel& m, const State& a, const State& b) {
  const double dx = a.c[0] - b.c[0];
  const double dy = a.c[1] - b.c[1];
  if (m.dim() == 2) return std::hypot(dx, dy);
  const double dth = wrap_angle(a.c[2] - b.c[2]) * m.theta_scale();
  return std::sqrt(dx * dx + dy * dy + dth * dth);
}

// Exhaustive minimization of dist(x + eps*f(x,u), x') over a 201x201 grid
// of the control set (201 values on the fixed interval for Dubins).
double brute_reach_distance(const DynamicsModel& m, const State& x,
                            const State& xp, double eps) {
  double best = std::numeric_limits<double>::infinity();
  const auto try_u = [&](const Control& u) {
    if (!m.control_set().contains(u)) return;
    const auto v = m.flow(x, u);
    State y = x;
    y.c[0] += eps * v[0];
    y.c[1] += eps * v[1];
    if (m.dim() == 3) y.c[2] = wrap_angle(y.c[2] + eps * v[2]);
    best = std::min(best, wrapped_metric(m, y, xp));
  };
  if (m.kind() == ModelKind::kDubinsCar) {
    for (int j = 0; j <= 200; ++j) try_u({1.0, -1.0 + 2.0 * j / 200});
    return best;
  }
  for (int i = 0; i <= 200; ++i) {
    for (int j = 0; j <= 200; ++j) {
      try_u({-1.0 + 2.0 * i / 200, -1.0 + 2.0 * j / 200});
    }
  }
  return best;
}

State random_state(const DynamicsModel& m, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  std::uniform_real_distribution<double> uth(-kPi, kPi);
  if (m.dim() == 2) return State::planar(u(rng), u(rng));
  return State::se2(u(rng), u(rng), uth(rng));
}

Control random_control(const DynamicsModel& m, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (;;) {
    Control c{m.kind() == ModelKind::kDubinsCar ? 1.0 : u(rng), u(rng)};
    if (m.control_set().contains(c)) return c;
  }
}
}  // namespace

TEST_CASE("flow examples") {
  const auto pm = DynamicsModel::point_mass();
  auto v = pm.flow(State::planar(2, 3), {0.6, -0.8});
  CHECK(v[0] == doctest::Approx(0.6));
  CHECK(v[1] == doctest::Approx(-0.8));

  const auto car = DynamicsModel::simple_car(kThetaMax);
  v = car.flow(State::se2(0, 0, 0), {1.0, 0.5});
  CHECK(v[0] == doctest::Approx(1.0));
  CHECK(v[1] == doctest::Approx(0.0));
  CHECK(v[2] == doctest::Approx(0.5));

  const auto dub = DynamicsModel::dubins_car(kThetaMax);
  v = dub.flow(State::se2(0, 0, kPi / 2), {1.0, 0.0});
  CHECK(v[0] == doctest::Approx(0.0));
  CHECK(v[1] == doctest::Approx(1.0));
  CHECK(v[2] == doctest::Approx(0.0));
}

TEST_CASE("flow rejects controls outside the control set") {
  const auto pm = DynamicsModel::point_mass();
  CHECK_THROWS_AS(pm.flow(State::planar(0, 0), {1.0, 1.0}),
                  std::invalid_argument);
  const auto dub = DynamicsModel::dubins_car(kThetaMax);
  CHECK_THROWS_AS(dub.flow(State::se2(0, 0, 0), {0.5, 0.0}),
                  std::invalid_argument);
}

TEST_CASE("integrate examples") {
  const auto pm = DynamicsModel::point_mass();
  State y = pm.integrate(State::planar(0, 0), {1.0, 0.0}, 0.5);
  CHECK(y.x() == doctest::Approx(0.5));
  CHECK(y.y() == doctest::Approx(0.0));
  CHECK_THROWS_AS(pm.integrate(State::planar(0, 0), {1.0, 0.0}, 0.0),
                  std::invalid_argument);

  const auto car = DynamicsModel::simple_car(kThetaMax);
  y = car.integrate(State::se2(0, 0, 0), {0.0, 1.0}, 0.1);
  CHECK(y.x() == doctest::Approx(0.0));
  CHECK(y.theta() == doctest::Approx(0.1));

  const auto dub = DynamicsModel::dubins_car(kThetaMax);
  y = dub.integrate(State::se2(0, 0, 0), {1.0, 1.0}, 0.01);
  CHECK(y.x() == doctest::Approx(0.01));
  CHECK(y.y() == doctest::Approx(0.0).epsilon(1e-3));
  CHECK(y.theta() == doctest::Approx(0.01));
}

TEST_CASE("reach_membership examples") {
  const auto pm = DynamicsModel::point_mass();
  CHECK(pm.reach_membership(State::planar(0, 0), State::planar(0.9, 0), 1.0, 0.1));
  CHECK_FALSE(
      pm.reach_membership(State::planar(0, 0), State::planar(1.2, 0), 1.0, 0.1));

  const auto dub = DynamicsModel::dubins_car(kThetaMax);
  const double eps = 0.5;
  CHECK_FALSE(dub.reach_membership(State::se2(0, 0, 0),
                                   State::se2(-eps, 0, 0), eps, 0.4 * eps));
  CHECK_THROWS_AS(pm.reach_membership(State::planar(0, 0), State::planar(1, 0),
                                      0.0, 0.1),
                  std::invalid_argument);
}

TEST_CASE("velocity bound holds on random (x, u)") {
  std::mt19937_64 rng(5);
  for (const auto& m :
       {DynamicsModel::point_mass(), DynamicsModel::simple_car(kThetaMax),
        DynamicsModel::dubins_car(kThetaMax)}) {
    for (int i = 0; i < 100000; ++i) {
      const State x = random_state(m, rng);
      const Control u = random_control(m, rng);
      const auto v = m.flow(x, u);
      const double speed = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
      REQUIRE(speed <= m.velocity_bound() + 1e-12);
    }
  }
}

TEST_CASE("reach_membership agrees with the brute-force control grid") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> ueps(0.2, 2.0);
  std::uniform_real_distribution<double> urho(0.0, 2.5);
  std::uniform_real_distribution<double> uoff(-1.5, 1.5);
  for (const auto& m :
       {DynamicsModel::point_mass(), DynamicsModel::simple_car(kThetaMax),
        DynamicsModel::dubins_car(kThetaMax)}) {
    for (int i = 0; i < 1000; ++i) {
      const State x = random_state(m, rng);
      const double eps = ueps(rng);
      const double rho = urho(rng);
      State xp = x;
      xp.c[0] += uoff(rng) * (1.0 + eps);
      xp.c[1] += uoff(rng) * (1.0 + eps);
      if (m.dim() == 3) xp.c[2] = wrap_angle(xp.c[2] + uoff(rng));
      const double exact = m.reach_distance(x, xp, eps);
      const double grid = brute_reach_distance(m, x, xp, eps);
      // Quantization error of the 201x201 control grid: one cell diagonal
      // in the velocity image, whose widest axis carries the theta rescale.
      const double gerr =
          eps * (2.0 / 200) * std::max(1.0, m.theta_scale()) * 2.0;
      // The grid minimum can only overestimate the exact projection.
      REQUIRE(grid >= exact - 1e-9);
      REQUIRE(grid <= exact + gerr);
      const bool member = m.reach_membership(x, xp, eps, rho);
      if (member != (grid <= rho)) {
        // Disagreements are confined to the quantization band at the
        // rho boundary.
        REQUIRE(std::abs(exact - rho) <= gerr + 1e-3);
      }
    }
  }
}

TEST_CASE("stoppable models can stay in place; Dubins cannot") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> ueps(0.01, 3.0);
  const auto pm = DynamicsModel::point_mass();
  const auto car = DynamicsModel::simple_car(kThetaMax);
  const auto dub = DynamicsModel::dubins_car(kThetaMax);
  CHECK(pm.stoppable());
  CHECK(car.stoppable());
  CHECK_FALSE(dub.stoppable());
  for (int i = 0; i < 1000; ++i) {
    const double eps = ueps(rng);
    const State xp = random_state(car, rng);
    REQUIRE(pm.reach_membership(State::planar(xp.x(), xp.y()),
                                State::planar(xp.x(), xp.y()), eps, 0.0));
    REQUIRE(car.reach_membership(xp, xp, eps, 0.0));
    // The Dubins forward-arc distance from x back to itself is eps.
    REQUIRE(dub.reach_distance(xp, xp, eps) == doctest::Approx(eps));
    REQUIRE_FALSE(dub.reach_membership(xp, xp, eps, 0.9 * eps));
  }
}

TEST_CASE("velocity image is convex") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> ul(0.0, 1.0);
  std::uniform_real_distribution<double> ueps(0.1, 2.0);
  for (const auto& m :
       {DynamicsModel::point_mass(), DynamicsModel::simple_car(kThetaMax),
        DynamicsModel::dubins_car(kThetaMax)}) {
    for (int i = 0; i < 10000; ++i) {
      const State x = random_state(m, rng);
      const Control u1 = random_control(m, rng);
      const Control u2 = random_control(m, rng);
      const double lam = ul(rng);
      const double eps = ueps(rng);
      const auto f1 = m.flow(x, u1);
      const auto f2 = m.flow(x, u2);
      State y = x;
      y.c[0] += eps * (lam * f1[0] + (1 - lam) * f2[0]);
      y.c[1] += eps * (lam * f1[1] + (1 - lam) * f2[1]);
      if (m.dim() == 3) {
        y.c[2] = wrap_angle(y.c[2] + eps * (lam * f1[2] + (1 - lam) * f2[2]));
      }
      REQUIRE(m.reach_membership(x, y, eps, 1e-9));
    }
  }
}

TEST_CASE("control menus live inside the control set") {
  for (const auto& m :
       {DynamicsModel::point_mass(), DynamicsModel::simple_car(kThetaMax),
        DynamicsModel::dubins_car(kThetaMax)}) {
    CHECK_FALSE(m.control_menu().empty());
    for (const Control& u : m.control_menu()) {
      REQUIRE(m.control_set().contains(u));
    }
  }
}

TEST_CASE("model constants") {
  CHECK(DynamicsModel::point_mass().velocity_bound() == doctest::Approx(1.0));
  CHECK(DynamicsModel::simple_car(kThetaMax).velocity_bound() ==
        doctest::Approx(std::sqrt(2.0)));
  CHECK(DynamicsModel::dubins_car(kThetaMax).velocity_bound() ==
        doctest::Approx(std::sqrt(2.0)));
  CHECK(DynamicsModel::point_mass().metric_speed() == doctest::Approx(1.0));
  const double sigma = kThetaMax / kPi;
  CHECK(DynamicsModel::simple_car(kThetaMax).metric_speed() ==
        doctest::Approx(std::sqrt(1.0 + sigma * sigma)));
  CHECK_THROWS_AS(DynamicsModel::by_name("hovercraft", kThetaMax),
                  std::invalid_argument);
}
