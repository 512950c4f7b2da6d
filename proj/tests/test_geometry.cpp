#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "ipolicy/geometry.hpp"
#include "test_util.hpp"

using namespace ipolicy;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("dist: planar euclidean") {
  Environment env = testutil::empty_world();
  CHECK(env.dist(State::planar(0, 0), State::planar(3, 4)) == doctest::Approx(5.0));
  const State p{{1, 2, 3}, 2};
  CHECK(env.dist(p, p) == 0.0);
}

TEST_CASE("dist: heading wraparound in rescaled coordinates") {
  Environment env = testutil::se2_world();
  // Rescaled heading 9.5 and -9.5 with theta_max = 10 are 1.0 apart through
  // the wrap, not 19.0. Stored headings are radians.
  const State a = State::se2(0, 0, 9.5 * kPi / 10.0);
  const State b = State::se2(0, 0, -9.5 * kPi / 10.0);
  CHECK(env.dist(a, b) == doctest::Approx(1.0).epsilon(1e-12));
  const State c = State::se2(1, 2, 3);
  CHECK(env.dist(c, c) == 0.0);
}

TEST_CASE("dist: dimension mismatch rejected") {
  Environment env = testutil::empty_world();
  State a = State::planar(0, 0);
  State b = State::se2(0, 0, 0);
  CHECK_THROWS_AS(env.dist(a, b), std::invalid_argument);
}

TEST_CASE("dist: metric axioms on random triples") {
  Environment env = testutil::se2_world();
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-12.0, 12.0);
  std::uniform_real_distribution<double> uth(-kPi, kPi);
  auto draw = [&] { return State::se2(u(rng), u(rng), uth(rng)); };
  for (int i = 0; i < 100000; ++i) {
    const State a = draw(), b = draw(), c = draw();
    const double ab = env.dist(a, b);
    const double bc = env.dist(b, c);
    const double ac = env.dist(a, c);
    REQUIRE(ab >= 0.0);
    REQUIRE(env.dist(b, a) == ab);  // symmetry exact
    REQUIRE(ac <= ab + bc + 1e-12);
    REQUIRE(env.dist(a, a) == 0.0);
  }
}

TEST_CASE("is_free_inflated basics") {
  Environment env = testutil::cluttered_world();
  CHECK(env.is_free_inflated(State::planar(0, -8), 0.0));
  // Center of the rectangular obstacle.
  CHECK_FALSE(env.is_free_inflated(State::planar(-4, 4), 0.0));
  // Slightly outside the workspace boundary, within the inflation band.
  CHECK(env.is_free_inflated(State::planar(10.05, 0), 0.1));
  CHECK_FALSE(env.is_free_inflated(State::planar(10.05, 0), 0.0));
}

TEST_CASE("is_free_inflated monotone in r") {
  Environment env = testutil::cluttered_world();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-12.0, 12.0);
  std::uniform_real_distribution<double> ur(0.0, 2.0);
  for (int i = 0; i < 20000; ++i) {
    const State x = State::planar(u(rng), u(rng));
    const double r1 = ur(rng), r2 = r1 + ur(rng);
    if (env.is_free_inflated(x, r1)) REQUIRE(env.is_free_inflated(x, r2));
  }
}

TEST_CASE("in_goal_inflated") {
  Environment env = testutil::empty_world(1.0);
  CHECK(env.in_goal_inflated(State::planar(0, 0), 0.0));
  CHECK(env.in_goal_inflated(State::planar(0, 0), 3.0));
  // dist to the unit goal ball from (1.4, 0) is 0.4.
  CHECK(env.in_goal_inflated(State::planar(1.4, 0), 0.5));
  CHECK_FALSE(env.in_goal_inflated(State::planar(10, 10), 0.5));
}

TEST_CASE("in_goal_inflated: membership persists under inflation") {
  Environment env = testutil::empty_world(1.0);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::uniform_real_distribution<double> ur(0.0, 4.0);
  for (int i = 0; i < 20000; ++i) {
    const State x = State::planar(u(rng), u(rng));
    if (env.in_goal_inflated(x, 0.0)) REQUIRE(env.in_goal_inflated(x, ur(rng)));
  }
}

TEST_CASE("segment_collision_free") {
  Environment env = testutil::cluttered_world();
  CHECK(env.segment_collision_free(State::planar(-9, -9), State::planar(0, -8)));
  // Through the rectangle obstacle center (-4, 4).
  CHECK_FALSE(
      env.segment_collision_free(State::planar(-8, 4), State::planar(0, 4)));
  // Through the circle obstacle center (4, -4).
  CHECK_FALSE(
      env.segment_collision_free(State::planar(4, -9), State::planar(4, 0)));
  // Grazing the circle (center (4,-4), r=2) at clearance 1e-3: the segment
  // y = -1.999 stays outside.
  CHECK(env.segment_collision_free(State::planar(0, -1.999),
                                   State::planar(8, -1.999)));
  CHECK_FALSE(env.segment_collision_free(State::planar(0, -2.1),
                                         State::planar(8, -2.1)));
}

TEST_CASE("environment construction invariants") {
  // Obstacle fully outside the workspace is rejected.
  std::vector<Obstacle> obs{Obstacle::make_rect(30, 30, 40, 40)};
  CHECK_THROWS_AS(Environment({-10, -10, 10, 10}, obs,
                              GoalRegion{State::planar(0, 0), 1.0}, 2, 10.0),
                  std::invalid_argument);
  // Goal center buried in an obstacle is rejected.
  std::vector<Obstacle> cover{Obstacle::make_rect(-2, -2, 2, 2)};
  CHECK_THROWS_AS(Environment({-10, -10, 10, 10}, cover,
                              GoalRegion{State::planar(0, 0), 1.0}, 2, 10.0),
                  std::invalid_argument);
}

TEST_CASE("point_box_distance") {
  const Rect b{0, 0, 2, 2};
  CHECK(point_box_distance(1, 1, b) == 0.0);
  CHECK(point_box_distance(5, 2, b) == doctest::Approx(3.0));
  CHECK(point_box_distance(5, 6, b) == doctest::Approx(5.0));
}

TEST_CASE("wrap_angle") {
  CHECK(wrap_angle(0.0) == 0.0);
  CHECK(wrap_angle(3 * kPi) == doctest::Approx(-kPi));
  CHECK(wrap_angle(-kPi / 2) == doctest::Approx(-kPi / 2));
  CHECK(wrap_angle(2 * kPi + 0.25) == doctest::Approx(0.25));
}
