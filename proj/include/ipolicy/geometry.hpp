#ifndef IPOLICY_GEOMETRY_HPP_
#define IPOLICY_GEOMETRY_HPP_

#include <array>
#include <cstddef>
#include <vector>

namespace ipolicy {

// Configuration-space point. dim is 2 (planar position) or 3 (position plus
// heading). The heading, when present, is stored in radians in [-pi, pi);
// metric computations rescale it to [-theta_max, theta_max] with wraparound.
struct State {
  std::array<double, 3> c{0.0, 0.0, 0.0};
  int dim = 2;

  double x() const { return c[0]; }
  double y() const { return c[1]; }
  double theta() const { return c[2]; }

  static State planar(double x, double y) { return State{{x, y, 0.0}, 2}; }
  static State se2(double x, double y, double theta);
};

// Wrap an angle into [-pi, pi).
double wrap_angle(double a);

struct Rect {
  double xmin, ymin, xmax, ymax;
};

struct Circle {
  double cx, cy, r;
};

struct Obstacle {
  enum class Kind { kRect, kCircle } kind;
  Rect rect{};
  Circle circle{};

  static Obstacle make_rect(double xmin, double ymin, double xmax, double ymax);
  static Obstacle make_circle(double cx, double cy, double r);
};

// Goal region: a metric ball of radius r around a center state. For planar
// models this is a Euclidean disc over position; for car models the ball is
// taken in the rescaled product metric over (x, y, theta).
struct GoalRegion {
  State center;
  double radius = 1.0;
};

class Environment {
 public:
  Environment(Rect workspace, std::vector<Obstacle> obstacles, GoalRegion goal,
              int dim, double theta_max);

  int dim() const { return dim_; }
  double theta_max() const { return theta_max_; }
  const Rect& workspace() const { return workspace_; }
  const std::vector<Obstacle>& obstacles() const { return obstacles_; }
  const GoalRegion& goal() const { return goal_; }

  // Scenario metric. Positions are Euclidean; the heading difference is the
  // shortest arc, rescaled so [-pi, pi] maps onto [-theta_max, theta_max].
  double dist(const State& a, const State& b) const;

  // Signed distance from a position to the obstacle set (negative inside).
  double obstacle_signed_distance(double x, double y) const;

  // x is in X_free + rB: within the workspace inflated by r and at signed
  // distance >= -r from every obstacle (obstacles deflated by r). Collision
  // is tested against position coordinates only.
  bool is_free_inflated(const State& x, double r) const;

  // dist(x, goal region) <= r under the scenario metric.
  bool in_goal_inflated(const State& x, double r) const;

  // Distance from x to the goal ball (0 inside).
  double goal_distance(const State& x) const;

  // Straight position-space segment from a to b avoids all obstacles,
  // checked by sub-sampling at spacing <= 1/10 of the smallest obstacle
  // feature size.
  bool segment_collision_free(const State& a, const State& b) const;

  // Smallest obstacle feature size (used to derive sampling spacing).
  double min_feature_size() const { return min_feature_; }

  // Lebesgue measure of the workspace box (times the theta extent for dim 3,
  // in rescaled units). Used by the dispersion constant.
  double measure() const;

 private:
  Rect workspace_;
  std::vector<Obstacle> obstacles_;
  GoalRegion goal_;
  int dim_;
  double theta_max_;
  double min_feature_;
};

// Euclidean distance from a point to an axis-aligned box (0 inside).
double point_box_distance(double x, double y, const Rect& box);

}  // namespace ipolicy

#endif  // IPOLICY_GEOMETRY_HPP_
