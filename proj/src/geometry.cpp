#include "ipolicy/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace ipolicy {

double wrap_angle(double a) {
  constexpr double kPi = std::numbers::pi;
  a = std::fmod(a + kPi, 2.0 * kPi);
  if (a < 0.0) a += 2.0 * kPi;
  return a - kPi;
}

State State::se2(double x, double y, double theta) {
  return State{{x, y, wrap_angle(theta)}, 3};
}

Obstacle Obstacle::make_rect(double xmin, double ymin, double xmax,
                             double ymax) {
  Obstacle o;
  o.kind = Kind::kRect;
  o.rect = {xmin, ymin, xmax, ymax};
  return o;
}

Obstacle Obstacle::make_circle(double cx, double cy, double r) {
  Obstacle o;
  o.kind = Kind::kCircle;
  o.circle = {cx, cy, r};
  return o;
}

double point_box_distance(double x, double y, const Rect& box) {
  const double dx = std::max({box.xmin - x, 0.0, x - box.xmax});
  const double dy = std::max({box.ymin - y, 0.0, y - box.ymax});
  return std::hypot(dx, dy);
}

namespace {

// Signed distance to a single obstacle, negative inside.
double obstacle_sdf(const Obstacle& o, double x, double y) {
  if (o.kind == Obstacle::Kind::kCircle) {
    return std::hypot(x - o.circle.cx, y - o.circle.cy) - o.circle.r;
  }
  const Rect& b = o.rect;
  const double out = point_box_distance(x, y, b);
  if (out > 0.0) return out;
  const double in = std::min({x - b.xmin, b.xmax - x, y - b.ymin, b.ymax - y});
  return -in;
}

double feature_size(const Obstacle& o) {
  if (o.kind == Obstacle::Kind::kCircle) return 2.0 * o.circle.r;
  return std::min(o.rect.xmax - o.rect.xmin, o.rect.ymax - o.rect.ymin);
}

}  // namespace

Environment::Environment(Rect workspace, std::vector<Obstacle> obstacles,
                         GoalRegion goal, int dim, double theta_max)
    : workspace_(workspace),
      obstacles_(std::move(obstacles)),
      goal_(goal),
      dim_(dim),
      theta_max_(theta_max) {
  if (dim_ != 2 && dim_ != 3) {
    throw std::invalid_argument("Environment: dim must be 2 or 3");
  }
  if (goal_.center.dim != dim_) {
    throw std::invalid_argument("Environment: goal center dimension mismatch");
  }
  min_feature_ = std::numeric_limits<double>::infinity();
  for (const auto& o : obstacles_) {
    min_feature_ = std::min(min_feature_, feature_size(o));
    const Rect& w = workspace_;
    bool intersects;
    if (o.kind == Obstacle::Kind::kCircle) {
      intersects = point_box_distance(o.circle.cx, o.circle.cy, w) <= o.circle.r;
    } else {
      intersects = o.rect.xmin <= w.xmax && o.rect.xmax >= w.xmin &&
                   o.rect.ymin <= w.ymax && o.rect.ymax >= w.ymin;
    }
    if (!intersects) {
      throw std::invalid_argument("Environment: obstacle outside workspace");
    }
  }
  if (!std::isfinite(min_feature_)) {
    min_feature_ = std::min(workspace_.xmax - workspace_.xmin,
                            workspace_.ymax - workspace_.ymin);
  }
  if (!is_free_inflated(goal_.center, 0.0)) {
    throw std::invalid_argument("Environment: goal center not in free space");
  }
}

double Environment::dist(const State& a, const State& b) const {
  if (a.dim != b.dim) {
    throw std::invalid_argument("dist: dimension mismatch");
  }
  const double dx = a.c[0] - b.c[0];
  const double dy = a.c[1] - b.c[1];
  if (a.dim == 2) return std::hypot(dx, dy);
  constexpr double kPi = std::numbers::pi;
  // Shortest arc on the heading circle, rescaled to the [-theta_max,
  // theta_max] coordinate. remainder() is exact, so the metric is
  // bit-for-bit symmetric.
  double dth = std::remainder(a.c[2] - b.c[2], 2.0 * kPi);
  dth *= theta_max_ / kPi;
  return std::sqrt(dx * dx + dy * dy + dth * dth);
}

double Environment::obstacle_signed_distance(double x, double y) const {
  double sd = std::numeric_limits<double>::infinity();
  for (const auto& o : obstacles_) {
    sd = std::min(sd, obstacle_sdf(o, x, y));
  }
  return sd;
}

bool Environment::is_free_inflated(const State& x, double r) const {
  if (r < 0.0) throw std::invalid_argument("is_free_inflated: r < 0");
  const double px = x.c[0], py = x.c[1];
  if (point_box_distance(px, py, workspace_) > r) return false;
  // X_free + rB equals workspace+rB minus obstacles deflated by r.
  return obstacle_signed_distance(px, py) >= -r;
}

double Environment::goal_distance(const State& x) const {
  return std::max(0.0, dist(x, goal_.center) - goal_.radius);
}

bool Environment::in_goal_inflated(const State& x, double r) const {
  if (r < 0.0) throw std::invalid_argument("in_goal_inflated: r < 0");
  return goal_distance(x) <= r;
}

bool Environment::segment_collision_free(const State& a, const State& b) const {
  const double len = std::hypot(b.c[0] - a.c[0], b.c[1] - a.c[1]);
  const double spacing = min_feature_ / 10.0;
  const int steps = std::max(1, static_cast<int>(std::ceil(len / spacing)));
  for (int i = 0; i <= steps; ++i) {
    const double t = static_cast<double>(i) / steps;
    const double px = a.c[0] + t * (b.c[0] - a.c[0]);
    const double py = a.c[1] + t * (b.c[1] - a.c[1]);
    if (point_box_distance(px, py, workspace_) > 0.0) return false;
    if (obstacle_signed_distance(px, py) < 0.0) return false;
  }
  return true;
}

double Environment::measure() const {
  const double area = (workspace_.xmax - workspace_.xmin) *
                      (workspace_.ymax - workspace_.ymin);
  if (dim_ == 2) return area;
  return area * 2.0 * theta_max_;
}

}  // namespace ipolicy
