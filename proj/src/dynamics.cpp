#include "ipolicy/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ipolicy {

namespace {
constexpr double kPi = std::numbers::pi;

// Menu order matters: greedy_control breaks score ties by lowest index, so
// index 0 should be a motion that keeps making progress on value plateaus
// (the goal-inflated region is flat at 0).
std::vector<Control> disc_menu() {
  std::vector<Control> menu;
  for (int i = 0; i < 16; ++i) {
    const double a = kPi + 2.0 * kPi * i / 16;
    menu.push_back({std::cos(a), std::sin(a)});
  }
  menu.push_back({0.0, 0.0});
  return menu;
}

std::vector<Control> box_menu(double lo, double hi, int per_axis) {
  std::vector<Control> menu;
  menu.push_back({hi, 0.0});  // straight ahead first
  for (int i = 0; i < per_axis; ++i) {
    for (int j = 0; j < per_axis; ++j) {
      const double u1 = lo + (hi - lo) * i / (per_axis - 1);
      const double u2 = lo + (hi - lo) * j / (per_axis - 1);
      if (u1 == hi && u2 == 0.0) continue;
      menu.push_back({u1, u2});
    }
  }
  return menu;
}

std::vector<Control> interval_menu(double fixed, double lo, double hi, int n) {
  std::vector<Control> menu;
  menu.push_back({fixed, 0.0});  // straight ahead first
  for (int i = 0; i < n; ++i) {
    const double u2 = lo + (hi - lo) * i / (n - 1);
    if (u2 == 0.0) continue;
    menu.push_back({fixed, u2});
  }
  return menu;
}
}  // namespace

bool ControlSet::contains(const Control& u, double tol) const {
  switch (kind) {
    case Kind::kDisc:
      return std::hypot(u[0], u[1]) <= radius + tol;
    case Kind::kBox:
      return u[0] >= lo - tol && u[0] <= hi + tol && u[1] >= lo - tol &&
             u[1] <= hi + tol;
    case Kind::kFixedFirstAxis:
      return std::abs(u[0] - fixed) <= tol && u[1] >= lo - tol &&
             u[1] <= hi + tol;
  }
  return false;
}

DynamicsModel DynamicsModel::point_mass() {
  DynamicsModel m;
  m.kind_ = ModelKind::kPointMass;
  m.name_ = "point_mass";
  m.dim_ = 2;
  m.controls_ = ControlSet{ControlSet::Kind::kDisc, 1.0, -1.0, 1.0, 0.0};
  m.stoppable_ = true;
  m.M_ = 1.0;
  m.l_ = 0.0;
  m.theta_scale_ = 0.0;
  m.menu_ = disc_menu();
  return m;
}

DynamicsModel DynamicsModel::simple_car(double theta_max) {
  DynamicsModel m;
  m.kind_ = ModelKind::kSimpleCar;
  m.name_ = "simple_car";
  m.dim_ = 3;
  m.controls_ = ControlSet{ControlSet::Kind::kBox, 1.0, -1.0, 1.0, 0.0};
  m.stoppable_ = true;
  m.M_ = std::sqrt(2.0);
  m.l_ = 1.0;
  m.theta_scale_ = theta_max / kPi;
  m.menu_ = box_menu(-1.0, 1.0, 5);
  return m;
}

DynamicsModel DynamicsModel::dubins_car(double theta_max) {
  DynamicsModel m;
  m.kind_ = ModelKind::kDubinsCar;
  m.name_ = "dubins_car";
  m.dim_ = 3;
  m.controls_ =
      ControlSet{ControlSet::Kind::kFixedFirstAxis, 1.0, -1.0, 1.0, 1.0};
  m.stoppable_ = false;
  m.M_ = std::sqrt(2.0);
  m.l_ = 1.0;
  m.theta_scale_ = theta_max / kPi;
  m.menu_ = interval_menu(1.0, -1.0, 1.0, 9);
  return m;
}

DynamicsModel DynamicsModel::by_name(const std::string& name,
                                     double theta_max) {
  if (name == "point_mass") return point_mass();
  if (name == "simple_car") return simple_car(theta_max);
  if (name == "dubins_car") return dubins_car(theta_max);
  throw std::invalid_argument("unknown model: " + name);
}

double DynamicsModel::metric_speed() const {
  if (kind_ == ModelKind::kPointMass) return 1.0;
  // (u1 cos, u1 sin, sigma*u2) with |u1|, |u2| <= 1.
  return std::sqrt(1.0 + theta_scale_ * theta_scale_);
}

std::array<double, 3> DynamicsModel::flow(const State& x,
                                          const Control& u) const {
  if (!controls_.contains(u)) {
    throw std::invalid_argument("flow: control outside control set");
  }
  if (kind_ == ModelKind::kPointMass) return {u[0], u[1], 0.0};
  const double ct = std::cos(x.c[2]);
  const double st = std::sin(x.c[2]);
  return {u[0] * ct, u[0] * st, u[1]};
}

State DynamicsModel::integrate(const State& x, const Control& u,
                               double dt) const {
  if (dt <= 0.0) throw std::invalid_argument("integrate: dt <= 0");
  const auto v = flow(x, u);
  State out = x;
  out.c[0] += dt * v[0];
  out.c[1] += dt * v[1];
  if (dim_ == 3) out.c[2] = wrap_angle(out.c[2] + dt * v[2]);
  return out;
}

double DynamicsModel::reach_distance(const State& x, const State& xp,
                                     double eps) const {
  const double dx = xp.c[0] - x.c[0];
  const double dy = xp.c[1] - x.c[1];
  if (kind_ == ModelKind::kPointMass) {
    return std::max(0.0, std::hypot(dx, dy) - eps);
  }
  // Metric coordinates: theta axis scaled by theta_scale_. The velocity
  // image is the rectangle patch spanned by (cos, sin, 0) and (0, 0, 1)
  // with coefficients eps*u1 and eps*theta_scale_*u2.
  const double sigma = theta_scale_;
  const double dth = wrap_angle(xp.c[2] - x.c[2]) * sigma;
  const double ct = std::cos(x.c[2]);
  const double st = std::sin(x.c[2]);
  const double along = dx * ct + dy * st;     // component on the heading axis
  const double across = -dx * st + dy * ct;   // residual in the plane
  double a;
  if (kind_ == ModelKind::kDubinsCar) {
    a = eps;  // forward speed fixed to 1
  } else {
    a = std::clamp(along, -eps, eps);
  }
  const double b = std::clamp(dth, -eps * sigma, eps * sigma);
  const double ra = along - a;
  const double rb = dth - b;
  return std::sqrt(ra * ra + across * across + rb * rb);
}

bool DynamicsModel::reach_membership(const State& x, const State& xp,
                                     double eps, double rho) const {
  if (eps <= 0.0 || rho < 0.0) {
    throw std::invalid_argument("reach_membership: bad resolutions");
  }
  return reach_distance(x, xp, eps) <= rho;
}

}  // namespace ipolicy
