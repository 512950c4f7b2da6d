#ifndef IPOLICY_DYNAMICS_HPP_
#define IPOLICY_DYNAMICS_HPP_

#include <array>
#include <string>
#include <vector>

#include "ipolicy/geometry.hpp"

namespace ipolicy {

using Control = std::array<double, 2>;

struct ControlSet {
  enum class Kind {
    kDisc,            // ||u|| <= radius
    kBox,             // u in [lo, hi]^2
    kFixedFirstAxis,  // u1 = fixed, u2 in [lo, hi]
  };
  Kind kind;
  double radius = 1.0;  // kDisc
  double lo = -1.0, hi = 1.0;
  double fixed = 1.0;  // kFixedFirstAxis

  bool contains(const Control& u, double tol = 1e-9) const;
};

enum class ModelKind { kPointMass, kSimpleCar, kDubinsCar };

// Velocity map, control set and the model constants used by the one-hop
// neighbor definition. The heading is integrated in radians; the
// [-theta_max, theta_max] rescaling enters only through the metric, so
// reachability tests carry the rescale factor on the theta axis.
class DynamicsModel {
 public:
  static DynamicsModel point_mass();
  static DynamicsModel simple_car(double theta_max);
  static DynamicsModel dubins_car(double theta_max);
  static DynamicsModel by_name(const std::string& name, double theta_max);

  ModelKind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  int dim() const { return dim_; }
  const ControlSet& control_set() const { return controls_; }
  bool stoppable() const { return stoppable_; }

  // max ||f(x,u)|| in raw coordinates; overridable from config.
  double velocity_bound() const { return M_; }
  void set_velocity_bound(double M) { M_ = M; }
  // Lipschitz constant of f in x.
  double lipschitz() const { return l_; }
  void set_lipschitz(double l) { l_ = l; }

  // max metric speed (theta axis rescaled); bounds the one-hop search radius.
  double metric_speed() const;

  Control::value_type theta_scale() const { return theta_scale_; }

  std::array<double, 3> flow(const State& x, const Control& u) const;

  State integrate(const State& x, const Control& u, double dt) const;

  // x' in x + eps * U f(x,u) + rho*B under the scenario metric, by exact
  // projection onto the velocity image (disc for the point mass, rectangle
  // patch for the cars).
  bool reach_membership(const State& x, const State& xp, double eps,
                        double rho) const;

  // Exact metric distance from x' to the eps-reachable set of x.
  double reach_distance(const State& x, const State& xp, double eps) const;

  // Finite control menu for policy extraction.
  const std::vector<Control>& control_menu() const { return menu_; }

 private:
  ModelKind kind_;
  std::string name_;
  int dim_;
  ControlSet controls_;
  bool stoppable_;
  double M_;
  double l_;
  double theta_scale_;  // theta_max / pi; 0 for planar models
  std::vector<Control> menu_;
};

}  // namespace ipolicy

#endif  // IPOLICY_DYNAMICS_HPP_
