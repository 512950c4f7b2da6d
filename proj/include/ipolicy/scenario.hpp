#ifndef IPOLICY_SCENARIO_HPP_
#define IPOLICY_SCENARIO_HPP_

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "ipolicy/dynamics.hpp"
#include "ipolicy/geometry.hpp"
#include "ipolicy/sample_graph.hpp"
#include "ipolicy/value_iteration.hpp"

namespace ipolicy {

struct ScenarioConfig {
  std::string name = "custom";
  std::string model = "point_mass";

  Rect workspace{-10.0, -10.0, 10.0, 10.0};
  double theta_max = 10.0;
  std::vector<Obstacle> obstacles;
  std::vector<double> goal_center{0.0, 0.0};
  double goal_radius = 1.0;

  double B = 0.0;       // 0 = derived from the workspace measure
  bool rho_full = false;  // rho = 2d + l*eps*(d + M*eps) instead of 2d
  double l = -1.0;      // < 0 = model default
  double M = 0.0;       // 0 = model default

  VIConfig vi;

  int init_samples = 20;
  std::uint64_t seed = 0;
  int checkpoint_every = 100;

  std::vector<std::vector<double>> rollout_starts;
  double rollout_max_time = 60.0;

  std::vector<double> grid_resolutions{0.8, 0.4, 0.2, 0.1};
  double solve_tol = 1e-12;
  double oracle_h = 0.02;
  int comparison_seeds = 5;
};

// Raised for malformed or inconsistent configs (CLI exit code 2).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parse the key-value config format (sections in brackets, '#' comments).
ScenarioConfig load_config(const std::string& path);

// Bundled scenarios: pointmass_fig2, simplecar_value_fig3,
// parking_headin_fig4a, parking_parallel_fig4b, dubins_fig5.
ScenarioConfig preset(const std::string& name);
bool is_preset(const std::string& name);

// Serialize with all defaults expanded (embedded in artifact directories).
std::string to_config_text(const ScenarioConfig& cfg);

// Instantiated scenario: geometry, model and an empty graph.
struct Scenario {
  ScenarioConfig config;
  std::unique_ptr<Environment> env;
  std::unique_ptr<DynamicsModel> model;
  ResolutionSchedule schedule;

  SampleGraph make_graph() const;
  State make_state(const std::vector<double>& coords) const;
};

// Validates the config (dimension agreement, A7 at |V_0|, rollout starts in
// free space) and builds the scenario. Throws ConfigError.
Scenario build_scenario(const ScenarioConfig& cfg);

}  // namespace ipolicy

#endif  // IPOLICY_SCENARIO_HPP_
