#ifndef IPOLICY_RUNNER_HPP_
#define IPOLICY_RUNNER_HPP_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ipolicy/evaluation.hpp"
#include "ipolicy/policy.hpp"
#include "ipolicy/scenario.hpp"

namespace ipolicy {

struct RunArtifacts {
  std::filesystem::path dir;
  std::size_t final_samples = 0;
  std::vector<BaselineCheckpoint> rmse_series;  // empty without an oracle
  std::vector<Trajectory> trajectories;
};

// Full planner loop: seed V_0 (init_samples uniform free draws plus one
// forced goal-region draw), then sample / insert / asynchronous value
// iteration until K iterations or the time budget. Writes the per-iteration
// log, checkpoint value dumps, the RMSE series when an oracle is supplied
// and rollout trajectories from the configured starts.
RunArtifacts run_ipolicy(const Scenario& scenario,
                         const std::filesystem::path& out_dir,
                         const OracleGrid* oracle = nullptr);

struct ComparisonReport {
  std::vector<std::vector<BaselineCheckpoint>> ipolicy_runs;  // per seed
  std::vector<BaselineCheckpoint> multigrid;
};

// iPolicy vs the multigrid baseline on a shared oracle across
// config.comparison_seeds consecutive seeds.
ComparisonReport run_comparison(const ScenarioConfig& config,
                                bool with_ipolicy, bool with_multigrid,
                                const std::filesystem::path& out_dir);

struct ParkingResult {
  bool success = false;
  std::size_t samples_at_success = 0;
  double wall_s = 0.0;
  Trajectory trajectory;
};

// Plan until the first checkpoint whose rollout from the configured start
// reaches the goal, or until the sample/time budget runs out.
ParkingResult run_parking(const Scenario& scenario,
                          const std::filesystem::path& out_dir);

// CSV helpers shared by the runners and the CLI.
void write_checkpoint_csv(const std::filesystem::path& file,
                          const SampleGraph& graph);
void write_trajectory_csv(const std::filesystem::path& file,
                          const Trajectory& traj);
void write_rmse_csv(const std::filesystem::path& file,
                    const std::vector<BaselineCheckpoint>& series);

}  // namespace ipolicy

#endif  // IPOLICY_RUNNER_HPP_
