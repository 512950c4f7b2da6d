#ifndef IPOLICY_EVALUATION_HPP_
#define IPOLICY_EVALUATION_HPP_

#include <vector>

#include "ipolicy/geometry.hpp"
#include "ipolicy/sample_graph.hpp"
#include "ipolicy/value_iteration.hpp"

namespace ipolicy {

// Minimal-time ground truth for the point mass: Dijkstra over a dense
// 8-connected grid with edge weights Euclidean length / max speed. The
// 8-connectivity overestimates true shortest paths by at most ~8% of path
// length, plus O(h) discretization error; both are folded into tolerances.
class OracleGrid {
 public:
  OracleGrid(const Environment& env, double h = 0.02, double max_speed = 1.0);

  // Bilinear interpolation over free cells; +inf inside obstacles or in
  // unreachable components.
  double time_at(const State& x) const;

  double resolution() const { return h_; }

 private:
  double node(int ix, int iy) const { return times_[static_cast<std::size_t>(iy) * nx_ + ix]; }

  double h_;
  double x0_, y0_;
  int nx_, ny_;
  std::vector<double> times_;
};

struct RmseResult {
  double rmse = 0.0;
  std::size_t used = 0;
  std::size_t excluded = 0;
};

// RMSE in untransformed time units between the vertex estimates and the
// oracle; vertices where either side is +inf are excluded and counted.
RmseResult rmse(const std::vector<State>& states,
                const std::vector<double>& theta, const OracleGrid& oracle);

struct BaselineCheckpoint {
  double wall_s = 0.0;  // cumulative
  std::size_t samples = 0;
  double rmse = 0.0;
  std::size_t excluded = 0;
};

// Synchronous value iteration to the fixed point on successively finer
// uniform grids, warm-starting each grid by nearest-neighbor transfer of
// the previous grid's values.
std::vector<BaselineCheckpoint> multigrid_baseline(
    const Environment& env, const DynamicsModel& model,
    const std::vector<double>& resolutions, double tol,
    const OracleGrid* oracle);

}  // namespace ipolicy

#endif  // IPOLICY_EVALUATION_HPP_
