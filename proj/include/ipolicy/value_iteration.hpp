#ifndef IPOLICY_VALUE_ITERATION_HPP_
#define IPOLICY_VALUE_ITERATION_HPP_

#include <cstdint>
#include <vector>

#include "ipolicy/sample_graph.hpp"

namespace ipolicy {

// Kruzhkov transform Psi(t) = 1 - exp(-t), mapping [0, +inf] onto [0, 1].
double kruzhkov(double t);
double kruzhkov_inv(double v);

struct VIConfig {
  int P = 50;               // staleness threshold
  int m = 500;              // recursion allowance per refresh
  int K = 1000;             // max planner iterations
  double time_budget_s = 0.0;  // 0 = unlimited
};

struct UpdateReport {
  std::vector<VertexId> updated;
  double residual = 0.0;  // max |theta_after - theta_before| over updated
};

// Immutable snapshot of the graph connectivity at fixed resolutions, used
// by the synchronous solver and as the unit under the OpenMP benchmark.
struct FrozenGraph {
  std::vector<std::vector<VertexId>> neighbors;
  std::vector<char> goal;  // in_goal_inflated at M*eps + d
  double delta = 0.0;
  double beta = 1.0;

  std::size_t size() const { return neighbors.size(); }
};

FrozenGraph freeze(SampleGraph& graph);

// One application of the transformed Bellman operator at x: pass-through
// for goal-inflated vertices and empty neighbor sets, else
// delta + beta * min over neighbors.
double bellman_apply(const FrozenGraph& g, VertexId x,
                     const std::vector<double>& values);

// One synchronous Jacobi sweep; returns the max elementwise change.
double bellman_sweep_serial(const FrozenGraph& g, const std::vector<double>& in,
                            std::vector<double>& out);
double bellman_sweep_parallel(const FrozenGraph& g,
                              const std::vector<double>& in,
                              std::vector<double>& out);

// Synchronous sweeps to the fixed point; throws after 1e6 sweeps.
std::vector<double> solve_frozen(const FrozenGraph& g,
                                 std::vector<double> values, double tol,
                                 bool parallel = true);

// Depth-limited depth-first value propagation (explicit work stack, per-call
// memoization by best refreshed depth). Returns the refreshed value at x.
double backprop(SampleGraph& graph, VertexId x, int m, const Resolutions& res);

// One asynchronous step: refresh the stale set, clear its staleness,
// increment everyone else.
UpdateReport value_iteration_step(SampleGraph& graph, const VIConfig& config);

}  // namespace ipolicy

#endif  // IPOLICY_VALUE_ITERATION_HPP_
