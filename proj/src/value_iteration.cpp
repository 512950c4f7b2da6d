#include "ipolicy/value_iteration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ipolicy {

double kruzhkov(double t) {
  if (t < 0.0) throw std::invalid_argument("kruzhkov: t < 0");
  if (std::isinf(t)) return 1.0;
  return -std::expm1(-t);
}

double kruzhkov_inv(double v) {
  if (v < 0.0 || v > 1.0) throw std::invalid_argument("kruzhkov_inv: v not in [0,1]");
  if (v == 1.0) return std::numeric_limits<double>::infinity();
  return -std::log1p(-v);
}

FrozenGraph freeze(SampleGraph& graph) {
  const Resolutions res = graph.resolutions_relaxed();
  const double goal_r = graph.schedule().M * res.eps + res.d;
  FrozenGraph f;
  const std::size_t n = graph.size();
  f.neighbors.resize(n);
  f.goal.resize(n);
  f.delta = res.delta;
  f.beta = res.beta;
  for (VertexId v = 0; v < n; ++v) {
    f.neighbors[v] = graph.one_hop(v);
    f.goal[v] = graph.env().in_goal_inflated(graph.state(v), goal_r) ? 1 : 0;
  }
  return f;
}

double bellman_apply(const FrozenGraph& g, VertexId x,
                     const std::vector<double>& values) {
  if (g.goal[x]) return values[x];
  const auto& nbrs = g.neighbors[x];
  if (nbrs.empty()) return values[x];
  double mn = std::numeric_limits<double>::infinity();
  for (VertexId n : nbrs) mn = std::min(mn, values[n]);
  return g.delta + g.beta * mn;
}

double bellman_sweep_serial(const FrozenGraph& g, const std::vector<double>& in,
                            std::vector<double>& out) {
  double residual = 0.0;
  for (VertexId v = 0; v < g.size(); ++v) {
    out[v] = bellman_apply(g, v, in);
    residual = std::max(residual, std::abs(out[v] - in[v]));
  }
  return residual;
}

double bellman_sweep_parallel(const FrozenGraph& g,
                              const std::vector<double>& in,
                              std::vector<double>& out) {
  const auto n = static_cast<std::int64_t>(g.size());
  double residual = 0.0;
#pragma omp parallel for reduction(max : residual) schedule(static)
  for (std::int64_t v = 0; v < n; ++v) {
    const auto id = static_cast<VertexId>(v);
    out[id] = bellman_apply(g, id, in);
    residual = std::max(residual, std::abs(out[id] - in[id]));
  }
  return residual;
}

std::vector<double> solve_frozen(const FrozenGraph& g,
                                 std::vector<double> values, double tol,
                                 bool parallel) {
  if (tol <= 0.0) throw std::invalid_argument("solve_frozen: tol <= 0");
  std::vector<double> next(values.size());
  for (int sweep = 0; sweep < 1000000; ++sweep) {
    const double residual = parallel
                                ? bellman_sweep_parallel(g, values, next)
                                : bellman_sweep_serial(g, values, next);
    values.swap(next);
    if (residual < tol) return values;
  }
  throw std::runtime_error("solve_frozen: no convergence (beta >= 1?)");
}

double backprop(SampleGraph& graph, VertexId root, int m,
                const Resolutions& res) {
  if (m < 0) throw std::invalid_argument("backprop: m < 0");
  const double goal_r = graph.schedule().M * res.eps + res.d;
  const Environment& env = graph.env();

  auto is_goal = [&](VertexId v) {
    return env.in_goal_inflated(graph.state(v), goal_r);
  };
  if (is_goal(root) || m == 0) return graph.value(root);

  // Depth-limited propagation with an explicit queue; m can be in the
  // hundreds so call-stack recursion is out. Each vertex is refreshed at
  // most once per call, at the best (largest) remaining allowance it can be
  // reached with: breadth-first discovery from the root assigns exactly
  // that allowance, and refreshing deepest-first reproduces the post-order
  // of the recursion (successors before the vertices that read them).
  // Goal vertices pass through and are never expanded.
  std::vector<int> depth(graph.size(), -1);
  std::vector<VertexId> order;
  order.push_back(root);
  depth[root] = m;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const VertexId v = order[i];
    if (depth[v] <= 1) continue;  // children would arrive with allowance 0
    for (VertexId c : graph.one_hop(v)) {
      if (depth[c] < 0 && !is_goal(c)) {
        depth[c] = depth[v] - 1;
        order.push_back(c);
      }
    }
  }
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const VertexId v = *it;
    const auto& nbrs = graph.one_hop(v);
    if (nbrs.empty()) continue;
    double mn = std::numeric_limits<double>::infinity();
    for (VertexId n : nbrs) mn = std::min(mn, graph.value(n));
    graph.set_value(v, res.delta + res.beta * mn);
  }
  return graph.value(root);
}

UpdateReport value_iteration_step(SampleGraph& graph, const VIConfig& config) {
  const Resolutions res = graph.resolutions_relaxed();
  UpdateReport report;
  const std::size_t n = graph.size();
  std::vector<char> stale(n, 0);
  for (VertexId v = 0; v < n; ++v) {
    if (graph.staleness(v) >= config.P &&
        graph.env().is_free_inflated(graph.state(v), res.d)) {
      stale[v] = 1;
      report.updated.push_back(v);
    }
  }
  for (VertexId v : report.updated) {
    const double before = graph.value(v);
    const double after = backprop(graph, v, config.m, res);
    report.residual = std::max(report.residual, std::abs(after - before));
    graph.set_staleness(v, 0);
  }
  for (VertexId v = 0; v < n; ++v) {
    if (!stale[v]) graph.set_staleness(v, graph.staleness(v) + 1);
  }
  return report;
}

}  // namespace ipolicy
