#include "ipolicy/evaluation.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <stdexcept>

namespace ipolicy {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

OracleGrid::OracleGrid(const Environment& env, double h, double max_speed)
    : h_(h) {
  const Rect& w = env.workspace();
  x0_ = w.xmin;
  y0_ = w.ymin;
  nx_ = static_cast<int>(std::round((w.xmax - w.xmin) / h)) + 1;
  ny_ = static_cast<int>(std::round((w.ymax - w.ymin) / h)) + 1;
  const std::size_t n = static_cast<std::size_t>(nx_) * ny_;
  times_.assign(n, kInf);

  std::vector<char> blocked(n, 0);
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  for (int iy = 0; iy < ny_; ++iy) {
    for (int ix = 0; ix < nx_; ++ix) {
      const std::size_t id = static_cast<std::size_t>(iy) * nx_ + ix;
      const double px = x0_ + ix * h_;
      const double py = y0_ + iy * h_;
      if (env.obstacle_signed_distance(px, py) < 0.0) {
        blocked[id] = 1;
        continue;
      }
      if (env.in_goal_inflated(State::planar(px, py), 0.0)) {
        times_[id] = 0.0;
        heap.push({0.0, id});
      }
    }
  }

  const double step = h_ / max_speed;
  const double diag = step * std::numbers::sqrt2;
  while (!heap.empty()) {
    auto [t, id] = heap.top();
    heap.pop();
    if (t > times_[id]) continue;
    const int ix = static_cast<int>(id % nx_);
    const int iy = static_cast<int>(id / nx_);
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        if (dx == 0 && dy == 0) continue;
        const int jx = ix + dx, jy = iy + dy;
        if (jx < 0 || jx >= nx_ || jy < 0 || jy >= ny_) continue;
        const std::size_t jd = static_cast<std::size_t>(jy) * nx_ + jx;
        if (blocked[jd]) continue;
        const double cost = (dx != 0 && dy != 0) ? diag : step;
        if (t + cost < times_[jd]) {
          times_[jd] = t + cost;
          heap.push({times_[jd], jd});
        }
      }
    }
  }
}

double OracleGrid::time_at(const State& x) const {
  const double gx = (x.c[0] - x0_) / h_;
  const double gy = (x.c[1] - y0_) / h_;
  const int ix = std::clamp(static_cast<int>(std::floor(gx)), 0, nx_ - 2);
  const int iy = std::clamp(static_cast<int>(std::floor(gy)), 0, ny_ - 2);
  const double fx = std::clamp(gx - ix, 0.0, 1.0);
  const double fy = std::clamp(gy - iy, 0.0, 1.0);
  const double c00 = node(ix, iy), c10 = node(ix + 1, iy);
  const double c01 = node(ix, iy + 1), c11 = node(ix + 1, iy + 1);
  if (std::isfinite(c00) && std::isfinite(c10) && std::isfinite(c01) &&
      std::isfinite(c11)) {
    return (1 - fy) * ((1 - fx) * c00 + fx * c10) +
           fy * ((1 - fx) * c01 + fx * c11);
  }
  // Near obstacle boundaries some corners carry no value; fall back to the
  // nearest finite corner plus the in-cell offset.
  double best = kInf;
  const double px = x.c[0], py = x.c[1];
  const std::array<std::pair<int, int>, 4> corners{
      {{ix, iy}, {ix + 1, iy}, {ix, iy + 1}, {ix + 1, iy + 1}}};
  for (const auto& [cx, cy] : corners) {
    const double v = node(cx, cy);
    if (!std::isfinite(v)) continue;
    const double dd = std::hypot(px - (x0_ + cx * h_), py - (y0_ + cy * h_));
    best = std::min(best, v + dd);
  }
  return best;
}

RmseResult rmse(const std::vector<State>& states,
                const std::vector<double>& theta, const OracleGrid& oracle) {
  RmseResult r;
  double acc = 0.0;
  for (std::size_t i = 0; i < states.size(); ++i) {
    const double est = kruzhkov_inv(theta[i]);
    const double ref = oracle.time_at(states[i]);
    if (!std::isfinite(est) || !std::isfinite(ref)) {
      ++r.excluded;
      continue;
    }
    acc += (est - ref) * (est - ref);
    ++r.used;
  }
  if (r.used == 0) {
    throw std::runtime_error("rmse: no finite estimates");
  }
  r.rmse = std::sqrt(acc / r.used);
  return r;
}

namespace {

struct Lattice {
  std::vector<State> nodes;
  FrozenGraph graph;
};

Lattice build_lattice(const Environment& env, const DynamicsModel& model,
                      double d, double M) {
  const double eps = std::pow(5.0 * d, 2.0 / 3.0);
  const double rho = 2.0 * d;
  Lattice lat;
  const Rect& w = env.workspace();
  for (double py = w.ymin - d; py <= w.ymax + d + 1e-12; py += d) {
    for (double px = w.xmin - d; px <= w.xmax + d + 1e-12; px += d) {
      State s = State::planar(px, py);
      if (env.is_free_inflated(s, d)) lat.nodes.push_back(s);
    }
  }
  const std::size_t n = lat.nodes.size();
  lat.graph.neighbors.resize(n);
  lat.graph.goal.resize(n);
  lat.graph.delta = 1.0 - std::exp(-(eps - d));
  lat.graph.beta = 1.0 - lat.graph.delta;

  // Cell hash over the lattice for the one-hop radius search.
  const double reach = eps * model.metric_speed() + rho;
  const int span = static_cast<int>(std::ceil(reach / d)) + 1;
  const int cols =
      static_cast<int>(std::round((w.xmax - w.xmin + 2 * d) / d)) + 2;
  std::vector<std::vector<VertexId>> cells;
  auto cell_of = [&](const State& s) {
    const int cx = static_cast<int>(std::round((s.c[0] - (w.xmin - d)) / d));
    const int cy = static_cast<int>(std::round((s.c[1] - (w.ymin - d)) / d));
    return std::pair<int, int>{cx, cy};
  };
  const int rows =
      static_cast<int>(std::round((w.ymax - w.ymin + 2 * d) / d)) + 2;
  cells.resize(static_cast<std::size_t>(cols) * rows);
  for (VertexId i = 0; i < n; ++i) {
    auto [cx, cy] = cell_of(lat.nodes[i]);
    cells[static_cast<std::size_t>(cy) * cols + cx].push_back(i);
  }
  for (VertexId i = 0; i < n; ++i) {
    const auto [cx, cy] = cell_of(lat.nodes[i]);
    lat.graph.goal[i] =
        env.in_goal_inflated(lat.nodes[i], M * eps + d) ? 1 : 0;
    for (int dy = -span; dy <= span; ++dy) {
      for (int dx = -span; dx <= span; ++dx) {
        const int jx = cx + dx, jy = cy + dy;
        if (jx < 0 || jx >= cols || jy < 0 || jy >= rows) continue;
        for (VertexId j : cells[static_cast<std::size_t>(jy) * cols + jx]) {
          if (j == i) continue;
          if (model.reach_membership(lat.nodes[i], lat.nodes[j], eps, rho)) {
            lat.graph.neighbors[i].push_back(j);
          }
        }
      }
    }
  }
  return lat;
}

}  // namespace

std::vector<BaselineCheckpoint> multigrid_baseline(
    const Environment& env, const DynamicsModel& model,
    const std::vector<double>& resolutions, double tol,
    const OracleGrid* oracle) {
  for (std::size_t i = 1; i < resolutions.size(); ++i) {
    if (resolutions[i] >= resolutions[i - 1]) {
      throw std::invalid_argument("multigrid: resolutions must decrease");
    }
  }
  std::vector<BaselineCheckpoint> series;
  std::vector<State> prev_nodes;
  std::vector<double> prev_values;
  double wall = 0.0;
  for (double d : resolutions) {
    const auto t0 = std::chrono::steady_clock::now();
    Lattice lat = build_lattice(env, model, d, model.velocity_bound());
    std::vector<double> init(lat.nodes.size(), 1.0);
    for (std::size_t i = 0; i < lat.nodes.size(); ++i) {
      if (lat.graph.goal[i]) {
        init[i] = 0.0;
      } else if (!prev_nodes.empty()) {
        // Nearest-neighbor warm start from the previous grid.
        double best = kInf;
        double val = 1.0;
        for (std::size_t j = 0; j < prev_nodes.size(); ++j) {
          const double dd = env.dist(lat.nodes[i], prev_nodes[j]);
          if (dd < best) {
            best = dd;
            val = prev_values[j];
          }
        }
        init[i] = val;
      }
    }
    std::vector<double> values = solve_frozen(lat.graph, std::move(init), tol);
    wall += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                .count();
    BaselineCheckpoint cp;
    cp.wall_s = wall;
    cp.samples = lat.nodes.size();
    if (oracle) {
      const RmseResult r = rmse(lat.nodes, values, *oracle);
      cp.rmse = r.rmse;
      cp.excluded = r.excluded;
    }
    series.push_back(cp);
    prev_nodes = std::move(lat.nodes);
    prev_values = std::move(values);
  }
  return series;
}

}  // namespace ipolicy
