#include "ipolicy/sample_graph.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ipolicy {

namespace {
// Volume of the unit ball in R^n.
double unit_ball_volume(int n) {
  if (n == 2) return std::numbers::pi;
  return 4.0 * std::numbers::pi / 3.0;  // n == 3
}
}  // namespace

double ResolutionSchedule::default_B(double measure, int dim) {
  return 1.1 * std::pow(measure / unit_ball_volume(dim), 1.0 / dim);
}

double ResolutionSchedule::dispersion(std::size_t num_vertices,
                                      int dim) const {
  if (num_vertices < 3) {
    throw std::runtime_error("dispersion: need |V| >= 3");
  }
  const double v = static_cast<double>(num_vertices);
  return B * std::pow(std::log(v) / v, 1.0 / dim);
}

namespace {
// Resolutions while |V| < 3 fall back to the |V| = 3 schedule so that the
// initial vertex set can be inserted before the formula is defined.
std::size_t effective_count(std::size_t n) { return std::max<std::size_t>(n, 3); }
}  // namespace

double ResolutionSchedule::epsilon(double d) const {
  return std::pow(5.0 * d, 2.0 / 3.0);
}

double ResolutionSchedule::rho(double d, double eps) const {
  if (rho_full) return 2.0 * d + l * eps * (d + M * eps);
  return 2.0 * d;
}

SampleGraph::SampleGraph(const Environment* env, const DynamicsModel* model,
                         ResolutionSchedule schedule)
    : env_(env), model_(model), schedule_(schedule) {
  const Rect& w = env_->workspace();
  const double margin = 0.5 * std::max(w.xmax - w.xmin, w.ymax - w.ymin);
  index_.cell = 2.0;
  index_.ox = w.xmin - margin;
  index_.oy = w.ymin - margin;
  index_.nx = static_cast<int>(
      std::ceil((w.xmax - w.xmin + 2.0 * margin) / index_.cell));
  index_.ny = static_cast<int>(
      std::ceil((w.ymax - w.ymin + 2.0 * margin) / index_.cell));
  index_.buckets.resize(static_cast<std::size_t>(index_.nx) * index_.ny);
}

Resolutions SampleGraph::current_resolutions() const {
  Resolutions r;
  r.d = schedule_.dispersion(states_.size(), env_->dim());
  r.eps = schedule_.epsilon(r.d);
  if (r.eps <= r.d) {
    throw std::runtime_error("resolution schedule violates eps > d");
  }
  r.rho = schedule_.rho(r.d, r.eps);
  r.delta = 1.0 - std::exp(-(r.eps - r.d));
  r.beta = 1.0 - r.delta;
  return r;
}

Resolutions SampleGraph::resolutions_relaxed() const {
  Resolutions r;
  r.d = schedule_.dispersion(effective_count(states_.size()), env_->dim());
  r.eps = schedule_.epsilon(r.d);
  r.rho = schedule_.rho(r.d, r.eps);
  r.delta = 1.0 - std::exp(-(r.eps - r.d));
  r.beta = 1.0 - r.delta;
  return r;
}

State SampleGraph::sample_free(std::mt19937_64& rng) const {
  const Resolutions res = resolutions_relaxed();
  const Rect& w = env_->workspace();
  std::uniform_real_distribution<double> ux(w.xmin - res.d, w.xmax + res.d);
  std::uniform_real_distribution<double> uy(w.ymin - res.d, w.ymax + res.d);
  std::uniform_real_distribution<double> uth(-std::numbers::pi,
                                             std::numbers::pi);
  for (int attempt = 0; attempt < 1000000; ++attempt) {
    State s;
    s.dim = env_->dim();
    s.c[0] = ux(rng);
    s.c[1] = uy(rng);
    if (s.dim == 3) s.c[2] = uth(rng);
    if (env_->is_free_inflated(s, res.d)) return s;
  }
  throw std::runtime_error("sample_free: free space effectively empty");
}

void SampleGraph::index_insert(VertexId id) {
  const State& s = states_[id];
  int cx = static_cast<int>(std::floor((s.c[0] - index_.ox) / index_.cell));
  int cy = static_cast<int>(std::floor((s.c[1] - index_.oy) / index_.cell));
  cx = std::clamp(cx, 0, index_.nx - 1);
  cy = std::clamp(cy, 0, index_.ny - 1);
  index_.buckets[static_cast<std::size_t>(cy) * index_.nx + cx].push_back(id);
}

std::vector<VertexId> SampleGraph::range_query(const State& x,
                                               double r) const {
  std::vector<VertexId> out;
  if (r < 0.0) return out;
  // Metric ball is contained in the position disc of the same radius.
  int x0 = static_cast<int>(std::floor((x.c[0] - r - index_.ox) / index_.cell));
  int x1 = static_cast<int>(std::floor((x.c[0] + r - index_.ox) / index_.cell));
  int y0 = static_cast<int>(std::floor((x.c[1] - r - index_.oy) / index_.cell));
  int y1 = static_cast<int>(std::floor((x.c[1] + r - index_.oy) / index_.cell));
  x0 = std::clamp(x0, 0, index_.nx - 1);
  x1 = std::clamp(x1, 0, index_.nx - 1);
  y0 = std::clamp(y0, 0, index_.ny - 1);
  y1 = std::clamp(y1, 0, index_.ny - 1);
  for (int cy = y0; cy <= y1; ++cy) {
    for (int cx = x0; cx <= x1; ++cx) {
      for (VertexId id :
           index_.buckets[static_cast<std::size_t>(cy) * index_.nx + cx]) {
        if (env_->dist(states_[id], x) <= r) out.push_back(id);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool SampleGraph::rho_covers_previous_dispersion() const {
  if (prev_d_ <= 0.0) return true;
  const Resolutions res = resolutions_relaxed();
  return res.rho >= prev_d_;
}

VertexId SampleGraph::add_sample(const State& x_new, int staleness_flag) {
  // Samples are drawn against the pre-insertion dispersion, so membership in
  // the inflated free set is checked at that radius; the cache below is
  // seeded at the post-insertion resolutions.
  const double d_before =
      schedule_.dispersion(effective_count(states_.size()), env_->dim());
  if (!env_->is_free_inflated(x_new, d_before)) {
    throw std::invalid_argument("add_sample: state outside inflated free set");
  }
  states_.push_back(x_new);
  const VertexId id = static_cast<VertexId>(states_.size() - 1);

  Resolutions res;
  res.d = schedule_.dispersion(effective_count(states_.size()), env_->dim());
  res.eps = schedule_.epsilon(res.d);
  res.rho = schedule_.rho(res.d, res.eps);
  res.delta = 1.0 - std::exp(-(res.eps - res.d));
  res.beta = 1.0 - res.delta;
  prev_d_ = d_before;

  const bool in_goal =
      env_->in_goal_inflated(x_new, schedule_.M * res.eps + res.d);
  value_.push_back(in_goal ? 0.0 : 1.0);
  goal_flag_.push_back(in_goal ? 1 : 0);
  staleness_.push_back(staleness_flag);
  cache_.emplace_back();
  cache_res_.push_back(res);
  index_insert(id);

  const double reach_r = res.eps * model_->metric_speed() + res.rho;
  for (VertexId other : range_query(x_new, reach_r)) {
    if (other == id) continue;
    // Forward: one-hop neighbors of the new vertex. One-hop pairs must be
    // mutually visible: without the line-of-sight filter the perturbation
    // ball lets values tunnel through thin obstacles at coarse resolutions.
    const bool visible = env_->segment_collision_free(x_new, states_[other]);
    if (visible && env_->is_free_inflated(states_[other], res.d) &&
        model_->reach_membership(x_new, states_[other], res.eps, res.rho)) {
      cache_[id].push_back(other);
    }
    // Reverse: the new vertex enters existing caches.
    if (visible &&
        model_->reach_membership(states_[other], x_new, res.eps, res.rho)) {
      cache_[other].push_back(id);
    }
  }
  return id;
}

void SampleGraph::prune_cache(VertexId id, const Resolutions& res) {
  auto& nbrs = cache_[id];
  std::erase_if(nbrs, [&](VertexId n) {
    return !model_->reach_membership(states_[id], states_[n], res.eps,
                                     res.rho) ||
           !env_->is_free_inflated(states_[n], res.d);
  });
  cache_res_[id] = res;
}

const std::vector<VertexId>& SampleGraph::one_hop(VertexId id) {
  const Resolutions res = resolutions_relaxed();
  if (cache_res_[id].d != res.d) prune_cache(id, res);
  return cache_[id];
}

std::vector<VertexId> SampleGraph::one_hop_direct(
    VertexId id, const Resolutions& res) const {
  std::vector<VertexId> out;
  const double reach_r = res.eps * model_->metric_speed() + res.rho;
  for (VertexId other : range_query(states_[id], reach_r)) {
    if (other == id) continue;
    if (env_->segment_collision_free(states_[id], states_[other]) &&
        env_->is_free_inflated(states_[other], res.d) &&
        model_->reach_membership(states_[id], states_[other], res.eps,
                                 res.rho)) {
      out.push_back(other);
    }
  }
  return out;
}

}  // namespace ipolicy
