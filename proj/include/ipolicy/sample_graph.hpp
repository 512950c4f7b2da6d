#ifndef IPOLICY_SAMPLE_GRAPH_HPP_
#define IPOLICY_SAMPLE_GRAPH_HPP_

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "ipolicy/dynamics.hpp"
#include "ipolicy/geometry.hpp"

namespace ipolicy {

using VertexId = std::uint32_t;

struct Resolutions {
  double d;
  double eps;
  double rho;
  double delta;  // Psi(eps - d), transformed running cost
  double beta;   // 1 - delta
};

// Resolution schedule: d from the dispersion lower bound, eps and rho as
// functions of d.
struct ResolutionSchedule {
  double B;                 // dispersion constant
  bool rho_full = false;    // rho = 2d + l*eps*(d + M*eps) instead of 2d
  double l = 0.0;
  double M = 1.0;

  double dispersion(std::size_t num_vertices, int dim) const;
  double epsilon(double d) const;  // (5d)^{2/3}
  double rho(double d, double eps) const;

  // B = 1.1 * (mu(X)/C_n)^{1/n}
  static double default_B(double measure, int dim);
};

class SampleGraph {
 public:
  SampleGraph(const Environment* env, const DynamicsModel* model,
              ResolutionSchedule schedule);

  std::size_t size() const { return states_.size(); }
  const State& state(VertexId id) const { return states_[id]; }
  const std::vector<State>& states() const { return states_; }

  double value(VertexId id) const { return value_[id]; }
  void set_value(VertexId id, double v) { value_[id] = v; }
  const std::vector<double>& values() const { return value_; }
  void set_values(const std::vector<double>& v) { value_ = v; }

  int staleness(VertexId id) const { return staleness_[id]; }
  void set_staleness(VertexId id, int f) { staleness_[id] = f; }

  const ResolutionSchedule& schedule() const { return schedule_; }
  const Environment& env() const { return *env_; }
  const DynamicsModel& model() const { return *model_; }

  // d = B(log|V|/|V|)^{1/n} plus derived eps, rho, delta, beta. Rejects
  // |V| < 3 and the A7 violation eps <= d.
  Resolutions current_resolutions() const;

  // Same formulas with |V| clamped to >= 3 and no A7 abort; used internally
  // while the initial vertex set is being seeded.
  Resolutions resolutions_relaxed() const;

  // Uniform sample over X_free + dB by rejection from the inflated
  // workspace box (uniform heading for car models).
  State sample_free(std::mt19937_64& rng) const;

  // Append a vertex: value 0 if goal-inflated at M*eps+d else 1, staleness
  // set to the given flag, neighbor cache seeded per Eq.-(3) semantics and
  // reverse-linked into existing caches.
  VertexId add_sample(const State& x_new, int staleness_flag);

  // Cached one-hop neighbors after the lazy prune at current resolutions.
  const std::vector<VertexId>& one_hop(VertexId id);

  // Direct recomputation of the one-hop set (cache audit oracle).
  std::vector<VertexId> one_hop_direct(VertexId id,
                                       const Resolutions& res) const;

  // All vertices within metric distance r of x.
  std::vector<VertexId> range_query(const State& x, double r) const;

  // Vertex known to be inside the goal-inflated set at insertion time.
  bool goal_flagged(VertexId id) const { return goal_flag_[id]; }

  // A8 check rho(d_k, eps_k) >= d_{k-1}; returns false on violation
  // (logged by the caller, not fatal).
  bool rho_covers_previous_dispersion() const;

 private:
  void prune_cache(VertexId id, const Resolutions& res);

  const Environment* env_;
  const DynamicsModel* model_;
  ResolutionSchedule schedule_;
  std::vector<State> states_;
  std::vector<double> value_;
  std::vector<int> staleness_;
  std::vector<std::vector<VertexId>> cache_;
  std::vector<Resolutions> cache_res_;  // resolutions of the last prune
  std::vector<char> goal_flag_;
  double prev_d_ = 0.0;

  // Uniform-bucket grid over position for range queries.
  struct GridIndex {
    double cell = 1.0;
    double ox = 0.0, oy = 0.0;
    int nx = 1, ny = 1;
    std::vector<std::vector<VertexId>> buckets;
  };
  void index_insert(VertexId id);
  GridIndex index_;
};

}  // namespace ipolicy

#endif  // IPOLICY_SAMPLE_GRAPH_HPP_
