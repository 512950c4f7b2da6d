#include "ipolicy/policy.hpp"

#include <cmath>
#include <limits>

namespace ipolicy {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::kReachedGoal:
      return "reached_goal";
    case Outcome::kCollided:
      return "collided";
    case Outcome::kTimedOut:
      return "timed_out";
    case Outcome::kStuck:
      return "stuck";
  }
  return "unknown";
}

std::optional<Control> greedy_control(SampleGraph& graph, const State& x) {
  const Resolutions res = graph.resolutions_relaxed();
  const DynamicsModel& model = graph.model();
  const Environment& env = graph.env();

  double best_score = 1.0;
  std::optional<Control> best;
  for (const Control& u : model.control_menu()) {
    const State y = model.integrate(x, u, res.eps);
    double score = 1.0;
    // The landing state must stay strictly free and reachable without
    // sweeping through an obstacle; the value table alone cannot tell
    // (vertices just across a thin wall are within rho of y).
    if (env.is_free_inflated(y, 0.0) && env.segment_collision_free(x, y)) {
      double mn = kInf;
      for (VertexId v : graph.range_query(y, res.rho)) {
        if (graph.value(v) < mn && env.segment_collision_free(y, graph.state(v))) {
          mn = graph.value(v);
        }
      }
      if (std::isfinite(mn)) score = res.delta + res.beta * mn;
    }
    if (score < best_score) {
      best_score = score;
      best = u;
    }
  }
  return best;
}

Trajectory rollout(SampleGraph& graph, const State& x0, double max_time) {
  const Resolutions res = graph.resolutions_relaxed();
  const Environment& env = graph.env();
  const DynamicsModel& model = graph.model();

  Trajectory traj;
  traj.dt = res.eps / 10.0;
  traj.hit_time = kInf;
  traj.states.push_back(x0);

  if (env.in_goal_inflated(x0, 0.0)) {
    traj.hit_time = 0.0;
    traj.outcome = Outcome::kReachedGoal;
    return traj;
  }

  double t = 0.0;
  State x = x0;
  while (t < max_time) {
    const auto u = greedy_control(graph, x);
    if (!u) {
      traj.outcome = Outcome::kStuck;
      return traj;
    }
    // Hold the control for one decision epoch of eps, in dt sub-steps.
    for (int sub = 0; sub < 10; ++sub) {
      const State next = model.integrate(x, *u, traj.dt);
      if (!env.segment_collision_free(x, next)) {
        traj.outcome = Outcome::kCollided;
        return traj;
      }
      traj.controls.push_back(*u);
      traj.states.push_back(next);
      x = next;
      t += traj.dt;
      if (env.in_goal_inflated(x, 0.0)) {
        traj.hit_time = t;
        traj.outcome = Outcome::kReachedGoal;
        return traj;
      }
      if (t >= max_time) break;
    }
  }
  traj.outcome = Outcome::kTimedOut;
  return traj;
}

double hitting_time(const Trajectory& traj) {
  return traj.outcome == Outcome::kReachedGoal ? traj.hit_time : kInf;
}

}  // namespace ipolicy
