#ifndef IPOLICY_POLICY_HPP_
#define IPOLICY_POLICY_HPP_

#include <optional>
#include <vector>

#include "ipolicy/sample_graph.hpp"

namespace ipolicy {

enum class Outcome { kReachedGoal, kCollided, kTimedOut, kStuck };

struct Trajectory {
  std::vector<State> states;
  std::vector<Control> controls;
  double dt = 0.0;
  double hit_time = 0.0;  // +inf unless the goal was reached
  Outcome outcome = Outcome::kTimedOut;
};

const char* outcome_name(Outcome o);

// One-step greedy minimizer over the model's control menu. Each candidate
// control is held for eps and scored by delta + beta * min value over the
// samples within rho of the landing state (1 if the range is empty or the
// landing state leaves the inflated free set). Empty optional means stuck.
std::optional<Control> greedy_control(SampleGraph& graph, const State& x);

// Closed-loop simulation: re-plan every eps, integrate at dt = eps/10 with
// per-substep collision checks, stop on goal entry, collision, stuck or
// max_time.
Trajectory rollout(SampleGraph& graph, const State& x0, double max_time);

double hitting_time(const Trajectory& traj);

}  // namespace ipolicy

#endif  // IPOLICY_POLICY_HPP_
