#include "ipolicy/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <random>

namespace ipolicy {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Uniform draw from the goal region intersected with free space.
State sample_goal_region(const Scenario& sc, std::mt19937_64& rng) {
  const GoalRegion& goal = sc.env->goal();
  const double r = goal.radius;
  std::uniform_real_distribution<double> ux(goal.center.c[0] - r,
                                            goal.center.c[0] + r);
  std::uniform_real_distribution<double> uy(goal.center.c[1] - r,
                                            goal.center.c[1] + r);
  const double th_band = r * std::numbers::pi / sc.env->theta_max();
  std::uniform_real_distribution<double> uth(goal.center.c[2] - th_band,
                                             goal.center.c[2] + th_band);
  for (int attempt = 0; attempt < 1000000; ++attempt) {
    State s;
    s.dim = sc.env->dim();
    s.c[0] = ux(rng);
    s.c[1] = uy(rng);
    if (s.dim == 3) s.c[2] = wrap_angle(uth(rng));
    if (sc.env->in_goal_inflated(s, 0.0) && sc.env->is_free_inflated(s, 0.0)) {
      return s;
    }
  }
  throw std::runtime_error("goal region has no free volume");
}

void seed_initial_vertices(const Scenario& sc, SampleGraph& graph,
                           std::mt19937_64& rng) {
  for (int i = 0; i < sc.config.init_samples; ++i) {
    graph.add_sample(graph.sample_free(rng), sc.config.vi.P);
  }
  graph.add_sample(sample_goal_region(sc, rng), sc.config.vi.P);
}

}  // namespace

void write_checkpoint_csv(const std::filesystem::path& file,
                          const SampleGraph& graph) {
  std::ofstream out(file);
  const int n = graph.env().dim();
  out << "id";
  for (int i = 0; i < n; ++i) out << ",x" << i;
  out << ",theta_value,staleness\n";
  for (VertexId v = 0; v < graph.size(); ++v) {
    out << v;
    for (int i = 0; i < n; ++i) out << "," << fmt(graph.state(v).c[i]);
    out << "," << fmt(graph.value(v)) << "," << graph.staleness(v) << "\n";
  }
}

void write_trajectory_csv(const std::filesystem::path& file,
                          const Trajectory& traj) {
  std::ofstream out(file);
  out << "t";
  const int n = traj.states.empty() ? 2 : traj.states.front().dim;
  for (int i = 0; i < n; ++i) out << ",x" << i;
  out << ",u0,u1\n";
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    out << fmt(i * traj.dt);
    for (int c = 0; c < n; ++c) out << "," << fmt(traj.states[i].c[c]);
    if (i < traj.controls.size()) {
      out << "," << fmt(traj.controls[i][0]) << ","
          << fmt(traj.controls[i][1]);
    } else {
      out << ",,";
    }
    out << "\n";
  }
  out << "# outcome=" << outcome_name(traj.outcome)
      << " hit_time=" << fmt(traj.hit_time) << "\n";
}

void write_rmse_csv(const std::filesystem::path& file,
                    const std::vector<BaselineCheckpoint>& series) {
  std::ofstream out(file);
  out << "wall_s,samples,rmse,excluded\n";
  for (const auto& cp : series) {
    out << fmt(cp.wall_s) << "," << cp.samples << "," << fmt(cp.rmse) << ","
        << cp.excluded << "\n";
  }
}

RunArtifacts run_ipolicy(const Scenario& sc,
                         const std::filesystem::path& out_dir,
                         const OracleGrid* oracle) {
  std::filesystem::create_directories(out_dir);
  {
    std::ofstream cfg(out_dir / "resolved_config.ini");
    cfg << to_config_text(sc.config);
  }

  RunArtifacts artifacts;
  artifacts.dir = out_dir;

  std::mt19937_64 rng(sc.config.seed);
  SampleGraph graph = sc.make_graph();
  seed_initial_vertices(sc, graph, rng);

  std::ofstream log(out_dir / "log.csv");
  log << "k,V,d,eps,rho,S,residual,wall_ms\n";

  const auto t0 = Clock::now();
  bool warned_a8 = false;

  auto checkpoint = [&](int k) {
    write_checkpoint_csv(
        out_dir / ("checkpoint_" + std::to_string(k) + ".csv"), graph);
    if (graph.env().dim() == 3) {
      // Value-map slice: vertices oriented within 10 degrees of the goal
      // heading, for plotting the (x, y) value function of car models.
      const double goal_th = graph.env().goal().center.c[2];
      const double band = 10.0 * std::numbers::pi / 180.0;
      std::ofstream slice(out_dir /
                          ("checkpoint_" + std::to_string(k) + "_slice.csv"));
      slice << "id,x0,x1,x2,theta_value,staleness\n";
      for (VertexId v = 0; v < graph.size(); ++v) {
        const State& s = graph.state(v);
        if (std::abs(std::remainder(s.c[2] - goal_th, 2.0 * std::numbers::pi)) >
            band) {
          continue;
        }
        slice << v << "," << fmt(s.c[0]) << "," << fmt(s.c[1]) << ","
              << fmt(s.c[2]) << "," << fmt(graph.value(v)) << ","
              << graph.staleness(v) << "\n";
      }
    }
    if (oracle) {
      BaselineCheckpoint cp;
      cp.wall_s = seconds_since(t0);
      cp.samples = graph.size();
      try {
        const RmseResult r = rmse(graph.states(), graph.values(), *oracle);
        cp.rmse = r.rmse;
        cp.excluded = r.excluded;
        artifacts.rmse_series.push_back(cp);
      } catch (const std::runtime_error&) {
        // all estimates infinite this early; skip the point
      }
    }
  };

  checkpoint(0);
  int last_checkpoint = 0;
  int last_k = 0;
  for (int k = 1; k <= sc.config.vi.K; ++k) {
    if (sc.config.vi.time_budget_s > 0.0 &&
        seconds_since(t0) > sc.config.vi.time_budget_s) {
      break;
    }
    const State x_new = graph.sample_free(rng);
    graph.add_sample(x_new, sc.config.vi.P);
    if (!warned_a8 && !graph.rho_covers_previous_dispersion()) {
      std::cerr << "warning: rho(d_k, eps_k) < d_{k-1} at k=" << k << "\n";
      warned_a8 = true;
    }
    const auto iter_t0 = Clock::now();
    const UpdateReport report =
        value_iteration_step(graph, sc.config.vi);
    const Resolutions res = graph.resolutions_relaxed();
    log << k << "," << graph.size() << "," << fmt(res.d) << ","
        << fmt(res.eps) << "," << fmt(res.rho) << "," << report.updated.size()
        << "," << fmt(report.residual) << ","
        << fmt(seconds_since(iter_t0) * 1000.0) << "\n";
    last_k = k;
    if (sc.config.checkpoint_every > 0 &&
        k % sc.config.checkpoint_every == 0) {
      checkpoint(k);
      last_checkpoint = k;
    }
  }
  if (last_k != last_checkpoint) checkpoint(last_k);
  artifacts.final_samples = graph.size();

  if (oracle) {
    write_rmse_csv(out_dir / ("rmse_ipolicy_seed" +
                              std::to_string(sc.config.seed) + ".csv"),
                   artifacts.rmse_series);
  }

  int traj_idx = 0;
  for (const auto& start : sc.config.rollout_starts) {
    const Trajectory traj =
        rollout(graph, sc.make_state(start), sc.config.rollout_max_time);
    write_trajectory_csv(
        out_dir / ("trajectory_" + std::to_string(traj_idx++) + ".csv"), traj);
    artifacts.trajectories.push_back(traj);
  }
  return artifacts;
}

ComparisonReport run_comparison(const ScenarioConfig& config,
                                bool with_ipolicy, bool with_multigrid,
                                const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  Scenario sc = build_scenario(config);
  if (sc.env->dim() != 2) {
    throw ConfigError("comparison requires a point-mass scenario");
  }
  const OracleGrid oracle(*sc.env, config.oracle_h);

  ComparisonReport report;
  std::ofstream agg(out_dir / "aggregate.csv");
  agg << "method,seed,wall_s,samples,rmse,excluded\n";

  if (with_ipolicy) {
    for (int i = 0; i < config.comparison_seeds; ++i) {
      ScenarioConfig run_cfg = config;
      run_cfg.seed = config.seed + static_cast<std::uint64_t>(i);
      Scenario run_sc = build_scenario(run_cfg);
      const RunArtifacts art = run_ipolicy(
          run_sc, out_dir / ("ipolicy_seed" + std::to_string(run_cfg.seed)),
          &oracle);
      write_rmse_csv(out_dir / ("rmse_ipolicy_seed" +
                                std::to_string(run_cfg.seed) + ".csv"),
                     art.rmse_series);
      for (const auto& cp : art.rmse_series) {
        agg << "ipolicy," << run_cfg.seed << "," << fmt(cp.wall_s) << ","
            << cp.samples << "," << fmt(cp.rmse) << "," << cp.excluded << "\n";
      }
      report.ipolicy_runs.push_back(art.rmse_series);
    }
  }
  if (with_multigrid) {
    report.multigrid = multigrid_baseline(*sc.env, *sc.model,
                                          config.grid_resolutions,
                                          config.solve_tol, &oracle);
    // The lattice construction is deterministic; one series per seed keeps
    // the per-seed file layout uniform.
    for (int i = 0; i < config.comparison_seeds; ++i) {
      const auto seed = config.seed + static_cast<std::uint64_t>(i);
      write_rmse_csv(
          out_dir / ("rmse_multigrid_seed" + std::to_string(seed) + ".csv"),
          report.multigrid);
      for (const auto& cp : report.multigrid) {
        agg << "multigrid," << seed << "," << fmt(cp.wall_s) << ","
            << cp.samples << "," << fmt(cp.rmse) << "," << cp.excluded << "\n";
      }
    }
  }
  return report;
}

ParkingResult run_parking(const Scenario& sc,
                          const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  if (sc.config.rollout_starts.empty()) {
    throw ConfigError("parking scenario needs a rollout start");
  }
  {
    std::ofstream cfg(out_dir / "resolved_config.ini");
    cfg << to_config_text(sc.config);
  }
  const State start = sc.make_state(sc.config.rollout_starts.front());

  ParkingResult result;
  std::mt19937_64 rng(sc.config.seed);
  SampleGraph graph = sc.make_graph();
  seed_initial_vertices(sc, graph, rng);

  const auto t0 = Clock::now();
  const int check_every = std::max(1, sc.config.checkpoint_every);
  for (int k = 1; k <= sc.config.vi.K; ++k) {
    if (sc.config.vi.time_budget_s > 0.0 &&
        seconds_since(t0) > sc.config.vi.time_budget_s) {
      break;
    }
    graph.add_sample(graph.sample_free(rng), sc.config.vi.P);
    value_iteration_step(graph, sc.config.vi);
    if (k % check_every != 0) continue;
    Trajectory traj = rollout(graph, start, sc.config.rollout_max_time);
    if (traj.outcome == Outcome::kReachedGoal) {
      result.success = true;
      result.samples_at_success = graph.size();
      result.wall_s = seconds_since(t0);
      result.trajectory = std::move(traj);
      break;
    }
  }

  std::ofstream summary(out_dir / "parking_summary.csv");
  summary << "success,samples,wall_s\n";
  summary << (result.success ? 1 : 0) << "," << result.samples_at_success
          << "," << fmt(result.wall_s) << "\n";
  if (result.success) {
    write_trajectory_csv(out_dir / "parking_trajectory.csv",
                         result.trajectory);
  } else {
    // Failure diagnostics: the final value table.
    write_checkpoint_csv(out_dir / "checkpoint_final.csv", graph);
  }
  return result;
}

}  // namespace ipolicy
