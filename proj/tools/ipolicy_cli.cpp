#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "ipolicy/runner.hpp"
#include "ipolicy/scenario.hpp"

namespace {

struct CommonOpts {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out = "out";
  std::optional<double> time_budget;
  std::optional<int> max_samples;
};

void add_common(CLI::App* cmd, CommonOpts* opts) {
  cmd->add_option("--config", opts->config,
                  "Scenario config file or preset name")
      ->required();
  cmd->add_option("--seed", opts->seed, "Random seed override");
  cmd->add_option("--out", opts->out, "Output directory");
  cmd->add_option("--time-budget", opts->time_budget,
                  "Wall-clock budget in seconds");
  cmd->add_option("--max-samples", opts->max_samples,
                  "Maximum total sample count");
}

ipolicy::ScenarioConfig resolve(const CommonOpts& opts) {
  ipolicy::ScenarioConfig cfg = ipolicy::is_preset(opts.config)
                                    ? ipolicy::preset(opts.config)
                                    : ipolicy::load_config(opts.config);
  if (opts.seed) cfg.seed = *opts.seed;
  if (opts.time_budget) cfg.vi.time_budget_s = *opts.time_budget;
  if (opts.max_samples) {
    cfg.vi.K = std::max(0, *opts.max_samples - cfg.init_samples - 1);
  }
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Incremental feedback motion planner"};
  app.require_subcommand(1);

  CommonOpts run_opts, cmp_opts, park_opts, val_opts;
  CLI::App* run = app.add_subcommand("run", "Run a single scenario");
  add_common(run, &run_opts);
  CLI::App* compare =
      app.add_subcommand("compare", "Planner vs multigrid baseline");
  add_common(compare, &cmp_opts);
  std::vector<std::string> methods{"ipolicy", "multigrid"};
  compare->add_option("--methods", methods, "Subset of {ipolicy, multigrid}");
  CLI::App* park = app.add_subcommand("park", "Parking scenario");
  add_common(park, &park_opts);
  CLI::App* validate = app.add_subcommand("validate", "Check a config");
  add_common(validate, &val_opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      const auto cfg = resolve(run_opts);
      const auto sc = ipolicy::build_scenario(cfg);
      std::unique_ptr<ipolicy::OracleGrid> oracle;
      if (sc.env->dim() == 2) {
        oracle = std::make_unique<ipolicy::OracleGrid>(*sc.env, cfg.oracle_h);
      }
      const auto art = ipolicy::run_ipolicy(sc, run_opts.out, oracle.get());
      std::cout << "run complete: " << art.final_samples << " samples, "
                << "artifacts in " << art.dir.string() << "\n";
      return 0;
    }
    if (compare->parsed()) {
      const auto cfg = resolve(cmp_opts);
      bool with_ipolicy = false, with_multigrid = false;
      for (const auto& m : methods) {
        if (m == "ipolicy") with_ipolicy = true;
        else if (m == "multigrid") with_multigrid = true;
        else throw ipolicy::ConfigError("unknown method: " + m);
      }
      ipolicy::run_comparison(cfg, with_ipolicy, with_multigrid, cmp_opts.out);
      std::cout << "comparison artifacts in " << cmp_opts.out << "\n";
      return 0;
    }
    if (park->parsed()) {
      const auto cfg = resolve(park_opts);
      const auto sc = ipolicy::build_scenario(cfg);
      const auto result = ipolicy::run_parking(sc, park_opts.out);
      if (!result.success) {
        std::cerr << "parking: budget exhausted without a successful rollout\n";
        return 3;
      }
      std::cout << "parking success: " << result.samples_at_success
                << " samples, " << result.wall_s << " s\n";
      return 0;
    }
    if (validate->parsed()) {
      const auto cfg = resolve(val_opts);
      ipolicy::build_scenario(cfg);
      std::cout << "config ok: " << cfg.name << "\n";
      return 0;
    }
  } catch (const ipolicy::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
