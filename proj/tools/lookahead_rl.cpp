// lookahead-rl: command-line front end for the lookahead RL library.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lookahead/env_io.hpp"
#include "lookahead/envs.hpp"
#include "lookahead/errors.hpp"
#include "lookahead/harness.hpp"
#include "lookahead/planning.hpp"
#include "lookahead/report.hpp"
#include "lookahead/selftest.hpp"

namespace lr = lookahead;

namespace {

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kInputError = 2;

int cmd_make_env(const lr::EnvSpecParams& params, bool correlated, const std::string& out) {
  lr::EnvSpecParams p = params;
  p.independent = !correlated;
  lr::save_mdp(lr::make_env(p), out);
  std::printf("wrote %s\n", out.c_str());
  return kOk;
}

int cmd_plan(const std::string& env, const std::string& regime, const std::string& method, int samples,
             std::uint64_t seed, std::size_t cap, const std::string& out) {
  const auto mdp = lr::load_mdp(env);
  const lr::Regime r = lr::regime_from_string(regime);
  lr::PlannerMethod m;
  if (method == "exact") {
    m = lr::PlannerMethod::exact(cap);
  } else if (method == "exact-list") {
    m = lr::PlannerMethod::exact_list();
  } else if (method == "sample") {
    m = lr::PlannerMethod::sample(samples, seed);
  } else {
    throw lr::InputError("unknown method '" + method + "'");
  }
  lr::PlanResult plan;
  switch (r) {
    case lr::Regime::None: plan = lr::plan_no_lookahead(mdp); break;
    case lr::Regime::Reward: plan = lr::plan_reward_lookahead(mdp, m); break;
    case lr::Regime::Transition: plan = lr::plan_transition_lookahead(mdp, m); break;
  }
  std::string text = "h,s,value\n";
  const auto& V = plan.values.values;
  for (Eigen::Index h = 0; h < V.rows(); ++h) {
    for (Eigen::Index s = 0; s < V.cols(); ++s) {
      text += std::to_string(h + 1) + "," + std::to_string(s) + "," + lr::format_number(V(h, s)) + "\n";
    }
  }
  if (out.empty() || out == "-") {
    std::fwrite(text.data(), 1, text.size(), stdout);
  } else {
    std::ofstream f(out, std::ios::binary | std::ios::trunc);
    if (!f) throw lr::InputError("cannot write " + out);
    f << text;
  }
  return kOk;
}

void print_summary(const std::vector<lr::SummaryRow>& rows) {
  std::printf("config_id,seeds,K,final_regret_mean,final_regret_se,slope\n");
  for (const auto& r : rows) {
    std::printf("%s,%d,%lld,%s,%s,%s\n", r.config_id.c_str(), r.seeds, static_cast<long long>(r.K),
                lr::format_number(r.final_regret_mean).c_str(), lr::format_number(r.final_regret_se).c_str(),
                lr::format_number(r.slope).c_str());
  }
}

int cmd_learn(const std::string& config_path, const std::string& out, bool resume) {
  auto config = lr::load_experiment_config(config_path);
  if (!out.empty()) config.output = out;
  lr::RunOptions options;
  options.resume = resume;
  const auto curves = lr::run_experiment(config, options);
  print_summary(lr::summarize(curves));
  return kOk;
}

int cmd_sweep(const std::vector<std::string>& config_paths, const std::string& out, int threads) {
  std::vector<lr::ExperimentConfig> configs;
  for (const auto& p : config_paths) {
    configs.push_back(lr::load_experiment_config(p));
    if (!out.empty()) configs.back().output = out;
  }
  const auto result = lr::sweep(configs, threads, out.empty() ? "." : out);
  print_summary(result.summary);
  for (const auto& f : result.failures) {
    std::fprintf(stderr, "run %s seed %llu failed: %s\n", f.config_id.c_str(),
                 static_cast<unsigned long long>(f.seed), f.error.c_str());
  }
  return result.failures.empty() ? kOk : kCheckFailed;
}

int cmd_report(const std::string& dir) {
  const auto files = lr::write_report(dir);
  std::printf("wrote %s\nwrote %s\n", files.summary.c_str(), files.chart.c_str());
  return kOk;
}

int cmd_selftest() {
  const auto results = lr::run_selftest();
  for (const auto& r : results) {
    std::printf("%s %s%s%s\n", r.passed ? "ok  " : "FAIL", r.name.c_str(), r.detail.empty() ? "" : ": ",
                r.detail.c_str());
  }
  if (!results.empty() && !results.back().passed) {
    std::fprintf(stderr, "selftest failed: %s\n", results.back().name.c_str());
    return kCheckFailed;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tabular episodic RL with one-step reward or transition lookahead"};
  app.require_subcommand(1, 1);

  lr::EnvSpecParams env_params;
  bool correlated = false;
  std::string env_out;
  auto* make_env = app.add_subcommand("make-env", "Generate an environment file");
  make_env->add_option("--family", env_params.family, "fig1-prophet | transition-chain | prophet-chain | random")
      ->required();
  make_env->add_option("--S", env_params.S, "number of states (random)");
  make_env->add_option("--A", env_params.A, "number of actions");
  make_env->add_option("--H", env_params.H, "horizon");
  make_env->add_option("--n", env_params.n, "stages (prophet-chain)");
  make_env->add_option("--p", env_params.p, "stage reward probability (prophet-chain)");
  make_env->add_option("--seed", env_params.seed, "generator seed (random)");
  make_env->add_flag("--correlated", correlated, "correlated joint transitions (random)");
  make_env->add_option("--out", env_out, "output JSON file")->required();

  std::string plan_env, plan_regime = "reward", plan_method = "exact", plan_out;
  int plan_samples = 1000;
  std::uint64_t plan_seed = 0;
  std::size_t plan_cap = lr::kDefaultSupportCap;
  auto* plan = app.add_subcommand("plan", "Exact or sampled optimal values, written as h,s,value");
  plan->add_option("--env", plan_env, "environment JSON file")->required();
  plan->add_option("--regime", plan_regime, "none | reward | transition");
  plan->add_option("--method", plan_method, "exact | exact-list | sample");
  plan->add_option("--samples", plan_samples, "draws per (h, s) for --method sample");
  plan->add_option("--seed", plan_seed, "seed for --method sample");
  plan->add_option("--support-cap", plan_cap, "largest joint support enumerated exactly");
  plan->add_option("--out", plan_out, "output CSV (default stdout)");

  std::string learn_config, learn_out;
  bool learn_resume = false;
  auto* learn = app.add_subcommand("learn", "Run one experiment config, all seeds");
  learn->add_option("--config", learn_config, "experiment JSON")->required();
  learn->add_option("--out", learn_out, "output directory (overrides the config)");
  learn->add_flag("--resume", learn_resume, "continue from checkpoints when present");

  std::vector<std::string> sweep_configs;
  std::string sweep_out;
  int sweep_threads = 0;
  auto* sweep = app.add_subcommand("sweep", "Run several configs and seeds in parallel");
  sweep->add_option("--config", sweep_configs, "experiment JSON (repeatable)")->required();
  sweep->add_option("--out", sweep_out, "directory for run CSVs and summary.csv");
  sweep->add_option("--threads", sweep_threads, "worker threads (0 = all cores; LOOKAHEAD_RL_THREADS caps)");

  std::string report_dir;
  auto* report = app.add_subcommand("report", "Summary CSV and SVG chart from run CSVs");
  report->add_option("dir", report_dir, "directory holding <id>__seed<n>.csv files")->required();

  auto* selftest = app.add_subcommand("selftest", "Closed-form and oracle checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  try {
    if (*make_env) return cmd_make_env(env_params, correlated, env_out);
    if (*plan) return cmd_plan(plan_env, plan_regime, plan_method, plan_samples, plan_seed, plan_cap, plan_out);
    if (*learn) return cmd_learn(learn_config, learn_out, learn_resume);
    if (*sweep) return cmd_sweep(sweep_configs, sweep_out, sweep_threads);
    if (*report) return cmd_report(report_dir);
    if (*selftest) return cmd_selftest();
  } catch (const lr::InputError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kInputError;
  } catch (const lr::CapacityError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kInputError;
  } catch (const lr::ContractError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kInputError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kCheckFailed;
  }
  return kInputError;
}
