#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "lookahead/envs.hpp"
#include "lookahead/learners.hpp"

namespace lookahead {

enum class RegretMode { ExactEval, RealizedReturn };

std::string to_string(RegretMode mode);
RegretMode regret_mode_from_string(const std::string& name);

/// Either a JSON environment file or generator parameters.
struct EnvRef {
  std::optional<std::filesystem::path> file;
  std::optional<EnvSpecParams> spec;
};

struct ExperimentConfig {
  std::string id = "run";
  EnvRef env;
  LearnerConfig learner;
  Regime regime = Regime::Reward;
  std::int64_t K = 1;
  std::vector<std::uint64_t> seeds{0};
  RegretMode regret_mode = RegretMode::ExactEval;
  std::filesystem::path output = ".";
  std::int64_t checkpoint_every = 0;  // 0 disables checkpoints
  bool timing = false;                // false writes elapsed_ms = 0 so outputs are reproducible
  std::size_t support_cap = kDefaultSupportCap;

  /// Throws InputError when K < 1, seeds are empty or the learner cannot run in the regime.
  void validate() const;
};

/// Relative env file paths are resolved against base_dir. Throws InputError.
ExperimentConfig experiment_config_from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
ExperimentConfig load_experiment_config(const std::filesystem::path& path);
nlohmann::json experiment_config_to_json(const ExperimentConfig& config);

TabularLookaheadMdp resolve_env(const EnvRef& env);

struct RegretPoint {
  std::int64_t k = 0;
  double vstar = 0.0;
  double policy_value = 0.0;
  double cum_regret = 0.0;
  double elapsed_ms = 0.0;
  double optimistic = 0.0;  // V-bar_1(s_1^k) of the plan used in episode k; not persisted
};

struct RegretCurve {
  std::string config_id;
  std::uint64_t seed = 0;
  std::vector<RegretPoint> points;

  double final_regret() const { return points.empty() ? 0.0 : points.back().cum_regret; }
  std::vector<double> cumulative() const;
};

struct RunOptions {
  /// Called after each episode with the learner state used in that episode.
  std::function<void(const RegretPoint&, const Learner&)> on_episode;
  /// Resume from <output>/<id>__seed<seed>.ckpt.json when it exists.
  bool resume = false;
};

/// One seed of an experiment on a prepared environment. vstar_table is the
/// exact lookahead-optimal value table for the config's regime.
RegretCurve run_seed(const ExperimentConfig& config, const TabularLookaheadMdp& mdp, const ValueTable& vstar_table,
                     std::uint64_t seed, const RunOptions& options = {});

/// All seeds of a config, sequentially; also writes per-run CSVs.
std::vector<RegretCurve> run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

/// Least-squares slope of ln Reg(k) against ln k over the trailing `window`
/// fraction of episodes; entry i of cum_regret is episode i + 1. Non-positive
/// values are skipped. Throws ContractError for fewer than 100 episodes or
/// when fewer than two points remain.
double slope_estimate(const std::vector<double>& cum_regret, double window = 0.5);

/// Reg(K) / Reg(floor(K/2)).
double growth_ratio(const std::vector<double>& cum_regret);

struct SummaryRow {
  std::string config_id;
  int seeds = 0;
  std::int64_t K = 0;
  double final_regret_mean = 0.0;
  double final_regret_se = 0.0;
  double slope = 0.0;  // NaN when undefined
};

/// Mean cumulative-regret curve over runs (truncated to the shortest run).
std::vector<double> mean_curve(const std::vector<const RegretCurve*>& runs);
/// Groups by config id in sorted order; within a group runs are sorted by seed.
std::vector<SummaryRow> summarize(std::vector<RegretCurve> curves);

std::filesystem::path run_csv_path(const std::filesystem::path& dir, const std::string& config_id, std::uint64_t seed);
void write_run_csv(const RegretCurve& curve, const std::filesystem::path& path);
/// config_id and seed come from the file name. Throws InputError naming the path.
RegretCurve read_run_csv(const std::filesystem::path& path);
void write_summary_csv(const std::vector<SummaryRow>& rows, const std::filesystem::path& path);

struct RunFailure {
  std::string config_id;
  std::uint64_t seed = 0;
  std::string error;
};

struct SweepResult {
  std::vector<RegretCurve> curves;   // (config, seed) order of the input
  std::vector<RunFailure> failures;
  std::vector<SummaryRow> summary;
};

/// Thread count for a requested parallelism: at least 1, capped by the
/// LOOKAHEAD_RL_THREADS environment variable when set.
int effective_threads(int requested);

/// Runs every (config, seed) pair on up to `parallelism` threads. Each run
/// writes its own CSV; summary.csv (and errors.csv when a run failed) go to
/// summary_dir. Failed runs are recorded and the sweep continues.
SweepResult sweep(const std::vector<ExperimentConfig>& configs, int parallelism,
                  const std::filesystem::path& summary_dir);

/// Canonical number formatting used in every CSV: %.17g.
std::string format_number(double x);

}  // namespace lookahead
