#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "lookahead/env_io.hpp"
#include "lookahead/errors.hpp"
#include "lookahead/harness.hpp"
#include "lookahead/report.hpp"

using namespace lookahead;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("lookahead_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentConfig small_config(const std::string& id, Algorithm algo, Regime regime, std::int64_t K,
                              const fs::path& out) {
  ExperimentConfig c;
  c.id = id;
  EnvSpecParams p;
  p.family = "random";
  p.S = 3;
  p.A = 2;
  p.H = 3;
  p.seed = 4;
  c.env.spec = p;
  c.learner.algo = algo;
  c.learner.bonus.reward_scale = 0.05;
  c.learner.bonus.transition_scale = 0.05;
  c.regime = regime;
  c.K = K;
  c.seeds = {1, 2, 3};
  c.output = out;
  return c;
}

}  // namespace

TEST_CASE("slope estimates on exact power laws") {
  std::vector<double> sq, lin;
  for (int k = 1; k <= 1000; ++k) {
    sq.push_back(std::sqrt(static_cast<double>(k)));
    lin.push_back(static_cast<double>(k));
  }
  CHECK(std::abs(slope_estimate(sq, 0.5) - 0.5) < 0.01);
  CHECK(std::abs(slope_estimate(lin, 0.5) - 1.0) < 0.01);
  CHECK(growth_ratio(lin) == doctest::Approx(2.0));
  CHECK_THROWS_AS(slope_estimate(std::vector<double>(50, 1.0)), ContractError);
  CHECK_THROWS_AS(slope_estimate(std::vector<double>(200, 0.0)), ContractError);
  std::vector<double> mixed(200, -1.0);
  mixed[150] = 2.0;
  mixed[199] = 4.0;
  CHECK(std::isfinite(slope_estimate(mixed)));
}

TEST_CASE("the exact optimal learner has zero regret") {
  const auto dir = fresh_dir("optimal");
  for (Regime regime : {Regime::None, Regime::Reward, Regime::Transition}) {
    auto c = small_config("opt", Algorithm::Optimal, regime, 200, dir);
    const auto curves = run_experiment(c);
    for (const auto& curve : curves) CHECK(std::abs(curve.final_regret()) < 1e-9);
  }
}

TEST_CASE("exact-eval regret increments are non-negative") {
  const auto dir = fresh_dir("increments");
  for (auto [algo, regime] : {std::pair{Algorithm::MvpRl, Regime::Reward}, std::pair{Algorithm::MvpTl, Regime::Transition},
                              std::pair{Algorithm::MvpVanilla, Regime::None}}) {
    const auto curves = run_experiment(small_config("inc", algo, regime, 300, dir));
    for (const auto& curve : curves) {
      double prev = 0.0;
      for (const auto& p : curve.points) {
        CHECK(p.cum_regret - prev >= -1e-9);
        CHECK(std::isfinite(p.cum_regret));
        prev = p.cum_regret;
      }
    }
  }
}

TEST_CASE("realized-return regret tracks exact-eval regret") {
  const auto dir = fresh_dir("realized");
  auto exact = small_config("exact", Algorithm::MvpRl, Regime::Reward, 2000, dir);
  exact.seeds = {1, 2, 3, 4, 5, 6, 7, 8};
  auto realized = exact;
  realized.id = "realized";
  realized.regret_mode = RegretMode::RealizedReturn;
  const auto a = summarize(run_experiment(exact));
  const auto b = summarize(run_experiment(realized));
  const double K = 2000.0, H = 3.0, seeds = 8.0;
  CHECK(std::abs(a[0].final_regret_mean - b[0].final_regret_mean) / K <= 3.0 * H / std::sqrt(seeds * K));
}

TEST_CASE("runs are deterministic and CSVs reproduce the summary bit for bit") {
  const auto d1 = fresh_dir("det1");
  const auto d2 = fresh_dir("det2");
  const auto r1 = sweep({small_config("rl", Algorithm::MvpRl, Regime::Reward, 150, d1),
                         small_config("tl", Algorithm::MvpTl, Regime::Transition, 150, d1)},
                        1, d1);
  const auto r2 = sweep({small_config("rl", Algorithm::MvpRl, Regime::Reward, 150, d2),
                         small_config("tl", Algorithm::MvpTl, Regime::Transition, 150, d2)},
                        4, d2);
  CHECK(r1.failures.empty());
  for (const auto& entry : fs::directory_iterator(d1)) {
    CHECK(slurp(entry.path()) == slurp(d2 / entry.path().filename()));
  }
  CHECK(slurp(run_csv_path(d1, "rl", 1)) != slurp(run_csv_path(d1, "rl", 2)));

  const auto again = summarize(read_run_directory(d1));
  REQUIRE(again.size() == r1.summary.size());
  for (std::size_t i = 0; i < again.size(); ++i) {
    CHECK(again[i].config_id == r1.summary[i].config_id);
    CHECK(again[i].final_regret_mean == r1.summary[i].final_regret_mean);
    CHECK(again[i].final_regret_se == r1.summary[i].final_regret_se);
    CHECK(std::memcmp(&again[i].slope, &r1.summary[i].slope, sizeof(double)) == 0);
  }
}

TEST_CASE("sweep records failed runs and keeps going") {
  const auto dir = fresh_dir("failures");
  auto good = small_config("good", Algorithm::MvpRl, Regime::Reward, 20, dir);
  auto bad = good;
  bad.id = "bad";
  bad.env.spec.reset();
  bad.env.file = dir / "missing.json";
  const auto result = sweep({good, bad}, 2, dir);
  CHECK(result.curves.size() == 3);
  CHECK(result.failures.size() == 3);
  CHECK(fs::exists(dir / "errors.csv"));
  CHECK(slurp(dir / "errors.csv").find("missing.json") != std::string::npos);
  CHECK(slurp(dir / "summary.csv").find("good,3,20,") != std::string::npos);
}

TEST_CASE("checkpoints resume to the same curve") {
  const auto dir = fresh_dir("resume");
  auto c = small_config("ck", Algorithm::MvpTl, Regime::Transition, 120, dir);
  c.seeds = {5};
  const auto full = run_experiment(c);

  const auto dir2 = fresh_dir("resume2");
  auto partial = c;
  partial.output = dir2;
  partial.K = 70;
  partial.checkpoint_every = 35;
  run_experiment(partial);
  auto rest = partial;
  rest.K = 120;
  rest.checkpoint_every = 0;
  RunOptions opts;
  opts.resume = true;
  const auto resumed = run_experiment(rest, opts);
  REQUIRE(resumed[0].points.size() == full[0].points.size());
  for (std::size_t i = 0; i < full[0].points.size(); ++i) {
    CHECK(resumed[0].points[i].cum_regret == full[0].points[i].cum_regret);
  }
  CHECK(slurp(run_csv_path(dir, "ck", 5)) == slurp(run_csv_path(dir2, "ck", 5)));
}

TEST_CASE("experiment configs parse and validate") {
  const auto doc = nlohmann::json::parse(R"({
    "id": "cfg", "env": {"family": "fig1-prophet", "A": 3, "H": 4},
    "learner": {"algo": "mvp-rl", "delta": 0.1}, "regime": "reward",
    "K": 10, "seeds": [0, 1], "regret_mode": "realized-return", "checkpoint_every": 5 })");
  const auto c = experiment_config_from_json(doc);
  CHECK(c.K == 10);
  CHECK(c.seeds.size() == 2);
  CHECK(c.regret_mode == RegretMode::RealizedReturn);
  CHECK(experiment_config_from_json(experiment_config_to_json(c)).env.spec->A == 3);

  auto bad = doc;
  bad["K"] = 0;
  CHECK_THROWS_AS(experiment_config_from_json(bad), InputError);
  bad = doc;
  bad["seeds"] = nlohmann::json::array();
  CHECK_THROWS_AS(experiment_config_from_json(bad), InputError);
  bad = doc;
  bad["regime"] = "transition";
  CHECK_THROWS_AS(experiment_config_from_json(bad), InputError);
  bad = doc;
  bad["id"] = "a__seed1";
  CHECK_THROWS_AS(experiment_config_from_json(bad), InputError);
}

TEST_CASE("run CSVs reject corruption") {
  const auto dir = fresh_dir("corrupt");
  std::ofstream(dir / "x__seed1.csv") << "seed,k,vstar,policy_value,cum_regret,elapsed_ms\n1,1,0.5,abc,0,0\n";
  CHECK_THROWS_AS(read_run_csv(dir / "x__seed1.csv"), InputError);
  std::ofstream(dir / "y__seed1.csv") << "wrong\n";
  CHECK_THROWS_AS(read_run_csv(dir / "y__seed1.csv"), InputError);
  std::ofstream(dir / "z__seed2.csv") << "seed,k,vstar,policy_value,cum_regret,elapsed_ms\n1,1,0.5,0.5,0,0\n";
  CHECK_THROWS_AS(read_run_csv(dir / "z__seed2.csv"), InputError);
}

TEST_CASE("thread cap from the environment") {
  setenv("LOOKAHEAD_RL_THREADS", "2", 1);
  CHECK(effective_threads(8) == 2);
  CHECK(effective_threads(1) == 1);
  unsetenv("LOOKAHEAD_RL_THREADS");
  CHECK(effective_threads(3) == 3);
}
