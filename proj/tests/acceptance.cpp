// Acceptance suite: one PASS/FAIL line per criterion, exit code 1 if any fail.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "lookahead/bonuses.hpp"
#include "lookahead/envs.hpp"
#include "lookahead/extended_mdp.hpp"
#include "lookahead/harness.hpp"
#include "lookahead/learners.hpp"
#include "lookahead/planning.hpp"
#include "lookahead/ranked_list.hpp"
#include "lookahead/rng.hpp"
#include "lookahead/selftest.hpp"

using namespace lookahead;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kDeskSeed = 11;

struct Outcome {
  bool passed = false;
  std::string detail;
};

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b, c, d);
  return buf;
}

double max_gap(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) { return (a - b).cwiseAbs().maxCoeff(); }

Eigen::MatrixXd random_marginals(int A, int S, RngStream& rng) {
  Eigen::MatrixXd M(A, S);
  for (int a = 0; a < A; ++a) {
    for (int s = 0; s < S; ++s) M(a, s) = -std::log1p(-rng.uniform());
    M.row(a) /= M.row(a).sum();
  }
  return M;
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("lookahead_acceptance_" + name);
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

Outcome fig1_separation() {
  const auto mdp = make_fig1_prophet(5, 20);
  const double v = plan_no_lookahead(mdp).values(0, 0);
  const double vr = plan_reward_lookahead(mdp).values(0, 0);
  const double want = 1.0 - std::pow(79.0 / 80.0, 80.0);
  bool ok = v == 0.0125 && std::abs(vr - want) <= 1e-10;
  double worst = 1.0;
  for (int A = 2; A <= 6; ++A) {
    for (int H = 2; H <= 20; ++H) worst = std::min(worst, plan_reward_lookahead(make_fig1_prophet(A, H)).values(0, 0));
  }
  ok = ok && worst >= 1.0 - std::exp(-1.0);
  return {ok, fmt("V*=%.17g V^R*=%.12f (want %.12f), min over grid %.6f", v, vr, want, worst)};
}

Outcome chain_separation() {
  const auto mdp = make_transition_chain(4, 12);
  const double v = plan_no_lookahead(mdp).values(0, 0);
  const double vt = plan_transition_lookahead(mdp, PlannerMethod::exact_list()).values(0, 0);
  return {vt >= 0.5 && vt / v > 10.0, fmt("V^T*=%.6f V*=%.6f ratio %.2f", vt, v, vt / v)};
}

Outcome oracle_equivalence() {
  RngStream rng(3, {0, 0, Purpose::Simulation, 3});
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const int S = 1 + static_cast<int>(rng.uniform() * 3);
    const int A = 1 + static_cast<int>(rng.uniform() * 3);
    const int H = 1 + static_cast<int>(rng.uniform() * 3);
    const auto mdp = make_random_mdp(S, A, H, 1000 + static_cast<std::uint64_t>(i), true);
    const auto r = plan_reward_lookahead(mdp).values.values;
    const auto t = plan_transition_lookahead(mdp).values.values;
    const auto tl = plan_transition_lookahead(mdp, PlannerMethod::exact_list()).values.values;
    worst = std::max({worst, max_gap(r, oracle_extended_reward(mdp).values), max_gap(t, tl),
                      max_gap(t, oracle_extended_transition(mdp).values)});
    const auto corr = make_random_mdp(S, A, H, 2000 + static_cast<std::uint64_t>(i), false);
    worst = std::max({worst, max_gap(plan_reward_lookahead(corr).values.values, oracle_extended_reward(corr).values),
                      max_gap(plan_transition_lookahead(corr).values.values, oracle_extended_transition(corr).values)});
  }
  return {worst <= 1e-12, fmt("max deviation %.3g over 50 independent + 50 correlated instances", worst)};
}

Outcome mu_correctness() {
  Eigen::MatrixXd P(2, 2);
  P << 0.7, 0.3, 0.4, 0.6;
  const RankedList worked({{0, 0, 4.0}, {0, 1, 3.0}, {1, 1, 2.0}, {1, 0, 1.0}}, 2, 2);
  const double worked_gap = (mu_independent(worked, P) - Eigen::Vector4d(0.7, 0.12, 0.18, 0.0)).cwiseAbs().maxCoeff();

  RngStream rng(5, {0, 0, Purpose::Simulation, 4});
  double worst = 0.0, worst_sum = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int S = 1 + static_cast<int>(rng.uniform() * 3);
    const int A = 1 + static_cast<int>(rng.uniform() * 3);
    const Eigen::MatrixXd M = random_marginals(A, S, rng);
    Eigen::MatrixXd scores(S, A);
    for (int s = 0; s < S; ++s) {
      for (int a = 0; a < A; ++a) scores(s, a) = std::floor(rng.uniform() * 4.0);
    }
    const RankedList list = build_ranked_list(scores);
    const Eigen::VectorXd mu = mu_independent(list, M);
    worst = std::max(worst, (mu - mu_by_enumeration(list, M)).cwiseAbs().maxCoeff());
    worst_sum = std::max(worst_sum, std::abs(mu.sum() - 1.0));
  }
  return {worked_gap <= 1e-12 && worst <= 1e-12 && worst_sum <= 1e-12,
          fmt("worked example gap %.3g, enumeration gap %.3g, sum gap %.3g", worked_gap, worst, worst_sum)};
}

Outcome bonus_monotonicity() {
  RngStream rng(9, {0, 0, Purpose::Simulation, 5});
  int decreases = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 10000; ++trial) {
    const int S = 2 + static_cast<int>(rng.uniform() * 5);
    const double H = 1.0 + std::floor(rng.uniform() * 20.0);
    const double n = 1.0 + std::floor(rng.uniform() * 5000.0);
    const double L = 0.01 + rng.uniform() * 30.0;
    Eigen::VectorXd p(S), v(S);
    for (int i = 0; i < S; ++i) {
      p(i) = -std::log1p(-rng.uniform());
      v(i) = rng.uniform() * H;
    }
    p /= p.sum();
    const double before = monotone_objective(p, v, n, L, H);
    const int i = static_cast<int>(rng.uniform() * S);
    v(i) += rng.uniform() * (H - v(i));
    const double drop = before - monotone_objective(p, v, n, L, H);
    worst = std::max(worst, drop);
    if (drop > 1e-12) ++decreases;
  }
  return {decreases == 0, fmt("%.0f decreases in 10000 trials, largest drop %.3g", decreases, worst)};
}

ExperimentConfig desk_config(const std::string& id, Algorithm algo, Regime regime, const fs::path& out) {
  ExperimentConfig c;
  c.id = id;
  EnvSpecParams p;
  p.family = "random";
  p.S = 3;
  p.A = 3;
  p.H = 4;
  p.seed = kDeskSeed;
  c.env.spec = p;
  c.learner.algo = algo;
  c.regime = regime;
  c.K = 20000;
  c.seeds = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  c.output = out;
  return c;
}

struct Growth {
  double ratio = 0.0;
  double slope = 0.0;
  double final_regret = 0.0;
};

Growth growth_of(const std::vector<RegretCurve>& curves) {
  std::vector<const RegretCurve*> runs;
  for (const auto& c : curves) runs.push_back(&c);
  const auto mean = mean_curve(runs);
  return {growth_ratio(mean), slope_estimate(mean, 0.5), mean.back()};
}

double tail_return(const std::vector<RegretCurve>& curves) {
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& c : curves) {
    for (std::size_t i = c.points.size() - c.points.size() / 4; i < c.points.size(); ++i) {
      sum += c.points[i].policy_value;
      ++count;
    }
  }
  return sum / static_cast<double>(count);
}

ExperimentConfig fig1_config(const std::string& id, Algorithm algo, const fs::path& out) {
  ExperimentConfig c = desk_config(id, algo, Regime::Reward, out);
  EnvSpecParams p;
  p.family = "fig1-prophet";
  p.A = 5;
  p.H = 20;
  c.env.spec = p;
  return c;
}

Outcome regret_sublinearity() {
  const auto dir = scratch("regret");
  const Growth rl = growth_of(run_experiment(desk_config("mvp-rl", Algorithm::MvpRl, Regime::Reward, dir)));
  const Growth tl = growth_of(run_experiment(desk_config("mvp-tl", Algorithm::MvpTl, Regime::Transition, dir)));
  const double fig1_rl = tail_return(run_experiment(fig1_config("fig1-rl", Algorithm::MvpRl, dir)));
  const double fig1_vanilla = tail_return(run_experiment(fig1_config("fig1-vanilla", Algorithm::MvpVanilla, dir)));

  const bool rl_ok = rl.ratio <= 1.9 && rl.slope <= 0.8;
  const bool tl_ok = tl.ratio <= 1.9 && tl.slope <= 0.8;
  const bool fig1_ok = fig1_rl >= 0.5 && fig1_vanilla <= 0.02;
  std::printf("  mvp-rl  Reg(K)=%.1f ratio=%.3f slope=%.3f %s\n", rl.final_regret, rl.ratio, rl.slope, rl_ok ? "ok" : "FAIL");
  std::printf("  mvp-tl  Reg(K)=%.1f ratio=%.3f slope=%.3f %s\n", tl.final_regret, tl.ratio, tl.slope, tl_ok ? "ok" : "FAIL");
  std::printf("  fig1    mvp-rl tail return=%.4f  vanilla tail return=%.4f %s\n", fig1_rl, fig1_vanilla,
              fig1_ok ? "ok" : "FAIL");
  return {rl_ok && tl_ok && fig1_ok, "default bonus constants, K=20000, 10 seeds"};
}

void scaled_bonus_diagnostic() {
  const auto dir = scratch("diagnostic");
  auto rl = desk_config("mvp-rl-scaled", Algorithm::MvpRl, Regime::Reward, dir);
  auto tl = desk_config("mvp-tl-scaled", Algorithm::MvpTl, Regime::Transition, dir);
  auto fig1 = fig1_config("fig1-rl-scaled", Algorithm::MvpRl, dir);
  for (auto* c : {&rl, &tl, &fig1}) {
    c->learner.bonus.reward_scale = 0.01;
    c->learner.bonus.transition_scale = 0.01;
  }
  const Growth g_rl = growth_of(run_experiment(rl));
  const Growth g_tl = growth_of(run_experiment(tl));
  const double fig1_rl = tail_return(run_experiment(fig1));
  std::printf("  info: bonus multipliers 0.01 (not a criterion)\n");
  std::printf("  info: mvp-rl Reg(K)=%.1f ratio=%.3f slope=%.3f\n", g_rl.final_regret, g_rl.ratio, g_rl.slope);
  std::printf("  info: mvp-tl Reg(K)=%.1f ratio=%.3f slope=%.3f\n", g_tl.final_regret, g_tl.ratio, g_tl.slope);
  std::printf("  info: fig1 mvp-rl tail return=%.4f\n", fig1_rl);
}

Outcome empirical_optimism() {
  const auto dir = scratch("optimism");
  std::string detail;
  bool ok = true;
  for (auto [algo, regime] : {std::pair{Algorithm::MvpRl, Regime::Reward}, std::pair{Algorithm::MvpTl, Regime::Transition}}) {
    auto c = desk_config(to_string(algo), algo, regime, dir);
    c.K = 2000;
    c.learner.bonus.delta = 0.1;
    c.seeds.clear();
    for (std::uint64_t s = 0; s < 20; ++s) c.seeds.push_back(100 + s);
    int good = 0;
    for (const auto& curve : run_experiment(c)) {
      bool all = true;
      for (const auto& p : curve.points) all = all && p.optimistic >= p.vstar - 1e-9;
      good += all ? 1 : 0;
    }
    ok = ok && good >= 18;
    detail += to_string(algo) + " " + std::to_string(good) + "/20 seeds optimistic; ";
  }
  return {ok, detail};
}

struct PairedMean {
  double mean = 0.0;
  double se = 0.0;
};

template <typename Fn>
PairedMean monte_carlo(int episodes, Fn&& sample) {
  double sum = 0.0, sq = 0.0;
  for (int k = 1; k <= episodes; ++k) {
    const double d = sample(k);
    sum += d;
    sq += d * d;
  }
  const double mean = sum / episodes;
  return {mean, std::sqrt(std::max(0.0, sq / episodes - mean * mean) / episodes)};
}

double variance_of(const Eigen::VectorXd& p, const Eigen::VectorXd& v) {
  const double m = p.dot(v);
  return std::max(0.0, p.dot(v.cwiseProduct(v)) - m * m);
}

Outcome ltv_checks() {
  constexpr int kEpisodes = 100000;
  std::string detail;
  bool ok = true;

  {
    const auto mdp = make_random_mdp(3, 3, 4, 21, true);
    const auto plan = plan_optimal(mdp, Regime::Reward);
    const auto& V = plan.values;
    OptimalLearner agent(mdp, Regime::Reward);
    double lhs = 0.0, rhs = 0.0;
    const auto diff = monte_carlo(kEpisodes, [&](int k) {
      const auto rec = run_episode(mdp, agent, Regime::Reward, k, 77);
      double var = 0.0;
      for (std::size_t h = 0; h < rec.steps.size(); ++h) {
        const auto& st = rec.steps[h];
        var += variance_of(mdp.kernel(static_cast<int>(h), st.state).row(st.action).transpose(), V.row(static_cast<int>(h) + 1));
      }
      const double dev = rec.ret - V(0, rec.steps[0].state);
      lhs += var;
      rhs += dev * dev;
      return var - dev * dev;
    });
    const bool pass = diff.mean <= 3.0 * diff.se;
    ok = ok && pass;
    detail += fmt("reward: E[sum Var]=%.4f E[dev^2]=%.4f diff=%.4f (3se %.4f); ", lhs / kEpisodes, rhs / kEpisodes,
                  diff.mean, 3.0 * diff.se);
  }

  {
    const auto mdp = make_random_mdp(3, 3, 4, 22, false);
    const auto plan = plan_optimal(mdp, Regime::Transition);
    const auto& V = plan.values;
    const auto& lists = std::get<ListPolicy>(plan.policy);
    const int H = mdp.horizon(), S = mdp.num_states();
    Eigen::MatrixXd step_var = Eigen::MatrixXd::Zero(H, S);
    for (int h = 0; h < H; ++h) {
      for (int s = 0; s < S; ++s) {
        double m = 0.0, m2 = 0.0;
        for (const auto& atom : mdp.transitions(h, s).enumerate(kDefaultSupportCap)) {
          const std::span<const int> obs(atom.outcome.data(), static_cast<std::size_t>(atom.outcome.size()));
          const int a = lists.lists[static_cast<std::size_t>(h)][static_cast<std::size_t>(s)].top_action(obs);
          const double val = mdp.mean_rewards(h)(s, a) + V(h + 1, atom.outcome(a));
          m += atom.weight * val;
          m2 += atom.weight * val * val;
        }
        step_var(h, s) = std::max(0.0, m2 - m * m);
      }
    }
    OptimalLearner agent(mdp, Regime::Transition);
    double lhs = 0.0, rhs = 0.0;
    const auto diff = monte_carlo(kEpisodes, [&](int k) {
      const auto rec = run_episode(mdp, agent, Regime::Transition, k, 78);
      double var = 0.0, expected_return = 0.0;
      for (std::size_t h = 0; h < rec.steps.size(); ++h) {
        const auto& st = rec.steps[h];
        var += step_var(static_cast<Eigen::Index>(h), st.state);
        expected_return += mdp.mean_rewards(static_cast<int>(h))(st.state, st.action);
      }
      const double dev = expected_return - V(0, rec.steps[0].state);
      lhs += var;
      rhs += dev * dev;
      return var - dev * dev;
    });
    const bool pass = diff.mean <= 3.0 * diff.se;
    ok = ok && pass;
    detail += fmt("transition: E[sum Var]=%.4f E[dev^2]=%.4f diff=%.4f (3se %.4f)", lhs / kEpisodes, rhs / kEpisodes,
                  diff.mean, 3.0 * diff.se);
  }
  return {ok, detail};
}

Outcome determinism() {
  auto configs_for = [](const fs::path& dir) {
    std::vector<ExperimentConfig> out;
    for (auto [algo, regime] : {std::pair{Algorithm::MvpRl, Regime::Reward}, std::pair{Algorithm::MvpTl, Regime::Transition},
                                std::pair{Algorithm::MvpVanilla, Regime::None}}) {
      auto c = desk_config(to_string(algo), algo, regime, dir);
      c.K = 500;
      c.seeds = {0, 1, 2, 3};
      out.push_back(c);
    }
    return out;
  };
  const auto a = scratch("sweep_a");
  const auto b = scratch("sweep_b");
  sweep(configs_for(a), 1, a);
  sweep(configs_for(b), 4, b);
  int files = 0, mismatches = 0;
  for (const auto& entry : fs::directory_iterator(a)) {
    ++files;
    if (slurp(entry.path()) != slurp(b / entry.path().filename())) ++mismatches;
  }
  const auto start = std::chrono::steady_clock::now();
  bool selftest_ok = true;
  for (const auto& r : run_selftest()) selftest_ok = selftest_ok && r.passed;
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {files == 13 && mismatches == 0 && selftest_ok && secs < 60.0,
          fmt("%.0f files compared, %.0f differ; ", files, mismatches) + (selftest_ok ? "selftest ok" : "selftest FAILED") +
              fmt(" in %.3f s", secs)};
}

}  // namespace

int main() {
  struct Criterion {
    int number;
    double budget_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, 1.0, fig1_separation},     {2, 1.0, chain_separation},        {3, 30.0, oracle_equivalence},
      {4, 5.0, mu_correctness},      {5, 5.0, bonus_monotonicity},      {6, 600.0, regret_sublinearity},
      {7, 120.0, empirical_optimism}, {8, 60.0, ltv_checks},             {9, 600.0, determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool pass = out.passed && secs < c.budget_s;
    failed += pass ? 0 : 1;
    std::printf("%s criterion %d: %s [%.2f s, budget %.0f s]\n", pass ? "PASS" : "FAIL", c.number, out.detail.c_str(),
                secs, c.budget_s);
    std::fflush(stdout);
    if (c.number == 6) scaled_bonus_diagnostic();
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
