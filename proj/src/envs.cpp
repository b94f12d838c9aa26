#include "lookahead/envs.hpp"

#include <algorithm>
#include <cmath>

#include "lookahead/errors.hpp"
#include "lookahead/rng.hpp"

namespace lookahead {

namespace {

using RMarginal = RewardDistribution::Marginal;
using SMarginal = StateDistribution::Marginal;

RMarginal constant_reward(double r) { return {{r}, {1.0}}; }
RMarginal bernoulli(double p) { return {{0.0, 1.0}, {1.0 - p, p}}; }
SMarginal to_state(int s) { return {{s}, {1.0}}; }

std::vector<double> dirichlet_ones(int n, RngStream& rng) {
  std::vector<double> w(static_cast<std::size_t>(n));
  double total = 0.0;
  for (auto& x : w) {
    x = -std::log1p(-rng.uniform());
    total += x;
  }
  for (auto& x : w) x /= total;
  return w;
}

}  // namespace

TabularLookaheadMdp make_fig1_prophet(int A, int H) {
  if (A < 2) throw ContractError("make_fig1_prophet: A must be at least 2");
  if (H < 1) throw ContractError("make_fig1_prophet: H must be at least 1");
  const double p = 1.0 / (static_cast<double>(A - 1) * H);
  std::vector<RMarginal> start_rewards{constant_reward(0.0)};
  std::vector<SMarginal> start_moves{to_state(0)};
  for (int a = 1; a < A; ++a) {
    start_rewards.push_back(bernoulli(p));
    start_moves.push_back(to_state(1));
  }
  const auto start_r = RewardDistribution::product(start_rewards);
  const auto start_p = StateDistribution::product(start_moves);
  const auto sink_r = RewardDistribution::product(std::vector<RMarginal>(static_cast<std::size_t>(A), constant_reward(0.0)));
  const auto sink_p = StateDistribution::product(std::vector<SMarginal>(static_cast<std::size_t>(A), to_state(1)));

  std::vector<RewardDistribution> rewards;
  std::vector<StateDistribution> transitions;
  for (int h = 0; h < H; ++h) {
    rewards.push_back(start_r);
    rewards.push_back(sink_r);
    transitions.push_back(start_p);
    transitions.push_back(sink_p);
  }
  return {2, A, H, std::move(rewards), std::move(transitions), {0}};
}

TabularLookaheadMdp make_transition_chain(int A, int H) {
  if (A < 2) throw ContractError("make_transition_chain: A must be at least 2");
  if (H % 2 != 0) throw ContractError("make_transition_chain: H must be even");
  const int N = H / 2;
  if (N < 2) throw ContractError("make_transition_chain: chain length H/2 must be at least 2");
  const int S = N + 1;
  const int terminal = N;
  const double forward = 1.0 / A;

  const auto zero_r = RewardDistribution::product(std::vector<RMarginal>(static_cast<std::size_t>(A), constant_reward(0.0)));
  const auto goal_r = RewardDistribution::product(std::vector<RMarginal>(static_cast<std::size_t>(A), constant_reward(1.0)));
  const auto to_terminal = StateDistribution::product(std::vector<SMarginal>(static_cast<std::size_t>(A), to_state(terminal)));

  std::vector<StateDistribution> chain_moves;
  for (int s = 0; s + 1 < N; ++s) {
    std::vector<SMarginal> m{to_state(s)};
    for (int a = 1; a < A; ++a) m.push_back({{s + 1, 0}, {forward, 1.0 - forward}});
    chain_moves.push_back(StateDistribution::product(std::move(m)));
  }

  std::vector<RewardDistribution> rewards;
  std::vector<StateDistribution> transitions;
  for (int h = 0; h < H; ++h) {
    for (int s = 0; s < S; ++s) {
      if (s + 1 < N) {
        rewards.push_back(zero_r);
        transitions.push_back(chain_moves[static_cast<std::size_t>(s)]);
      } else if (s == N - 1) {
        rewards.push_back(goal_r);
        transitions.push_back(to_terminal);
      } else {
        rewards.push_back(zero_r);
        transitions.push_back(to_terminal);
      }
    }
  }
  return {S, A, H, std::move(rewards), std::move(transitions), {0}};
}

TabularLookaheadMdp make_prophet_chain(int n, const std::vector<RMarginal>& stages) {
  if (n < 1) throw ContractError("make_prophet_chain: n must be at least 1");
  if (static_cast<int>(stages.size()) != n) throw ContractError("make_prophet_chain: need one marginal per stage");
  const int S = n + 1;
  const auto zero_r = RewardDistribution::product({constant_reward(0.0), constant_reward(0.0)});
  const auto to_terminal = StateDistribution::product({to_state(n), to_state(n)});

  std::vector<RewardDistribution> rewards;
  std::vector<StateDistribution> transitions;
  for (int h = 0; h < n; ++h) {
    const auto stage = RewardDistribution::product({constant_reward(0.0), stages[static_cast<std::size_t>(h)]});
    for (int s = 0; s < S; ++s) {
      if (s < n) {
        rewards.push_back(stage);
        transitions.push_back(StateDistribution::product({to_state(s + 1), to_state(n)}));
      } else {
        rewards.push_back(zero_r);
        transitions.push_back(to_terminal);
      }
    }
  }
  return {S, 2, n, std::move(rewards), std::move(transitions), {0}};
}

TabularLookaheadMdp make_random_mdp(int S, int A, int H, std::uint64_t seed, bool independent) {
  if (S < 1 || S > 10 || A < 1 || A > 6 || H < 1 || H > 20) {
    throw ContractError("make_random_mdp: sizes outside S <= 10, A <= 6, H <= 20");
  }
  std::vector<RewardDistribution> rewards;
  std::vector<StateDistribution> transitions;
  for (int h = 0; h < H; ++h) {
    for (int s = 0; s < S; ++s) {
      RngStream rng(seed, {0, static_cast<std::uint32_t>(h), Purpose::Environment, static_cast<std::uint32_t>(s)});
      std::vector<RMarginal> rm;
      for (int a = 0; a < A; ++a) rm.push_back(bernoulli(rng.uniform()));
      rewards.push_back(RewardDistribution::product(std::move(rm)));

      if (independent) {
        std::vector<SMarginal> sm;
        for (int a = 0; a < A; ++a) {
          SMarginal m;
          m.probs = dirichlet_ones(S, rng);
          for (int x = 0; x < S; ++x) m.values.push_back(x);
          sm.push_back(std::move(m));
        }
        transitions.push_back(StateDistribution::product(std::move(sm)));
      } else {
        const int atoms = 2 + static_cast<int>(rng.uniform() * 3.0);
        const auto w = dirichlet_ones(atoms, rng);
        std::vector<StateDistribution::Atom> list;
        for (int i = 0; i < atoms; ++i) {
          Eigen::VectorXi outcome(A);
          for (int a = 0; a < A; ++a) outcome(a) = static_cast<int>(rng.uniform() * S);
          list.push_back({w[static_cast<std::size_t>(i)], outcome});
        }
        transitions.push_back(StateDistribution::joint(std::move(list)));
      }
    }
  }
  return {S, A, H, std::move(rewards), std::move(transitions), {0}};
}

TabularLookaheadMdp make_env(const EnvSpecParams& params) {
  try {
    if (params.family == "fig1-prophet") return make_fig1_prophet(params.A, params.H);
    if (params.family == "transition-chain") return make_transition_chain(params.A, params.H);
    if (params.family == "prophet-chain") {
      if (!(params.p >= 0.0 && params.p <= 1.0)) throw ContractError("prophet-chain: p must lie in [0, 1]");
      return make_prophet_chain(params.n, std::vector<RMarginal>(static_cast<std::size_t>(std::max(params.n, 0)),
                                                                 bernoulli(params.p)));
    }
    if (params.family == "random") {
      return make_random_mdp(params.S, params.A, params.H, params.seed, params.independent);
    }
  } catch (const ContractError& e) {
    throw InputError(e.what());
  }
  throw InputError("unknown environment family '" + params.family + "'");
}

}  // namespace lookahead
