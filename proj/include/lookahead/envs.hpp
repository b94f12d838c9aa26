#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lookahead/mdp.hpp"

namespace lookahead {

/// Two states: 0 is the start, 1 is absorbing. Action 0 stays at the start
/// with reward 0; every other action pays an independent Ber(1/((A-1)H))
/// reward and moves to the absorbing state.
TabularLookaheadMdp make_fig1_prophet(int A, int H);

/// Chain of N = H/2 states plus an absorbing terminal (index N). Action 0
/// stays; other actions independently move one state forward w.p. 1/A and
/// reset to the head otherwise. Every action at the last chain state pays 1
/// and moves to the terminal.
TabularLookaheadMdp make_transition_chain(int A, int H);

/// Prophet problem with n stages as a chain: H = n, S = n + 1, A = 2.
/// Action 0 advances with reward 0, action 1 collects the stage reward and
/// moves to the terminal state n.
TabularLookaheadMdp make_prophet_chain(int n, const std::vector<RewardDistribution::Marginal>& stages);

/// Bernoulli rewards with uniform means; transitions are products of
/// Dirichlet(1) marginals, or small correlated joints when !independent.
TabularLookaheadMdp make_random_mdp(int S, int A, int H, std::uint64_t seed, bool independent = true);

struct EnvSpecParams {
  std::string family;  // fig1-prophet | transition-chain | prophet-chain | random
  int S = 3;
  int A = 2;
  int H = 2;
  int n = 2;           // prophet-chain stages
  double p = 0.5;      // prophet-chain Bernoulli stage probability
  std::uint64_t seed = 0;
  bool independent = true;
};

/// Throws InputError for an unknown family or out-of-range parameters.
TabularLookaheadMdp make_env(const EnvSpecParams& params);

}  // namespace lookahead
