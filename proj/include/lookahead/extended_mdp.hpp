#pragma once

#include <vector>

#include <Eigen/Dense>

#include "lookahead/mdp.hpp"
#include "lookahead/planning.hpp"

namespace lookahead {

/// Plain finite-horizon MDP with an explicit, possibly different, state set
/// per layer. transitions[t][x * A + a] lists the outcomes of playing a in
/// state x of layer t; each outcome lands in layer t + 1.
struct ExplicitMdp {
  struct Outcome {
    int next = 0;
    double prob = 0.0;
    double reward = 0.0;
  };

  int num_actions = 0;
  std::vector<int> layer_sizes;  // T + 1 layers; the last one is terminal
  std::vector<std::vector<std::vector<Outcome>>> transitions;
};

/// Optimal values per layer by the standard Bellman recursion.
std::vector<Eigen::VectorXd> backward_induction(const ExplicitMdp& mdp);

inline constexpr std::size_t kExtendedStateCap = 100000;

/// Horizon-2H MDP whose odd layers hold (s, 0) and even layers (s, R):
/// observation layers are entered regardless of the action, and the reward
/// R(a) is paid when leaving (s, R) with action a.
ExplicitMdp extended_reward_mdp(const TabularLookaheadMdp& mdp, std::size_t cap = kExtendedStateCap);

/// Horizon-2H MDP over S^{A+1}: (s, s'_0) moves to (s, s') with the joint
/// probability of s', and (s, s') moves deterministically to (s'(a), s'_0)
/// paying r_h(s, a).
ExplicitMdp extended_transition_mdp(const TabularLookaheadMdp& mdp, std::size_t cap = kExtendedStateCap);

/// Lookahead values read off the odd layers of the extended MDPs.
ValueTable oracle_extended_reward(const TabularLookaheadMdp& mdp, std::size_t cap = kExtendedStateCap);
ValueTable oracle_extended_transition(const TabularLookaheadMdp& mdp, std::size_t cap = kExtendedStateCap);

}  // namespace lookahead
