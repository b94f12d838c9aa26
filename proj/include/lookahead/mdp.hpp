#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lookahead/distribution.hpp"

namespace lookahead {

/// What the agent sees before acting at each step.
enum class Regime { None, Reward, Transition };

std::string to_string(Regime regime);
Regime regime_from_string(const std::string& name);

/// Episodic tabular environment whose per-(h, s) reward and next-state laws
/// are joint over actions. Steps are 0-based in code: h = 0..H-1.
///
/// Immutable after construction; safe to share across threads.
class TabularLookaheadMdp {
 public:
  TabularLookaheadMdp(int num_states, int num_actions, int horizon,
                      std::vector<RewardDistribution> rewards,
                      std::vector<StateDistribution> transitions,
                      std::vector<int> initial_states = {0});

  int num_states() const { return S_; }
  int num_actions() const { return A_; }
  int horizon() const { return H_; }

  const RewardDistribution& rewards(int h, int s) const { return rewards_[index(h, s)]; }
  const StateDistribution& transitions(int h, int s) const { return transitions_[index(h, s)]; }

  /// r_h(s, a) as an S x A matrix.
  const Eigen::MatrixXd& mean_rewards(int h) const { return mean_rewards_[static_cast<std::size_t>(h)]; }
  /// P_h(. | s, a) as an A x S matrix (row a is the marginal of action a).
  const Eigen::MatrixXd& kernel(int h, int s) const { return kernels_[index(h, s)]; }

  const std::vector<int>& initial_states() const { return initial_states_; }
  /// s_1 for 1-based episode k; cycles through the initial-state list.
  int initial_state(std::int64_t k) const;

 private:
  std::size_t index(int h, int s) const {
    return static_cast<std::size_t>(h) * static_cast<std::size_t>(S_) + static_cast<std::size_t>(s);
  }

  int S_;
  int A_;
  int H_;
  std::vector<RewardDistribution> rewards_;
  std::vector<StateDistribution> transitions_;
  std::vector<int> initial_states_;
  std::vector<Eigen::MatrixXd> mean_rewards_;
  std::vector<Eigen::MatrixXd> kernels_;
};

}  // namespace lookahead
