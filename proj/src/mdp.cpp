#include "lookahead/mdp.hpp"

#include <string>

#include "lookahead/errors.hpp"

namespace lookahead {

std::string to_string(Regime regime) {
  switch (regime) {
    case Regime::None: return "none";
    case Regime::Reward: return "reward";
    case Regime::Transition: return "transition";
  }
  return "none";
}

Regime regime_from_string(const std::string& name) {
  if (name == "none") return Regime::None;
  if (name == "reward" || name == "reward-lookahead") return Regime::Reward;
  if (name == "transition" || name == "transition-lookahead") return Regime::Transition;
  throw InputError("unknown regime '" + name + "'");
}

TabularLookaheadMdp::TabularLookaheadMdp(int num_states, int num_actions, int horizon,
                                         std::vector<RewardDistribution> rewards,
                                         std::vector<StateDistribution> transitions,
                                         std::vector<int> initial_states)
    : S_(num_states),
      A_(num_actions),
      H_(horizon),
      rewards_(std::move(rewards)),
      transitions_(std::move(transitions)),
      initial_states_(std::move(initial_states)) {
  if (S_ < 1 || A_ < 1 || H_ < 1) throw ContractError("mdp: S, A, H must be positive");
  const auto cells = static_cast<std::size_t>(S_) * static_cast<std::size_t>(H_);
  if (rewards_.size() != cells || transitions_.size() != cells) {
    throw ContractError("mdp: reward and transition models need H*S entries");
  }
  if (initial_states_.empty()) throw ContractError("mdp: empty initial-state schedule");
  for (int s : initial_states_) {
    if (s < 0 || s >= S_) throw ContractError("mdp: initial state out of range");
  }

  mean_rewards_.assign(static_cast<std::size_t>(H_), Eigen::MatrixXd::Zero(S_, A_));
  kernels_.assign(cells, Eigen::MatrixXd::Zero(A_, S_));
  for (int h = 0; h < H_; ++h) {
    for (int s = 0; s < S_; ++s) {
      const auto where = " at (h=" + std::to_string(h) + ", s=" + std::to_string(s) + ")";
      const auto& R = this->rewards(h, s);
      const auto& P = this->transitions(h, s);
      if (R.arity() != A_ || P.arity() != A_) throw ContractError("mdp: arity mismatch" + where);
      for (int a = 0; a < A_; ++a) {
        const auto rm = R.marginal(a);
        double mean = 0.0;
        for (std::size_t i = 0; i < rm.values.size(); ++i) {
          if (!(rm.values[i] >= 0.0 && rm.values[i] <= 1.0)) {
            throw ContractError("mdp: reward outside [0,1]" + where);
          }
          mean += rm.probs[i] * rm.values[i];
        }
        mean_rewards_[static_cast<std::size_t>(h)](s, a) = mean;

        const auto pm = P.marginal(a);
        for (std::size_t i = 0; i < pm.values.size(); ++i) {
          if (pm.values[i] < 0 || pm.values[i] >= S_) {
            throw ContractError("mdp: next state outside {0..S-1}" + where);
          }
          kernels_[index(h, s)](a, pm.values[i]) += pm.probs[i];
        }
      }
    }
  }
}

int TabularLookaheadMdp::initial_state(std::int64_t k) const {
  const auto n = static_cast<std::int64_t>(initial_states_.size());
  const auto i = ((k - 1) % n + n) % n;
  return initial_states_[static_cast<std::size_t>(i)];
}

}  // namespace lookahead
