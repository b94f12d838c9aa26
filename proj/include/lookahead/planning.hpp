#pragma once

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "lookahead/mdp.hpp"
#include "lookahead/ranked_list.hpp"

namespace lookahead {

inline constexpr std::size_t kDefaultSupportCap = 4096;

/// values(h, s) for h = 0..H; the last row is identically zero.
struct ValueTable {
  Regime regime = Regime::None;
  Eigen::MatrixXd values;

  int horizon() const { return static_cast<int>(values.rows()) - 1; }
  double operator()(int h, int s) const { return values(h, s); }
  Eigen::VectorXd row(int h) const { return values.row(h).transpose(); }
};

/// State-only deterministic policy: action(h, s).
struct MarkovPolicy {
  Eigen::MatrixXi action;
  int act(int h, int s) const { return action(h, s); }
};

/// Reward-lookahead policy of threshold form: given observed rewards R at
/// (h, s), play argmax_a R(a) + continuation[h](s, a), lowest index on ties.
struct ThresholdPolicy {
  std::vector<Eigen::MatrixXd> continuation;
  int act(int h, int s, std::span<const double> rewards) const;
};

/// Transition-lookahead policy of list form: lists[h][s] ranks (s', a) pairs.
struct ListPolicy {
  std::vector<std::vector<RankedList>> lists;
  int act(int h, int s, std::span<const int> next_states) const {
    return lists[static_cast<std::size_t>(h)][static_cast<std::size_t>(s)].top_action(next_states);
  }
};

using Policy = std::variant<MarkovPolicy, ThresholdPolicy, ListPolicy>;

Regime regime_of(const Policy& policy);

struct PlanResult {
  ValueTable values;
  Policy policy;
};

struct PlannerMethod {
  enum class Kind { Exact, ExactList, Sample };
  Kind kind = Kind::Exact;
  int samples = 0;
  std::uint64_t seed = 0;
  std::size_t support_cap = kDefaultSupportCap;

  static PlannerMethod exact(std::size_t cap = kDefaultSupportCap) { return {Kind::Exact, 0, 0, cap}; }
  static PlannerMethod exact_list() { return {Kind::ExactList, 0, 0, kDefaultSupportCap}; }
  static PlannerMethod sample(int n, std::uint64_t seed) { return {Kind::Sample, n, seed, kDefaultSupportCap}; }
};

/// Standard backward induction on mean rewards; greedy Markov policy.
PlanResult plan_no_lookahead(const TabularLookaheadMdp& mdp);

/// V_h(s) = E_R[ max_a R(a) + P_h V_{h+1}(s, a) ]. Exact sums over joint
/// atoms; Sample averages a fixed set of n draws per (h, s).
PlanResult plan_reward_lookahead(const TabularLookaheadMdp& mdp,
                                 const PlannerMethod& method = PlannerMethod::exact());

/// V_h(s) = E_{s'}[ max_a r_h(s, a) + V_{h+1}(s'(a)) ]. Exact enumerates
/// the next-state joint, ExactList uses the ranked-list identity (requires
/// independent per-action transitions), Sample averages n draws per (h, s).
PlanResult plan_transition_lookahead(const TabularLookaheadMdp& mdp,
                                     const PlannerMethod& method = PlannerMethod::exact());

/// Exact value of a fixed policy, backward induction with the policy's
/// action in place of the max. List policies on independent transitions are
/// evaluated through mu_independent; everything else enumerates atoms.
ValueTable evaluate_lookahead_policy(const TabularLookaheadMdp& mdp, const Policy& policy,
                                     std::size_t support_cap = kDefaultSupportCap);

}  // namespace lookahead
