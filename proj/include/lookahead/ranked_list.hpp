#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace lookahead {

struct RankedEntry {
  int state = 0;
  int action = 0;
  double score = 0.0;
};

/// Ordering of all (next-state, action) pairs by non-increasing score, ties
/// broken by (state, action) ascending. A list policy plays the action of the
/// highest-ranked pair that actually realized.
class RankedList {
 public:
  RankedList() = default;
  RankedList(std::vector<RankedEntry> entries, int num_states, int num_actions);

  const std::vector<RankedEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  const RankedEntry& operator[](std::size_t i) const { return entries_[i]; }

  /// 0-based position of (state, action) in the list.
  int rank(int state, int action) const { return rank_(state, action); }

  /// Action of the highest-ranked realized pair (s'(a), a).
  int top_action(std::span<const int> next_states) const;

 private:
  std::vector<RankedEntry> entries_;
  Eigen::MatrixXi rank_;
};

/// scores(s', a) for every pair; returns the induced list.
RankedList build_ranked_list(const Eigen::MatrixXd& scores);

/// Probability that list element i is the highest-ranked realized pair when
/// next states are drawn independently per action. `marginals` is A x S with
/// row a = P(. | a). Throws ContractError when a row is not a distribution
/// (negative entry or sum off by more than 1e-9).
Eigen::VectorXd mu_independent(const RankedList& list, const Eigen::MatrixXd& marginals);

}  // namespace lookahead
