#include "lookahead/ranked_list.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lookahead/errors.hpp"

namespace lookahead {

RankedList::RankedList(std::vector<RankedEntry> entries, int num_states, int num_actions)
    : entries_(std::move(entries)), rank_(Eigen::MatrixXi::Constant(num_states, num_actions, -1)) {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    rank_(entries_[i].state, entries_[i].action) = static_cast<int>(i);
  }
}

int RankedList::top_action(std::span<const int> next_states) const {
  if (static_cast<Eigen::Index>(next_states.size()) != rank_.cols()) {
    throw ContractError("ranked list: observation arity mismatch");
  }
  int best_action = 0;
  int best_rank = static_cast<int>(entries_.size());
  for (std::size_t a = 0; a < next_states.size(); ++a) {
    const int r = rank_(next_states[a], static_cast<Eigen::Index>(a));
    if (r < best_rank) {
      best_rank = r;
      best_action = static_cast<int>(a);
    }
  }
  return best_action;
}

RankedList build_ranked_list(const Eigen::MatrixXd& scores) {
  const auto S = static_cast<int>(scores.rows());
  const auto A = static_cast<int>(scores.cols());
  std::vector<RankedEntry> entries;
  entries.reserve(static_cast<std::size_t>(S * A));
  for (int s = 0; s < S; ++s) {
    for (int a = 0; a < A; ++a) entries.push_back({s, a, scores(s, a)});
  }
  std::sort(entries.begin(), entries.end(), [](const RankedEntry& x, const RankedEntry& y) {
    if (x.score != y.score) return x.score > y.score;
    if (x.state != y.state) return x.state < y.state;
    return x.action < y.action;
  });
  return RankedList(std::move(entries), S, A);
}

Eigen::VectorXd mu_independent(const RankedList& list, const Eigen::MatrixXd& marginals) {
  const auto A = marginals.rows();
  const auto n = static_cast<Eigen::Index>(list.size());
  if (n != A * marginals.cols()) throw ContractError("mu_independent: list does not cover S x A");
  for (Eigen::Index a = 0; a < A; ++a) {
    if (marginals.row(a).minCoeff() < 0.0 || std::abs(marginals.row(a).sum() - 1.0) > 1e-9) {
      throw ContractError("mu_independent: row " + std::to_string(a) + " is not a distribution");
    }
  }

  // excluded(a) = sum over earlier list entries of action a of P(s'_j | a).
  Eigen::VectorXd excluded = Eigen::VectorXd::Zero(A);
  Eigen::VectorXd mu(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& e = list[static_cast<std::size_t>(i)];
    double p = marginals(e.action, e.state);
    for (Eigen::Index a = 0; a < A; ++a) {
      if (a == e.action) continue;
      const double keep = 1.0 - excluded(a);
      p *= std::max(keep, 0.0);
    }
    mu(i) = p;
    excluded(e.action) += marginals(e.action, e.state);
  }
  return mu;
}

}  // namespace lookahead
