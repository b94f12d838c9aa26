#include "lookahead/planning.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "lookahead/errors.hpp"

namespace lookahead {

namespace {

template <typename Scalar>
std::vector<typename JointDistribution<Scalar>::Atom> atoms_or_throw(
    const JointDistribution<Scalar>& d, std::size_t cap, int h, int s) {
  try {
    return d.enumerate(cap);
  } catch (const CapacityError& e) {
    throw CapacityError(std::string(e.what()) + " at (h=" + std::to_string(h) +
                        ", s=" + std::to_string(s) + ")");
  }
}

template <typename Scalar>
std::vector<typename JointDistribution<Scalar>::Outcome> fixed_draws(
    const JointDistribution<Scalar>& d, const PlannerMethod& method, int h, int s) {
  if (method.samples < 1) throw ContractError("sample planner needs at least one sample");
  RngStream rng(method.seed, {0, static_cast<std::uint32_t>(h), Purpose::Planner,
                              static_cast<std::uint32_t>(s)});
  std::vector<typename JointDistribution<Scalar>::Outcome> draws;
  draws.reserve(static_cast<std::size_t>(method.samples));
  for (int i = 0; i < method.samples; ++i) draws.push_back(d.sample(rng));
  return draws;
}

double max_shifted(const Eigen::VectorXd& rewards, const Eigen::VectorXd& continuation) {
  return (rewards + continuation).maxCoeff();
}

double max_over_next(const Eigen::VectorXd& immediate, const Eigen::VectorXi& next,
                     const Eigen::VectorXd& next_values) {
  double best = -std::numeric_limits<double>::infinity();
  for (Eigen::Index a = 0; a < next.size(); ++a) {
    best = std::max(best, immediate(a) + next_values(next(a)));
  }
  return best;
}

/// scores(s', a) = immediate(a) + next_values(s').
Eigen::MatrixXd pair_scores(const Eigen::VectorXd& immediate, const Eigen::VectorXd& next_values) {
  return next_values.replicate(1, immediate.size()) +
         immediate.transpose().replicate(next_values.size(), 1);
}

ValueTable empty_table(const TabularLookaheadMdp& mdp, Regime regime) {
  return {regime, Eigen::MatrixXd::Zero(mdp.horizon() + 1, mdp.num_states())};
}

}  // namespace

int ThresholdPolicy::act(int h, int s, std::span<const double> rewards) const {
  const auto& u = continuation[static_cast<std::size_t>(h)];
  if (static_cast<Eigen::Index>(rewards.size()) != u.cols()) {
    throw ContractError("threshold policy: reward arity mismatch");
  }
  int best = 0;
  double best_value = rewards[0] + u(s, 0);
  for (Eigen::Index a = 1; a < u.cols(); ++a) {
    const double v = rewards[static_cast<std::size_t>(a)] + u(s, a);
    if (v > best_value) {
      best_value = v;
      best = static_cast<int>(a);
    }
  }
  return best;
}

Regime regime_of(const Policy& policy) {
  if (std::holds_alternative<ThresholdPolicy>(policy)) return Regime::Reward;
  if (std::holds_alternative<ListPolicy>(policy)) return Regime::Transition;
  return Regime::None;
}

PlanResult plan_no_lookahead(const TabularLookaheadMdp& mdp) {
  const int H = mdp.horizon();
  const int S = mdp.num_states();
  ValueTable table = empty_table(mdp, Regime::None);
  MarkovPolicy policy{Eigen::MatrixXi::Zero(H, S)};
  for (int h = H - 1; h >= 0; --h) {
    const Eigen::VectorXd next = table.row(h + 1);
    for (int s = 0; s < S; ++s) {
      const Eigen::VectorXd q = mdp.mean_rewards(h).row(s).transpose() + mdp.kernel(h, s) * next;
      Eigen::Index best = 0;
      table.values(h, s) = q.maxCoeff(&best);
      policy.action(h, s) = static_cast<int>(best);
    }
  }
  return {std::move(table), std::move(policy)};
}

PlanResult plan_reward_lookahead(const TabularLookaheadMdp& mdp, const PlannerMethod& method) {
  if (method.kind == PlannerMethod::Kind::ExactList) {
    throw ContractError("plan_reward_lookahead: list method applies to transition lookahead only");
  }
  const int H = mdp.horizon();
  const int S = mdp.num_states();
  ValueTable table = empty_table(mdp, Regime::Reward);
  ThresholdPolicy policy;
  policy.continuation.assign(static_cast<std::size_t>(H), Eigen::MatrixXd::Zero(S, mdp.num_actions()));

  for (int h = H - 1; h >= 0; --h) {
    const Eigen::VectorXd next = table.row(h + 1);
    auto& u = policy.continuation[static_cast<std::size_t>(h)];
    for (int s = 0; s < S; ++s) {
      const Eigen::VectorXd continuation = mdp.kernel(h, s) * next;
      u.row(s) = continuation.transpose();
      double value = 0.0;
      if (method.kind == PlannerMethod::Kind::Exact) {
        for (const auto& atom : atoms_or_throw(mdp.rewards(h, s), method.support_cap, h, s)) {
          value += atom.weight * max_shifted(atom.outcome, continuation);
        }
      } else {
        const auto draws = fixed_draws(mdp.rewards(h, s), method, h, s);
        for (const auto& R : draws) value += max_shifted(R, continuation);
        value /= static_cast<double>(draws.size());
      }
      table.values(h, s) = value;
    }
  }
  return {std::move(table), std::move(policy)};
}

PlanResult plan_transition_lookahead(const TabularLookaheadMdp& mdp, const PlannerMethod& method) {
  const int H = mdp.horizon();
  const int S = mdp.num_states();
  ValueTable table = empty_table(mdp, Regime::Transition);
  ListPolicy policy;
  policy.lists.assign(static_cast<std::size_t>(H), std::vector<RankedList>(static_cast<std::size_t>(S)));

  for (int h = H - 1; h >= 0; --h) {
    const Eigen::VectorXd next = table.row(h + 1);
    for (int s = 0; s < S; ++s) {
      const Eigen::VectorXd immediate = mdp.mean_rewards(h).row(s).transpose();
      RankedList list = build_ranked_list(pair_scores(immediate, next));
      const auto& P = mdp.transitions(h, s);
      double value = 0.0;
      switch (method.kind) {
        case PlannerMethod::Kind::ExactList: {
          if (!P.independent()) {
            throw ContractError("plan_transition_lookahead: list method needs independent transitions at (h=" +
                                std::to_string(h) + ", s=" + std::to_string(s) + ")");
          }
          const Eigen::VectorXd mu = mu_independent(list, mdp.kernel(h, s));
          for (std::size_t i = 0; i < list.size(); ++i) value += mu(static_cast<Eigen::Index>(i)) * list[i].score;
          break;
        }
        case PlannerMethod::Kind::Exact:
          for (const auto& atom : atoms_or_throw(P, method.support_cap, h, s)) {
            value += atom.weight * max_over_next(immediate, atom.outcome, next);
          }
          break;
        case PlannerMethod::Kind::Sample: {
          const auto draws = fixed_draws(P, method, h, s);
          for (const auto& sp : draws) value += max_over_next(immediate, sp, next);
          value /= static_cast<double>(draws.size());
          break;
        }
      }
      table.values(h, s) = value;
      policy.lists[static_cast<std::size_t>(h)][static_cast<std::size_t>(s)] = std::move(list);
    }
  }
  return {std::move(table), std::move(policy)};
}

ValueTable evaluate_lookahead_policy(const TabularLookaheadMdp& mdp, const Policy& policy,
                                     std::size_t support_cap) {
  const int H = mdp.horizon();
  const int S = mdp.num_states();
  ValueTable table = empty_table(mdp, regime_of(policy));

  for (int h = H - 1; h >= 0; --h) {
    const Eigen::VectorXd next = table.row(h + 1);
    for (int s = 0; s < S; ++s) {
      const Eigen::MatrixXd& P = mdp.kernel(h, s);
      const auto r = mdp.mean_rewards(h).row(s);
      double value = 0.0;
      if (const auto* markov = std::get_if<MarkovPolicy>(&policy)) {
        const int a = markov->act(h, s);
        value = r(a) + P.row(a).dot(next);
      } else if (const auto* threshold = std::get_if<ThresholdPolicy>(&policy)) {
        for (const auto& atom : atoms_or_throw(mdp.rewards(h, s), support_cap, h, s)) {
          const std::span<const double> obs(atom.outcome.data(), static_cast<std::size_t>(atom.outcome.size()));
          const int a = threshold->act(h, s, obs);
          value += atom.weight * (atom.outcome(a) + P.row(a).dot(next));
        }
      } else {
        const auto& lists = std::get<ListPolicy>(policy);
        const auto& list = lists.lists[static_cast<std::size_t>(h)][static_cast<std::size_t>(s)];
        const auto& T = mdp.transitions(h, s);
        if (T.independent()) {
          const Eigen::VectorXd mu = mu_independent(list, P);
          for (std::size_t i = 0; i < list.size(); ++i) {
            const auto& e = list[i];
            value += mu(static_cast<Eigen::Index>(i)) * (r(e.action) + next(e.state));
          }
        } else {
          for (const auto& atom : atoms_or_throw(T, support_cap, h, s)) {
            const std::span<const int> obs(atom.outcome.data(), static_cast<std::size_t>(atom.outcome.size()));
            const int a = list.top_action(obs);
            value += atom.weight * (r(a) + next(atom.outcome(a)));
          }
        }
      }
      table.values(h, s) = value;
    }
  }
  return table;
}

}  // namespace lookahead
