#include "lookahead/extended_mdp.hpp"

#include <limits>
#include <map>
#include <string>

#include "lookahead/errors.hpp"

namespace lookahead {

namespace {

// Joint reward law at (h, s) as (weight, vector) pairs. Products are expanded
// here rather than through JointDistribution::enumerate so the oracle does not
// share that code path with the planners.
std::vector<std::pair<double, Eigen::VectorXd>> reward_law(const RewardDistribution& d) {
  std::vector<std::pair<double, Eigen::VectorXd>> out;
  if (!d.independent()) {
    for (const auto& atom : d.atoms()) out.emplace_back(atom.weight, atom.outcome);
    return out;
  }
  const auto& ms = d.marginals();
  const std::size_t A = ms.size();
  std::size_t total = 1;
  for (const auto& m : ms) total *= m.values.size();
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t rest = code;
    Eigen::VectorXd v(static_cast<Eigen::Index>(A));
    double w = 1.0;
    for (std::size_t a = 0; a < A; ++a) {
      const auto i = rest % ms[a].values.size();
      rest /= ms[a].values.size();
      v(static_cast<Eigen::Index>(a)) = ms[a].values[i];
      w *= ms[a].probs[i];
    }
    out.emplace_back(w, std::move(v));
  }
  return out;
}

std::size_t int_pow(std::size_t base, std::size_t exp, std::size_t cap) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (r > cap / base) return std::numeric_limits<std::size_t>::max();
    r *= base;
  }
  return r;
}

ValueTable read_odd_layers(const std::vector<Eigen::VectorXd>& layers, int H, int S, Regime regime) {
  ValueTable table{regime, Eigen::MatrixXd::Zero(H + 1, S)};
  for (int h = 0; h < H; ++h) table.values.row(h) = layers[static_cast<std::size_t>(2 * h)].head(S).transpose();
  return table;
}

}  // namespace

std::vector<Eigen::VectorXd> backward_induction(const ExplicitMdp& mdp) {
  const auto T = mdp.layer_sizes.size() - 1;
  std::vector<Eigen::VectorXd> V(T + 1);
  V[T] = Eigen::VectorXd::Zero(mdp.layer_sizes[T]);
  for (std::size_t t = T; t-- > 0;) {
    V[t] = Eigen::VectorXd::Zero(mdp.layer_sizes[t]);
    for (int x = 0; x < mdp.layer_sizes[t]; ++x) {
      double best = -std::numeric_limits<double>::infinity();
      for (int a = 0; a < mdp.num_actions; ++a) {
        double q = 0.0;
        for (const auto& o : mdp.transitions[t][static_cast<std::size_t>(x * mdp.num_actions + a)]) {
          q += o.prob * (o.reward + V[t + 1](o.next));
        }
        best = std::max(best, q);
      }
      V[t](x) = best;
    }
  }
  return V;
}

ExplicitMdp extended_reward_mdp(const TabularLookaheadMdp& mdp, std::size_t cap) {
  const int S = mdp.num_states();
  const int A = mdp.num_actions();
  const int H = mdp.horizon();
  ExplicitMdp ext;
  ext.num_actions = A;
  ext.layer_sizes.assign(static_cast<std::size_t>(2 * H + 1), S);
  ext.transitions.resize(static_cast<std::size_t>(2 * H));

  for (int h = 0; h < H; ++h) {
    std::vector<std::vector<std::pair<double, Eigen::VectorXd>>> laws;
    std::vector<int> offset;
    int count = 0;
    for (int s = 0; s < S; ++s) {
      offset.push_back(count);
      laws.push_back(reward_law(mdp.rewards(h, s)));
      count += static_cast<int>(laws.back().size());
      if (static_cast<std::size_t>(count) > cap) {
        throw CapacityError("extended reward MDP exceeds " + std::to_string(cap) + " states at h=" +
                            std::to_string(h));
      }
    }
    const auto odd = static_cast<std::size_t>(2 * h);
    const auto even = odd + 1;
    ext.layer_sizes[even] = count;

    // (s, 0): observe R regardless of the action.
    auto& from_plain = ext.transitions[odd];
    from_plain.resize(static_cast<std::size_t>(S * A));
    for (int s = 0; s < S; ++s) {
      std::vector<ExplicitMdp::Outcome> reveal;
      for (std::size_t j = 0; j < laws[static_cast<std::size_t>(s)].size(); ++j) {
        reveal.push_back({offset[static_cast<std::size_t>(s)] + static_cast<int>(j),
                          laws[static_cast<std::size_t>(s)][j].first, 0.0});
      }
      for (int a = 0; a < A; ++a) from_plain[static_cast<std::size_t>(s * A + a)] = reveal;
    }

    // (s, R): pay R(a), move to (s', 0).
    auto& from_obs = ext.transitions[even];
    from_obs.resize(static_cast<std::size_t>(count * A));
    for (int s = 0; s < S; ++s) {
      const auto& law = laws[static_cast<std::size_t>(s)];
      for (std::size_t j = 0; j < law.size(); ++j) {
        const int x = offset[static_cast<std::size_t>(s)] + static_cast<int>(j);
        for (int a = 0; a < A; ++a) {
          auto& outs = from_obs[static_cast<std::size_t>(x * A + a)];
          for (int sp = 0; sp < S; ++sp) {
            const double p = mdp.kernel(h, s)(a, sp);
            if (p > 0.0) outs.push_back({sp, p, law[j].second(a)});
          }
        }
      }
    }
  }
  return ext;
}

ExplicitMdp extended_transition_mdp(const TabularLookaheadMdp& mdp, std::size_t cap) {
  const int S = mdp.num_states();
  const int A = mdp.num_actions();
  const int H = mdp.horizon();
  const std::size_t vectors = int_pow(static_cast<std::size_t>(S), static_cast<std::size_t>(A), cap);
  if (vectors == std::numeric_limits<std::size_t>::max() || vectors * static_cast<std::size_t>(S) > cap) {
    throw CapacityError("extended transition MDP exceeds " + std::to_string(cap) + " states");
  }
  const int V = static_cast<int>(vectors);

  ExplicitMdp ext;
  ext.num_actions = A;
  ext.layer_sizes.assign(static_cast<std::size_t>(2 * H + 1), S);
  ext.transitions.resize(static_cast<std::size_t>(2 * H));

  auto decode = [&](int code) {
    Eigen::VectorXi v(A);
    for (int a = 0; a < A; ++a) {
      v(a) = code % S;
      code /= S;
    }
    return v;
  };

  for (int h = 0; h < H; ++h) {
    const auto odd = static_cast<std::size_t>(2 * h);
    const auto even = odd + 1;
    ext.layer_sizes[even] = S * V;
    auto& from_plain = ext.transitions[odd];
    from_plain.resize(static_cast<std::size_t>(S * A));
    auto& from_obs = ext.transitions[even];
    from_obs.resize(static_cast<std::size_t>(S * V * A));

    for (int s = 0; s < S; ++s) {
      const auto& law = mdp.transitions(h, s);
      std::map<std::vector<int>, double> joint;
      if (!law.independent()) {
        for (const auto& atom : law.atoms()) {
          joint[std::vector<int>(atom.outcome.data(), atom.outcome.data() + A)] += atom.weight;
        }
      }
      std::vector<ExplicitMdp::Outcome> reveal;
      for (int code = 0; code < V; ++code) {
        const Eigen::VectorXi sp = decode(code);
        double p = 1.0;
        if (law.independent()) {
          for (int a = 0; a < A; ++a) p *= mdp.kernel(h, s)(a, sp(a));
        } else {
          const auto it = joint.find(std::vector<int>(sp.data(), sp.data() + A));
          p = it == joint.end() ? 0.0 : it->second;
        }
        const int x = s * V + code;
        if (p > 0.0) reveal.push_back({x, p, 0.0});
        for (int a = 0; a < A; ++a) {
          from_obs[static_cast<std::size_t>(x * A + a)] = {{sp(a), 1.0, mdp.mean_rewards(h)(s, a)}};
        }
      }
      for (int a = 0; a < A; ++a) from_plain[static_cast<std::size_t>(s * A + a)] = reveal;
    }
  }
  return ext;
}

ValueTable oracle_extended_reward(const TabularLookaheadMdp& mdp, std::size_t cap) {
  return read_odd_layers(backward_induction(extended_reward_mdp(mdp, cap)), mdp.horizon(),
                         mdp.num_states(), Regime::Reward);
}

ValueTable oracle_extended_transition(const TabularLookaheadMdp& mdp, std::size_t cap) {
  return read_odd_layers(backward_induction(extended_transition_mdp(mdp, cap)), mdp.horizon(),
                         mdp.num_states(), Regime::Transition);
}

}  // namespace lookahead
