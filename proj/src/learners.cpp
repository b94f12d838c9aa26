#include "lookahead/learners.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lookahead/errors.hpp"

namespace lookahead {

using nlohmann::json;

namespace {

OptimisticValueTable blank_table(const EmpiricalStore& store, Regime regime) {
  const int H = store.horizon();
  OptimisticValueTable table;
  table.regime = regime;
  table.values = Eigen::MatrixXd::Zero(H + 1, store.num_states());
  table.scores.assign(static_cast<std::size_t>(H), Eigen::MatrixXd::Zero(store.num_states(), store.num_actions()));
  return table;
}

void check_k(std::int64_t k) {
  if (k < 1) throw ContractError("planning: episode index must be >= 1");
}

/// b^p(s, a) + P-hat V-bar(s, a) for every action at (h, s).
Eigen::VectorXd rl_continuation(const EmpiricalStore& store, int h, int s, const Eigen::VectorXd& next, double L,
                                const BonusConfig& config) {
  const int A = store.num_actions();
  const Eigen::MatrixXd P = store.empirical_kernel(h, s);
  Eigen::VectorXd u(A);
  for (int a = 0; a < A; ++a) {
    const double bp = rl_transition_bonus(variance(P.row(a), next), L, store.horizon(), store.visits(h, s, a),
                                          config.transition_scale);
    u(a) = bp + P.row(a).dot(next);
  }
  return u;
}

/// r-hat(s, a) + b^r(s, a) for every action at (h, s).
Eigen::VectorXd tl_immediate(const EmpiricalStore& store, int h, int s, double L, const BonusConfig& config) {
  const int A = store.num_actions();
  Eigen::VectorXd w(A);
  for (int a = 0; a < A; ++a) {
    w(a) = store.mean_reward(h, s, a) + tl_reward_bonus(L, store.visits(h, s, a), config.reward_scale);
  }
  return w;
}

struct Moments {
  double mean = 0.0;
  double var = 0.0;
};

/// Mean and variance of max_a w(a) + next(s'(a)) over the stored vectors at (h, s).
Moments tl_moments(const EmpiricalStore& store, int h, int s, const Eigen::VectorXd& w, const Eigen::VectorXd& next) {
  const auto& hist = store.next_state_histogram(h, s);
  const double n = store.visits(h, s);
  double first = 0.0;
  double second = 0.0;
  for (std::size_t j = 0; j < hist.outcomes.size(); ++j) {
    const auto& sp = hist.outcomes[j];
    double best = -std::numeric_limits<double>::infinity();
    for (Eigen::Index a = 0; a < w.size(); ++a) best = std::max(best, w(a) + next(sp(a)));
    first += hist.counts[j] * best;
    second += hist.counts[j] * best * best;
  }
  Moments m;
  m.mean = first / n;
  m.var = std::max(0.0, second / n - m.mean * m.mean);
  return m;
}

int argmax_lowest(const Eigen::Ref<const Eigen::VectorXd>& v) {
  int best = 0;
  for (Eigen::Index a = 1; a < v.size(); ++a) {
    if (v(a) > v(best)) best = static_cast<int>(a);
  }
  return best;
}

bool all_independent(const TabularLookaheadMdp& mdp) {
  for (int h = 0; h < mdp.horizon(); ++h) {
    for (int s = 0; s < mdp.num_states(); ++s) {
      if (!mdp.transitions(h, s).independent()) return false;
    }
  }
  return true;
}

}  // namespace

double resolve_log_term_rl(const BonusConfig& config, std::int64_t k, int S, int A, int H) {
  return config.log_term ? *config.log_term : log_term_rl(k, S, A, H, config.delta);
}

double resolve_log_term_tl(const BonusConfig& config, std::int64_t k, int S, int A, int H) {
  return config.log_term ? *config.log_term : log_term_tl(k, S, A, H, config.delta);
}

RlBonuses mvp_rl_bonuses(const EmpiricalStore& store, std::int64_t k, int h, int s, int a,
                         const Eigen::VectorXd& next_values, const BonusConfig& config) {
  check_k(k);
  const double L =
      resolve_log_term_rl(config, k, store.num_states(), store.num_actions(), store.horizon());
  const Eigen::MatrixXd P = store.empirical_kernel(h, s);
  RlBonuses b;
  b.reward = rl_reward_bonus(store.num_actions(), L, store.visits(h, s), config.reward_scale);
  b.transition = rl_transition_bonus(variance(P.row(a), next_values), L, store.horizon(), store.visits(h, s, a),
                                     config.transition_scale);
  return b;
}

TlBonuses mvp_tl_bonuses(const EmpiricalStore& store, std::int64_t k, int h, int s, int a,
                         const Eigen::VectorXd& next_values, const BonusConfig& config) {
  check_k(k);
  const double L =
      resolve_log_term_tl(config, k, store.num_states(), store.num_actions(), store.horizon());
  const Eigen::VectorXd w = tl_immediate(store, h, s, L, config);
  TlBonuses b;
  b.reward = tl_reward_bonus(L, store.visits(h, s, a), config.reward_scale);
  const double var = store.visits(h, s) == 0 ? 0.0 : tl_moments(store, h, s, w, next_values).var;
  b.transition = tl_transition_bonus(var, L, store.horizon(), store.visits(h, s), config.transition_scale);
  return b;
}

OptimisticValueTable mvp_rl_plan(const EmpiricalStore& store, std::int64_t k, const BonusConfig& config) {
  check_k(k);
  const int S = store.num_states();
  const int A = store.num_actions();
  const int H = store.horizon();
  const double L = resolve_log_term_rl(config, k, S, A, H);
  OptimisticValueTable table = blank_table(store, Regime::Reward);

  for (int h = H - 1; h >= 0; --h) {
    const Eigen::VectorXd next = table.values.row(h + 1).transpose();
    for (int s = 0; s < S; ++s) {
      const Eigen::VectorXd u = rl_continuation(store, h, s, next, L, config);
      table.scores[static_cast<std::size_t>(h)].row(s) = u.transpose();
      const int n = store.visits(h, s);
      if (n == 0) {
        table.values(h, s) = H;
        continue;
      }
      const auto& hist = store.reward_histogram(h, s);
      double total = 0.0;
      for (std::size_t j = 0; j < hist.outcomes.size(); ++j) {
        total += hist.counts[j] * (hist.outcomes[j] + u).maxCoeff();
      }
      const double br = rl_reward_bonus(A, L, n, config.reward_scale);
      table.values(h, s) = std::min(total / n + br, static_cast<double>(H));
    }
  }
  return table;
}

OptimisticValueTable mvp_tl_plan(const EmpiricalStore& store, std::int64_t k, const BonusConfig& config) {
  check_k(k);
  const int S = store.num_states();
  const int A = store.num_actions();
  const int H = store.horizon();
  const double L = resolve_log_term_tl(config, k, S, A, H);
  OptimisticValueTable table = blank_table(store, Regime::Transition);

  for (int h = H - 1; h >= 0; --h) {
    const Eigen::VectorXd next = table.values.row(h + 1).transpose();
    for (int s = 0; s < S; ++s) {
      const Eigen::VectorXd w = tl_immediate(store, h, s, L, config);
      table.scores[static_cast<std::size_t>(h)].row(s) = w.transpose();
      const int n = store.visits(h, s);
      if (n == 0) {
        table.values(h, s) = H;
        continue;
      }
      const Moments m = tl_moments(store, h, s, w, next);
      const double bp = tl_transition_bonus(m.var, L, H, n, config.transition_scale);
      table.values(h, s) = std::min(m.mean + bp, static_cast<double>(H));
    }
  }
  return table;
}

OptimisticValueTable vanilla_mvp_plan(const EmpiricalStore& store, std::int64_t k, const BonusConfig& config) {
  check_k(k);
  const int S = store.num_states();
  const int A = store.num_actions();
  const int H = store.horizon();
  const double L = resolve_log_term_rl(config, k, S, A, H);
  OptimisticValueTable table = blank_table(store, Regime::None);

  for (int h = H - 1; h >= 0; --h) {
    const Eigen::VectorXd next = table.values.row(h + 1).transpose();
    for (int s = 0; s < S; ++s) {
      Eigen::VectorXd q = rl_continuation(store, h, s, next, L, config);
      for (int a = 0; a < A; ++a) {
        q(a) += store.mean_reward(h, s, a) + tl_reward_bonus(L, store.reward_samples(h, s, a), config.reward_scale);
      }
      table.scores[static_cast<std::size_t>(h)].row(s) = q.transpose();
      table.values(h, s) = store.visits(h, s) == 0 ? H : std::min(q.maxCoeff(), static_cast<double>(H));
    }
  }
  return table;
}

int mvp_rl_act(const Eigen::Ref<const Eigen::VectorXd>& scores, std::span<const double> rewards) {
  if (static_cast<Eigen::Index>(rewards.size()) != scores.size()) {
    throw ContractError("mvp_rl_act: observed rewards have arity " + std::to_string(rewards.size()) + ", expected " +
                        std::to_string(scores.size()));
  }
  int best = 0;
  double best_value = rewards[0] + scores(0);
  for (Eigen::Index a = 1; a < scores.size(); ++a) {
    const double v = rewards[static_cast<std::size_t>(a)] + scores(a);
    if (v > best_value) {
      best_value = v;
      best = static_cast<int>(a);
    }
  }
  return best;
}

int mvp_tl_act(const Eigen::Ref<const Eigen::VectorXd>& immediate, const Eigen::Ref<const Eigen::VectorXd>& next_values,
               std::span<const int> next_states) {
  if (static_cast<Eigen::Index>(next_states.size()) != immediate.size()) {
    throw ContractError("mvp_tl_act: observed next states have arity " + std::to_string(next_states.size()) +
                        ", expected " + std::to_string(immediate.size()));
  }
  int best = -1;
  double best_value = 0.0;
  for (Eigen::Index a = 0; a < immediate.size(); ++a) {
    const int sp = next_states[static_cast<std::size_t>(a)];
    if (sp < 0 || sp >= next_values.size()) throw ContractError("mvp_tl_act: next state out of range");
    const double v = next_values(sp) + immediate(a);
    const bool better = best < 0 || v > best_value ||
                        (v == best_value && sp < next_states[static_cast<std::size_t>(best)]);
    if (better) {
      best = static_cast<int>(a);
      best_value = v;
    }
  }
  return best;
}

Policy policy_of(const OptimisticValueTable& table) {
  const auto H = table.scores.size();
  switch (table.regime) {
    case Regime::Reward:
      return ThresholdPolicy{table.scores};
    case Regime::Transition: {
      ListPolicy policy;
      policy.lists.resize(H);
      for (std::size_t h = 0; h < H; ++h) {
        const Eigen::VectorXd next = table.values.row(static_cast<Eigen::Index>(h) + 1).transpose();
        const auto& w = table.scores[h];
        for (Eigen::Index s = 0; s < w.rows(); ++s) {
          const Eigen::MatrixXd pair = next.replicate(1, w.cols()) + w.row(s).replicate(next.size(), 1);
          policy.lists[h].push_back(build_ranked_list(pair));
        }
      }
      return policy;
    }
    case Regime::None:
      break;
  }
  MarkovPolicy policy{Eigen::MatrixXi::Zero(static_cast<Eigen::Index>(H), table.values.cols())};
  for (std::size_t h = 0; h < H; ++h) {
    for (Eigen::Index s = 0; s < table.values.cols(); ++s) {
      policy.action(static_cast<Eigen::Index>(h), s) = argmax_lowest(table.scores[h].row(s).transpose());
    }
  }
  return policy;
}

std::string to_string(Algorithm algo) {
  switch (algo) {
    case Algorithm::MvpRl: return "mvp-rl";
    case Algorithm::MvpTl: return "mvp-tl";
    case Algorithm::MvpVanilla: return "mvp-vanilla";
    case Algorithm::Optimal: return "optimal";
  }
  return "unknown";
}

Algorithm algorithm_from_string(const std::string& name) {
  if (name == "mvp-rl") return Algorithm::MvpRl;
  if (name == "mvp-tl") return Algorithm::MvpTl;
  if (name == "mvp-vanilla") return Algorithm::MvpVanilla;
  if (name == "optimal") return Algorithm::Optimal;
  throw InputError("unknown algorithm '" + name + "'");
}

LearnerConfig learner_config_from_json(const json& doc) {
  try {
    LearnerConfig config;
    config.algo = algorithm_from_string(doc.at("algo").get<std::string>());
    config.bonus.delta = doc.value("delta", config.bonus.delta);
    if (doc.contains("bonus_scale")) {
      const auto& scale = doc.at("bonus_scale");
      config.bonus.reward_scale = scale.value("reward", 1.0);
      config.bonus.transition_scale = scale.value("transition", 1.0);
    }
    if (doc.contains("log_term") && !doc.at("log_term").is_null()) {
      config.bonus.log_term = doc.at("log_term").get<double>();
    }
    config.bonus.validate();
    return config;
  } catch (const json::exception& e) {
    throw InputError(std::string("learner config: ") + e.what());
  } catch (const ContractError& e) {
    throw InputError(e.what());
  }
}

json learner_config_to_json(const LearnerConfig& config) {
  json doc{{"algo", to_string(config.algo)},
           {"delta", config.bonus.delta},
           {"bonus_scale", {{"reward", config.bonus.reward_scale}, {"transition", config.bonus.transition_scale}}}};
  if (config.bonus.log_term) doc["log_term"] = *config.bonus.log_term;
  return doc;
}

MvpLearner::MvpLearner(Algorithm algo, int S, int A, int H, Regime regime, BonusConfig config)
    : algo_(algo), regime_(regime), config_(config), store_(S, A, H, regime) {
  config_.validate();
  if (algo == Algorithm::MvpRl && regime != Regime::Reward) {
    throw ContractError("mvp-rl runs under reward lookahead only");
  }
  if (algo == Algorithm::MvpTl && regime != Regime::Transition) {
    throw ContractError("mvp-tl runs under transition lookahead only");
  }
  if (algo == Algorithm::Optimal) throw ContractError("MvpLearner: use OptimalLearner for the optimal agent");
  begin_episode(1);
}

void MvpLearner::begin_episode(std::int64_t k) {
  switch (algo_) {
    case Algorithm::MvpRl: table_ = mvp_rl_plan(store_, k, config_); break;
    case Algorithm::MvpTl: table_ = mvp_tl_plan(store_, k, config_); break;
    default: table_ = vanilla_mvp_plan(store_, k, config_); break;
  }
}

int MvpLearner::act(int h, int s, const Observation& obs) {
  const auto& scores = table_.scores[static_cast<std::size_t>(h)];
  switch (algo_) {
    case Algorithm::MvpRl:
      return mvp_rl_act(scores.row(s).transpose(), obs.rewards);
    case Algorithm::MvpTl:
      return mvp_tl_act(scores.row(s).transpose(), table_.values.row(h + 1).transpose(), obs.next_states);
    default:
      return argmax_lowest(scores.row(s).transpose());
  }
}

void MvpLearner::restore(EmpiricalStore store) {
  if (store.mode() != regime_ || store.num_states() != store_.num_states() ||
      store.num_actions() != store_.num_actions() || store.horizon() != store_.horizon()) {
    throw InputError("checkpoint store does not match the learner");
  }
  store_ = std::move(store);
}

PlanResult plan_optimal(const TabularLookaheadMdp& mdp, Regime regime) {
  switch (regime) {
    case Regime::Reward:
      return plan_reward_lookahead(mdp);
    case Regime::Transition:
      return plan_transition_lookahead(mdp, all_independent(mdp) ? PlannerMethod::exact_list() : PlannerMethod::exact());
    case Regime::None:
      break;
  }
  return plan_no_lookahead(mdp);
}

OptimalLearner::OptimalLearner(const TabularLookaheadMdp& mdp, Regime regime)
    : regime_(regime), plan_(plan_optimal(mdp, regime)) {}

int OptimalLearner::act(int h, int s, const Observation& obs) {
  if (const auto* markov = std::get_if<MarkovPolicy>(&plan_.policy)) return markov->act(h, s);
  if (const auto* threshold = std::get_if<ThresholdPolicy>(&plan_.policy)) return threshold->act(h, s, obs.rewards);
  return std::get<ListPolicy>(plan_.policy).act(h, s, obs.next_states);
}

std::unique_ptr<Learner> make_learner(const LearnerConfig& config, const TabularLookaheadMdp& mdp, Regime regime) {
  if (config.algo == Algorithm::Optimal) return std::make_unique<OptimalLearner>(mdp, regime);
  return std::make_unique<MvpLearner>(config.algo, mdp.num_states(), mdp.num_actions(), mdp.horizon(), regime,
                                      config.bonus);
}

}  // namespace lookahead
