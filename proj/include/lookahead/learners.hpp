#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"
#include "lookahead/bonuses.hpp"
#include "lookahead/empirical_store.hpp"
#include "lookahead/planning.hpp"

namespace lookahead {

/// Optimistic values V-bar (rows h = 0..H, last row zero) and the per-(h, s, a)
/// scores used to act: reward regime b^p + P-hat V-bar; transition regime
/// r-hat + b^r; no lookahead r-hat + b^r + b^p + P-hat V-bar.
struct OptimisticValueTable {
  Regime regime = Regime::None;
  Eigen::MatrixXd values;
  std::vector<Eigen::MatrixXd> scores;  // [h] is S x A

  double operator()(int h, int s) const { return values(h, s); }
};

struct RlBonuses {
  double reward = 0.0;      // b^r(s)
  double transition = 0.0;  // b^p(s, a)
};

struct TlBonuses {
  double reward = 0.0;      // b^r(s, a)
  double transition = 0.0;  // b^p(s)
};

/// Log term in use for episode k: the override if set, else the formula.
double resolve_log_term_rl(const BonusConfig& config, std::int64_t k, int S, int A, int H);
double resolve_log_term_tl(const BonusConfig& config, std::int64_t k, int S, int A, int H);

RlBonuses mvp_rl_bonuses(const EmpiricalStore& store, std::int64_t k, int h, int s, int a,
                         const Eigen::VectorXd& next_values, const BonusConfig& config);
TlBonuses mvp_tl_bonuses(const EmpiricalStore& store, std::int64_t k, int h, int s, int a,
                         const Eigen::VectorXd& next_values, const BonusConfig& config);

/// Optimistic planning for episode k from data of episodes 1..k-1.
OptimisticValueTable mvp_rl_plan(const EmpiricalStore& store, std::int64_t k, const BonusConfig& config);
OptimisticValueTable mvp_tl_plan(const EmpiricalStore& store, std::int64_t k, const BonusConfig& config);
OptimisticValueTable vanilla_mvp_plan(const EmpiricalStore& store, std::int64_t k, const BonusConfig& config);

/// argmax_a R(a) + scores(a), lowest index on ties.
int mvp_rl_act(const Eigen::Ref<const Eigen::VectorXd>& scores, std::span<const double> rewards);
/// argmax_a immediate(a) + next_values(s'(a)); ties go to the lowest (s'(a), a),
/// which is the same pair a ranked list on these scores would pick.
int mvp_tl_act(const Eigen::Ref<const Eigen::VectorXd>& immediate, const Eigen::Ref<const Eigen::VectorXd>& next_values,
               std::span<const int> next_states);

/// The policy the table induces, in the form evaluate_lookahead_policy takes.
Policy policy_of(const OptimisticValueTable& table);

enum class Algorithm { MvpRl, MvpTl, MvpVanilla, Optimal };

std::string to_string(Algorithm algo);
Algorithm algorithm_from_string(const std::string& name);

struct LearnerConfig {
  Algorithm algo = Algorithm::MvpRl;
  BonusConfig bonus;
};

/// {"algo", "delta", "bonus_scale": {"reward", "transition"}, "log_term"}; throws InputError.
LearnerConfig learner_config_from_json(const nlohmann::json& doc);
nlohmann::json learner_config_to_json(const LearnerConfig& config);

/// An agent that plans before each episode and learns from its record.
class Learner : public Agent {
 public:
  virtual Algorithm algorithm() const = 0;
  /// Plans for episode k (1-based).
  virtual void begin_episode(std::int64_t k) = 0;
  virtual void observe(const EpisodeRecord& record) = 0;
  virtual Policy policy() const = 0;
  /// Optimistic first-step value of the current plan.
  virtual double optimistic_value(int s) const = 0;
  /// Data store for checkpointing; null when the learner keeps none.
  virtual const EmpiricalStore* store() const { return nullptr; }
  virtual void restore(EmpiricalStore) {}
};

class MvpLearner final : public Learner {
 public:
  MvpLearner(Algorithm algo, int S, int A, int H, Regime regime, BonusConfig config);

  Regime regime() const override { return regime_; }
  Algorithm algorithm() const override { return algo_; }
  void begin_episode(std::int64_t k) override;
  int act(int h, int s, const Observation& obs) override;
  void observe(const EpisodeRecord& record) override { store_.update(record); }
  Policy policy() const override { return policy_of(table_); }
  double optimistic_value(int s) const override { return table_(0, s); }
  const EmpiricalStore* store() const override { return &store_; }
  void restore(EmpiricalStore store) override;

  const OptimisticValueTable& table() const { return table_; }

 private:
  Algorithm algo_;
  Regime regime_;
  BonusConfig config_;
  EmpiricalStore store_;
  OptimisticValueTable table_;
};

/// Plays the exact lookahead-optimal policy of a known MDP; never learns.
class OptimalLearner final : public Learner {
 public:
  OptimalLearner(const TabularLookaheadMdp& mdp, Regime regime);

  Regime regime() const override { return regime_; }
  Algorithm algorithm() const override { return Algorithm::Optimal; }
  void begin_episode(std::int64_t) override {}
  int act(int h, int s, const Observation& obs) override;
  void observe(const EpisodeRecord&) override {}
  Policy policy() const override { return plan_.policy; }
  double optimistic_value(int s) const override { return plan_.values(0, s); }

 private:
  Regime regime_;
  PlanResult plan_;
};

/// Exact plan for the given regime (list method when transitions are independent).
PlanResult plan_optimal(const TabularLookaheadMdp& mdp, Regime regime);

std::unique_ptr<Learner> make_learner(const LearnerConfig& config, const TabularLookaheadMdp& mdp, Regime regime);

}  // namespace lookahead
