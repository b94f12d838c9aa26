#pragma once

#include <map>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"
#include "lookahead/episode.hpp"

namespace lookahead {

/// Distinct observation vectors at one (h, s) with their multiplicities, in
/// first-seen order. Averages over the raw list equal count-weighted averages
/// over this table, which keeps planning cost proportional to the number of
/// distinct observations.
template <typename Scalar>
struct ObservationHistogram {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  std::vector<Vector> outcomes;
  std::vector<int> counts;

  void add(const Vector& v);

 private:
  std::map<std::vector<Scalar>, std::size_t> index_;
};

/// Counts, raw per-visit observation lists and running estimates for one
/// learner. `mode` is the regime the data comes from:
///  - Reward: every visit stores the full reward vector; r-hat averages all
///    actions' rewards (the lookahead reveals them), P-hat uses the taken action.
///  - Transition: every visit stores the full next-state vector; P-hat counts
///    every action's revealed next state, r-hat uses the taken action.
///  - None: both estimates use the taken action only.
class EmpiricalStore {
 public:
  struct Visit {
    int action = 0;
    double reward = 0.0;
    int next_state = 0;
  };

  EmpiricalStore(int num_states, int num_actions, int horizon, Regime mode);

  Regime mode() const { return mode_; }
  int num_states() const { return S_; }
  int num_actions() const { return A_; }
  int horizon() const { return H_; }

  /// Appends one episode. Throws ContractError on a regime mismatch.
  void update(const EpisodeRecord& record);

  int visits(int h, int s) const { return cell(h, s).visits; }
  int visits(int h, int s, int a) const { return cell(h, s).action_visits(a); }

  const std::vector<Eigen::VectorXd>& reward_observations(int h, int s) const { return cell(h, s).reward_obs; }
  const std::vector<Eigen::VectorXi>& next_state_observations(int h, int s) const { return cell(h, s).next_obs; }
  const std::vector<Visit>& visit_log(int h, int s) const { return cell(h, s).log; }
  const ObservationHistogram<double>& reward_histogram(int h, int s) const { return cell(h, s).reward_hist; }
  const ObservationHistogram<int>& next_state_histogram(int h, int s) const { return cell(h, s).next_hist; }

  /// r-hat as described for the store's mode; 0 when nothing was observed.
  double mean_reward(int h, int s, int a) const;
  /// r-hat from the taken action only, in every mode.
  double mean_reward_taken(int h, int s, int a) const;
  /// Number of samples behind mean_reward(h, s, a).
  int reward_samples(int h, int s, int a) const;

  /// P-hat(. | s, a) as an A x S matrix; rows without data are zero.
  Eigen::MatrixXd empirical_kernel(int h, int s) const;

  nlohmann::json to_json() const;
  static EmpiricalStore from_json(const nlohmann::json& doc);

 private:
  struct Cell {
    int visits = 0;
    Eigen::VectorXi action_visits;
    std::vector<Eigen::VectorXd> reward_obs;
    std::vector<Eigen::VectorXi> next_obs;
    std::vector<Visit> log;
    ObservationHistogram<double> reward_hist;
    ObservationHistogram<int> next_hist;
    Eigen::VectorXd reward_sum_all;
    Eigen::VectorXd reward_sum_taken;
    Eigen::MatrixXi transition_counts;  // A x S
    Eigen::VectorXi transition_totals;  // A
  };

  const Cell& cell(int h, int s) const {
    return cells_[static_cast<std::size_t>(h) * static_cast<std::size_t>(S_) + static_cast<std::size_t>(s)];
  }
  Cell& cell(int h, int s) {
    return cells_[static_cast<std::size_t>(h) * static_cast<std::size_t>(S_) + static_cast<std::size_t>(s)];
  }
  void record_visit(Cell& c, const Visit& v, const Eigen::VectorXd* rewards, const Eigen::VectorXi* next);

  int S_;
  int A_;
  int H_;
  Regime mode_;
  std::vector<Cell> cells_;
};

}  // namespace lookahead
