#include "lookahead/empirical_store.hpp"

#include "lookahead/errors.hpp"

namespace lookahead {

using nlohmann::json;

template <typename Scalar>
void ObservationHistogram<Scalar>::add(const Vector& v) {
  auto [it, inserted] = index_.try_emplace(std::vector<Scalar>(v.data(), v.data() + v.size()), outcomes.size());
  if (inserted) {
    outcomes.push_back(v);
    counts.push_back(1);
  } else {
    ++counts[it->second];
  }
}

template struct ObservationHistogram<double>;
template struct ObservationHistogram<int>;

EmpiricalStore::EmpiricalStore(int num_states, int num_actions, int horizon, Regime mode)
    : S_(num_states), A_(num_actions), H_(horizon), mode_(mode) {
  if (S_ < 1 || A_ < 1 || H_ < 1) throw ContractError("store: S, A, H must be positive");
  Cell blank;
  blank.action_visits = Eigen::VectorXi::Zero(A_);
  blank.reward_sum_all = Eigen::VectorXd::Zero(A_);
  blank.reward_sum_taken = Eigen::VectorXd::Zero(A_);
  blank.transition_counts = Eigen::MatrixXi::Zero(A_, S_);
  blank.transition_totals = Eigen::VectorXi::Zero(A_);
  cells_.assign(static_cast<std::size_t>(S_) * static_cast<std::size_t>(H_), blank);
}

void EmpiricalStore::record_visit(Cell& c, const Visit& v, const Eigen::VectorXd* rewards,
                                  const Eigen::VectorXi* next) {
  ++c.visits;
  ++c.action_visits(v.action);
  c.log.push_back(v);
  c.reward_sum_taken(v.action) += v.reward;
  if (rewards != nullptr) {
    c.reward_obs.push_back(*rewards);
    c.reward_hist.add(*rewards);
    c.reward_sum_all += *rewards;
  }
  if (next != nullptr) {
    c.next_obs.push_back(*next);
    c.next_hist.add(*next);
    for (int a = 0; a < A_; ++a) {
      ++c.transition_counts(a, (*next)(a));
      ++c.transition_totals(a);
    }
  } else {
    ++c.transition_counts(v.action, v.next_state);
    ++c.transition_totals(v.action);
  }
}

void EmpiricalStore::update(const EpisodeRecord& record) {
  if (record.regime != mode_) {
    throw ContractError("store_update: record regime " + to_string(record.regime) +
                        " does not match store mode " + to_string(mode_));
  }
  if (static_cast<int>(record.steps.size()) != H_) throw ContractError("store_update: record length != H");
  for (int h = 0; h < H_; ++h) {
    const auto& st = record.steps[static_cast<std::size_t>(h)];
    const Visit v{st.action, st.reward, st.next_state};
    const Eigen::VectorXd* rewards = nullptr;
    const Eigen::VectorXi* next = nullptr;
    if (mode_ == Regime::Reward) {
      if (st.observed_rewards.size() != A_) throw ContractError("store_update: reward observation arity");
      rewards = &st.observed_rewards;
    } else if (mode_ == Regime::Transition) {
      if (st.observed_next.size() != A_) throw ContractError("store_update: next-state observation arity");
      next = &st.observed_next;
    }
    record_visit(cell(h, st.state), v, rewards, next);
  }
}

double EmpiricalStore::mean_reward(int h, int s, int a) const {
  const Cell& c = cell(h, s);
  if (mode_ == Regime::Reward) return c.visits == 0 ? 0.0 : c.reward_sum_all(a) / c.visits;
  return mean_reward_taken(h, s, a);
}

double EmpiricalStore::mean_reward_taken(int h, int s, int a) const {
  const Cell& c = cell(h, s);
  return c.action_visits(a) == 0 ? 0.0 : c.reward_sum_taken(a) / c.action_visits(a);
}

int EmpiricalStore::reward_samples(int h, int s, int a) const {
  const Cell& c = cell(h, s);
  return mode_ == Regime::Reward ? c.visits : c.action_visits(a);
}

Eigen::MatrixXd EmpiricalStore::empirical_kernel(int h, int s) const {
  const Cell& c = cell(h, s);
  Eigen::MatrixXd P = c.transition_counts.cast<double>();
  for (int a = 0; a < A_; ++a) {
    if (c.transition_totals(a) > 0) P.row(a) /= static_cast<double>(c.transition_totals(a));
  }
  return P;
}

json EmpiricalStore::to_json() const {
  json doc{{"S", S_}, {"A", A_}, {"H", H_}, {"mode", to_string(mode_)}};
  json cells = json::array();
  for (const auto& c : cells_) {
    json visits = json::array();
    for (std::size_t i = 0; i < c.log.size(); ++i) {
      json v{{"action", c.log[i].action}, {"reward", c.log[i].reward}, {"next_state", c.log[i].next_state}};
      if (mode_ == Regime::Reward) {
        const auto& r = c.reward_obs[i];
        v["rewards"] = std::vector<double>(r.data(), r.data() + r.size());
      } else if (mode_ == Regime::Transition) {
        const auto& n = c.next_obs[i];
        v["next_states"] = std::vector<int>(n.data(), n.data() + n.size());
      }
      visits.push_back(std::move(v));
    }
    cells.push_back(std::move(visits));
  }
  doc["cells"] = std::move(cells);
  return doc;
}

EmpiricalStore EmpiricalStore::from_json(const json& doc) {
  try {
    EmpiricalStore store(doc.at("S").get<int>(), doc.at("A").get<int>(), doc.at("H").get<int>(),
                         regime_from_string(doc.at("mode").get<std::string>()));
    const auto& cells = doc.at("cells");
    if (cells.size() != store.cells_.size()) throw InputError("store: wrong number of cells");
    for (std::size_t i = 0; i < cells.size(); ++i) {
      for (const auto& v : cells[i]) {
        const Visit visit{v.at("action").get<int>(), v.at("reward").get<double>(), v.at("next_state").get<int>()};
        if (visit.action < 0 || visit.action >= store.A_ || visit.next_state < 0 || visit.next_state >= store.S_) {
          throw InputError("store: visit out of range");
        }
        if (store.mode_ == Regime::Reward) {
          const auto r = v.at("rewards").get<std::vector<double>>();
          if (static_cast<int>(r.size()) != store.A_) throw InputError("store: reward arity");
          const Eigen::VectorXd rv = Eigen::Map<const Eigen::VectorXd>(r.data(), store.A_);
          store.record_visit(store.cells_[i], visit, &rv, nullptr);
        } else if (store.mode_ == Regime::Transition) {
          const auto n = v.at("next_states").get<std::vector<int>>();
          if (static_cast<int>(n.size()) != store.A_) throw InputError("store: next-state arity");
          for (int x : n) {
            if (x < 0 || x >= store.S_) throw InputError("store: next state out of range");
          }
          const Eigen::VectorXi nv = Eigen::Map<const Eigen::VectorXi>(n.data(), store.A_);
          store.record_visit(store.cells_[i], visit, nullptr, &nv);
        } else {
          store.record_visit(store.cells_[i], visit, nullptr, nullptr);
        }
      }
    }
    return store;
  } catch (const json::exception& e) {
    throw InputError(std::string("store: ") + e.what());
  }
}

}  // namespace lookahead
