#include "lookahead/episode.hpp"

#include <cstdio>

#include "lookahead/errors.hpp"

namespace lookahead {

bool operator==(const StepRecord& a, const StepRecord& b) {
  return a.state == b.state && a.action == b.action && a.reward == b.reward &&
         a.next_state == b.next_state && a.observed_rewards.size() == b.observed_rewards.size() &&
         a.observed_rewards == b.observed_rewards &&
         a.observed_next.size() == b.observed_next.size() && a.observed_next == b.observed_next;
}

bool operator==(const EpisodeRecord& a, const EpisodeRecord& b) {
  return a.episode == b.episode && a.regime == b.regime && a.steps == b.steps && a.ret == b.ret;
}

EpisodeRecord run_episode(const TabularLookaheadMdp& mdp, Agent& agent, Regime regime,
                          std::int64_t k, std::uint64_t seed) {
  if (agent.regime() != regime) {
    throw ContractError("run_episode: agent regime " + to_string(agent.regime()) +
                        " does not match " + to_string(regime));
  }
  EpisodeRecord record;
  record.episode = k;
  record.regime = regime;
  record.steps.reserve(static_cast<std::size_t>(mdp.horizon()));

  const auto episode = static_cast<std::uint64_t>(k);
  int s = mdp.initial_state(k);
  for (int h = 0; h < mdp.horizon(); ++h) {
    const auto step = static_cast<std::uint32_t>(h);
    RngStream reward_rng(seed, {episode, step, Purpose::Reward, 0});
    RngStream transition_rng(seed, {episode, step, Purpose::Transition, 0});
    const Eigen::VectorXd rewards = mdp.rewards(h, s).sample(reward_rng);
    const Eigen::VectorXi next = mdp.transitions(h, s).sample(transition_rng);

    Observation obs{regime, {}, {}};
    StepRecord rec;
    rec.state = s;
    if (regime == Regime::Reward) {
      rec.observed_rewards = rewards;
      obs.rewards = {rec.observed_rewards.data(), static_cast<std::size_t>(rewards.size())};
    } else if (regime == Regime::Transition) {
      rec.observed_next = next;
      obs.next_states = {rec.observed_next.data(), static_cast<std::size_t>(next.size())};
    }

    const int a = agent.act(h, s, obs);
    if (a < 0 || a >= mdp.num_actions()) {
      throw ContractError("run_episode: agent returned action " + std::to_string(a) +
                          " outside [0, " + std::to_string(mdp.num_actions()) + ")");
    }
    rec.action = a;
    rec.reward = rewards(a);
    rec.next_state = next(a);
    record.ret += rec.reward;
    s = rec.next_state;
    record.steps.push_back(std::move(rec));
  }
  return record;
}

std::string serialize(const EpisodeRecord& record) {
  std::string out = "episode " + std::to_string(record.episode) + " regime " +
                    to_string(record.regime) + "\n";
  char buf[64];
  for (const auto& st : record.steps) {
    std::snprintf(buf, sizeof buf, "%.17g", st.reward);
    out += std::to_string(st.state) + " " + std::to_string(st.action) + " " + buf + " " +
           std::to_string(st.next_state) + " |";
    for (Eigen::Index i = 0; i < st.observed_rewards.size(); ++i) {
      std::snprintf(buf, sizeof buf, " %.17g", st.observed_rewards(i));
      out += buf;
    }
    out += " |";
    for (Eigen::Index i = 0; i < st.observed_next.size(); ++i) {
      out += " " + std::to_string(st.observed_next(i));
    }
    out += "\n";
  }
  std::snprintf(buf, sizeof buf, "return %.17g\n", record.ret);
  return out + buf;
}

}  // namespace lookahead
