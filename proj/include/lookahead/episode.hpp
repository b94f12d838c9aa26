#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lookahead/mdp.hpp"

namespace lookahead {

/// What an agent is shown before acting. Exactly one of the spans is
/// non-empty under lookahead; both are empty for Regime::None.
struct Observation {
  Regime regime = Regime::None;
  std::span<const double> rewards;
  std::span<const int> next_states;
};

/// Deterministic decision maker. Steps h are 0-based.
class Agent {
 public:
  virtual ~Agent() = default;
  virtual Regime regime() const = 0;
  virtual int act(int h, int s, const Observation& obs) = 0;
};

struct StepRecord {
  int state = 0;
  int action = 0;
  double reward = 0.0;
  int next_state = 0;
  Eigen::VectorXd observed_rewards;   // reward lookahead only
  Eigen::VectorXi observed_next;      // transition lookahead only
};

struct EpisodeRecord {
  std::int64_t episode = 0;
  Regime regime = Regime::None;
  std::vector<StepRecord> steps;
  double ret = 0.0;
};

bool operator==(const StepRecord& a, const StepRecord& b);
bool operator==(const EpisodeRecord& a, const EpisodeRecord& b);

/// Plays one episode. Per-step randomness comes from streams keyed by
/// (seed, k, h, purpose): the reward joint is always drawn from the Reward
/// stream and the next-state joint from the Transition stream, whatever the
/// regime, so the regime only changes what the agent is shown.
EpisodeRecord run_episode(const TabularLookaheadMdp& mdp, Agent& agent, Regime regime,
                          std::int64_t k, std::uint64_t seed);

/// Canonical text form (round-trip precision), used for byte-level replay checks.
std::string serialize(const EpisodeRecord& record);

}  // namespace lookahead
