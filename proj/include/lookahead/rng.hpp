#pragma once

#include <cstdint>

namespace lookahead {

enum class Purpose : std::uint32_t {
  Reward = 1,
  Transition = 2,
  Agent = 3,
  Planner = 4,
  Environment = 5,
  Simulation = 6,
};

/// Identifies one independent random stream. `lane` separates streams that
/// share (episode, step, purpose), e.g. one per state in a sampling planner.
struct StreamId {
  std::uint64_t episode = 0;
  std::uint32_t step = 0;
  Purpose purpose = Purpose::Reward;
  std::uint32_t lane = 0;
};

/// Counter-based generator: the i-th draw is a pure function of
/// (seed, stream id, i), so streams can be created in any order or on any
/// thread and still reproduce the same values.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t seed, StreamId id);

  result_type operator()();
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform();

  std::uint64_t seed() const { return seed_; }
  const StreamId& id() const { return id_; }

 private:
  std::uint64_t seed_;
  StreamId id_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t mix64(std::uint64_t x);

}  // namespace lookahead
