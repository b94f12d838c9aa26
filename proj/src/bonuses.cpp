#include "lookahead/bonuses.hpp"

#include <algorithm>
#include <cmath>

#include "lookahead/errors.hpp"

namespace lookahead {

namespace {

void check_log_args(std::int64_t k, int S, int A, int H, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw ContractError("log term: delta must lie in (0, 1)");
  if (k < 1 || S < 1 || A < 1 || H < 1) throw ContractError("log term: k, S, A, H must be positive");
}

double floor1(int n) { return static_cast<double>(std::max(n, 1)); }

}  // namespace

void BonusConfig::validate() const {
  if (!(delta > 0.0 && delta < 1.0)) throw ContractError("bonus config: delta must lie in (0, 1)");
  if (!(reward_scale >= 0.0) || !(transition_scale >= 0.0)) {
    throw ContractError("bonus config: multipliers must be non-negative");
  }
  if (log_term && !(*log_term >= 0.0)) throw ContractError("bonus config: log term must be non-negative");
}

// Logs are summed term by term so large k does not overflow the product.
double log_term_rl(std::int64_t k, int S, int A, int H, double delta) {
  check_log_args(k, S, A, H, delta);
  const double kd = static_cast<double>(k);
  return std::log(144.0) + 2.0 * std::log(S) + std::log(A) + 2.0 * std::log(H) + 3.0 * std::log(kd) +
         std::log(kd + 1.0) - std::log(delta);
}

double log_term_tl(std::int64_t k, int S, int A, int H, double delta) {
  check_log_args(k, S, A, H, delta);
  const double kd = static_cast<double>(k);
  return std::log(16.0) + 3.0 * std::log(S) + 2.0 * std::log(A) + std::log(H) + 2.0 * std::log(kd) +
         std::log(kd + 1.0) - std::log(delta);
}

double rl_reward_bonus(int A, double L, int n, double scale) {
  return scale * 3.0 * std::sqrt(A * L / (2.0 * floor1(n)));
}

double rl_transition_bonus(double var, double L, int H, int n, double scale) {
  const double m = floor1(n);
  const double raw = 20.0 / 3.0 * std::sqrt(var * L / m) + 400.0 / 9.0 * H * L / m;
  return std::min(scale * raw, static_cast<double>(H));
}

double tl_reward_bonus(double L, int n, double scale) {
  return std::min(scale * std::sqrt(L / floor1(n)), 1.0);
}

double tl_transition_bonus(double var, double L, int H, int n, double scale) {
  const double m = floor1(n);
  return scale * (20.0 / 3.0 * std::sqrt(var * L / m) + 400.0 / 3.0 * H * L / m);
}

}  // namespace lookahead
