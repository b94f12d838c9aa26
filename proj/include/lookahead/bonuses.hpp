#pragma once

#include <cstdint>
#include <cmath>
#include <optional>

#include <Eigen/Dense>

namespace lookahead {

/// Confidence parameter, per-family bonus multipliers and an optional fixed
/// log term. Multipliers may be 0 to switch a bonus family off.
struct BonusConfig {
  double delta = 0.1;
  double reward_scale = 1.0;
  double transition_scale = 1.0;
  std::optional<double> log_term;

  /// Throws ContractError for delta outside (0, 1) or a negative multiplier.
  void validate() const;
};

/// ln(144 S^2 A H^2 k^3 (k+1) / delta).
double log_term_rl(std::int64_t k, int S, int A, int H, double delta);
/// ln(16 S^3 A^2 H k^2 (k+1) / delta).
double log_term_tl(std::int64_t k, int S, int A, int H, double delta);

/// Var_p(v) = p.(v*v) - (p.v)^2, clamped at 0. p and v may differ in orientation.
template <typename DerivedP, typename DerivedV>
double variance(const Eigen::MatrixBase<DerivedP>& p, const Eigen::MatrixBase<DerivedV>& v) {
  const double mean = p.dot(v);
  const double second = p.dot(v.cwiseAbs2());
  const double var = second - mean * mean;
  return var > 0.0 ? var : 0.0;
}

/// 3 sqrt(A L / (2 (n v 1))).
double rl_reward_bonus(int A, double L, int n, double scale = 1.0);
/// min{ (20/3) sqrt(var L / (n v 1)) + (400/9) H L / (n v 1), H }.
double rl_transition_bonus(double var, double L, int H, int n, double scale = 1.0);
/// min{ sqrt(L / (n v 1)), 1 }.
double tl_reward_bonus(double L, int n, double scale = 1.0);
/// (20/3) sqrt(var L / (n v 1)) + (400/3) H L / (n v 1); not truncated here.
double tl_transition_bonus(double var, double L, int H, int n, double scale = 1.0);

/// f(p, v, n) = p.v + max{ (20/3) sqrt(Var_p(v) L / n), (400/9) H L / n }
/// with L = ln(1/delta'). Non-decreasing in each entry of v on [0, H]^S.
template <typename DerivedP, typename DerivedV>
double monotone_objective(const Eigen::MatrixBase<DerivedP>& p, const Eigen::MatrixBase<DerivedV>& v,
                          double n, double L, double H) {
  const double spread = 20.0 / 3.0 * std::sqrt(variance(p, v) * L / n);
  const double floor = 400.0 / 9.0 * H * L / n;
  return p.dot(v) + (spread > floor ? spread : floor);
}

}  // namespace lookahead
