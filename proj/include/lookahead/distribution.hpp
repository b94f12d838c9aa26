#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "lookahead/rng.hpp"

namespace lookahead {

inline constexpr double kWeightTolerance = 1e-12;

/// Finitely supported law over per-action outcome vectors. Either an explicit
/// list of (weight, outcome) atoms, which may correlate actions, or a product
/// of independent per-action marginals.
///
/// Scalar is `double` for reward vectors and `int` for next-state vectors.
template <typename Scalar>
class JointDistribution {
 public:
  using Outcome = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  struct Atom {
    double weight = 0.0;
    Outcome outcome;
  };

  struct Marginal {
    std::vector<Scalar> values;
    std::vector<double> probs;
  };

  enum class Kind { Joint, Product };

  JointDistribution() = default;

  /// Atoms with identical outcomes are merged and zero-weight atoms dropped.
  static JointDistribution joint(std::vector<Atom> atoms);
  /// Repeated values within a marginal are merged.
  static JointDistribution product(std::vector<Marginal> marginals);
  static JointDistribution point_mass(const Outcome& outcome);

  Kind kind() const { return kind_; }
  bool independent() const { return kind_ == Kind::Product; }
  int arity() const { return arity_; }

  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::vector<Marginal>& marginals() const { return marginals_; }

  /// Law of coordinate `a`, for either representation.
  Marginal marginal(int a) const;

  /// Number of joint outcomes with positive weight (saturates at SIZE_MAX).
  std::size_t support_size() const;

  /// Explicit atom list; product supports are expanded by Cartesian product
  /// in odometer order (last action fastest). Throws CapacityError above cap.
  std::vector<Atom> enumerate(std::size_t cap) const;

  Outcome sample(RngStream& rng) const;

 private:
  Kind kind_ = Kind::Joint;
  int arity_ = 0;
  std::vector<Atom> atoms_;
  std::vector<Marginal> marginals_;
  std::vector<double> cumulative_;
  std::vector<std::vector<double>> marginal_cumulative_;
};

using RewardDistribution = JointDistribution<double>;
using StateDistribution = JointDistribution<int>;

extern template class JointDistribution<double>;
extern template class JointDistribution<int>;

}  // namespace lookahead
