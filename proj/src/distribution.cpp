#include "lookahead/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "lookahead/errors.hpp"

namespace lookahead {

namespace {

void check_weights(const std::vector<double>& weights, const char* what) {
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw ContractError(std::string(what) + ": negative or non-finite weight");
    }
    total += w;
  }
  if (std::abs(total - 1.0) > kWeightTolerance) {
    throw ContractError(std::string(what) + ": weights sum to " + std::to_string(total));
  }
}

std::vector<double> cumulative_of(const std::vector<double>& weights) {
  std::vector<double> cum(weights.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    acc += weights[i];
    cum[i] = acc;
  }
  return cum;
}

std::size_t pick(const std::vector<double>& cumulative, double u) {
  // u is in [0, 1); scale by the actual total to absorb rounding.
  const double target = u * cumulative.back();
  auto it = std::upper_bound(cumulative.begin(), cumulative.end(), target);
  if (it == cumulative.end()) --it;
  return static_cast<std::size_t>(it - cumulative.begin());
}

template <typename Outcome>
std::vector<typename Outcome::Scalar> as_key(const Outcome& v) {
  return {v.data(), v.data() + v.size()};
}

}  // namespace

template <typename Scalar>
JointDistribution<Scalar> JointDistribution<Scalar>::joint(std::vector<Atom> atoms) {
  if (atoms.empty()) throw ContractError("joint distribution: no atoms");
  const auto arity = atoms.front().outcome.size();
  if (arity == 0) throw ContractError("joint distribution: arity 0");

  std::vector<double> weights;
  for (const auto& atom : atoms) {
    if (atom.outcome.size() != arity) {
      throw ContractError("joint distribution: outcome vectors differ in length");
    }
    weights.push_back(atom.weight);
  }
  check_weights(weights, "joint distribution");

  JointDistribution d;
  d.kind_ = Kind::Joint;
  d.arity_ = static_cast<int>(arity);
  std::map<std::vector<Scalar>, std::size_t> index;
  for (auto& atom : atoms) {
    if (atom.weight == 0.0) continue;
    auto [it, inserted] = index.try_emplace(as_key(atom.outcome), d.atoms_.size());
    if (inserted) {
      d.atoms_.push_back(std::move(atom));
    } else {
      d.atoms_[it->second].weight += atom.weight;
    }
  }
  std::vector<double> merged;
  for (const auto& atom : d.atoms_) merged.push_back(atom.weight);
  d.cumulative_ = cumulative_of(merged);
  return d;
}

template <typename Scalar>
JointDistribution<Scalar> JointDistribution<Scalar>::product(std::vector<Marginal> marginals) {
  if (marginals.empty()) throw ContractError("product distribution: arity 0");
  JointDistribution d;
  d.kind_ = Kind::Product;
  d.arity_ = static_cast<int>(marginals.size());
  for (auto& m : marginals) {
    if (m.values.empty() || m.values.size() != m.probs.size()) {
      throw ContractError("product distribution: malformed marginal");
    }
    check_weights(m.probs, "product marginal");
    Marginal merged;
    for (std::size_t i = 0; i < m.values.size(); ++i) {
      if (m.probs[i] == 0.0) continue;
      auto it = std::find(merged.values.begin(), merged.values.end(), m.values[i]);
      if (it == merged.values.end()) {
        merged.values.push_back(m.values[i]);
        merged.probs.push_back(m.probs[i]);
      } else {
        merged.probs[static_cast<std::size_t>(it - merged.values.begin())] += m.probs[i];
      }
    }
    d.marginal_cumulative_.push_back(cumulative_of(merged.probs));
    d.marginals_.push_back(std::move(merged));
  }
  return d;
}

template <typename Scalar>
JointDistribution<Scalar> JointDistribution<Scalar>::point_mass(const Outcome& outcome) {
  return joint({Atom{1.0, outcome}});
}

template <typename Scalar>
typename JointDistribution<Scalar>::Marginal JointDistribution<Scalar>::marginal(int a) const {
  if (a < 0 || a >= arity_) throw ContractError("marginal: action out of range");
  if (kind_ == Kind::Product) return marginals_[static_cast<std::size_t>(a)];
  Marginal m;
  for (const auto& atom : atoms_) {
    const Scalar v = atom.outcome(a);
    auto it = std::find(m.values.begin(), m.values.end(), v);
    if (it == m.values.end()) {
      m.values.push_back(v);
      m.probs.push_back(atom.weight);
    } else {
      m.probs[static_cast<std::size_t>(it - m.values.begin())] += atom.weight;
    }
  }
  return m;
}

template <typename Scalar>
std::size_t JointDistribution<Scalar>::support_size() const {
  if (kind_ == Kind::Joint) return atoms_.size();
  std::size_t total = 1;
  for (const auto& m : marginals_) {
    const std::size_t n = m.values.size();
    if (total > std::numeric_limits<std::size_t>::max() / n) {
      return std::numeric_limits<std::size_t>::max();
    }
    total *= n;
  }
  return total;
}

template <typename Scalar>
std::vector<typename JointDistribution<Scalar>::Atom> JointDistribution<Scalar>::enumerate(
    std::size_t cap) const {
  if (arity_ == 0) throw ContractError("enumerate: arity 0");
  const std::size_t size = support_size();
  if (size > cap) {
    throw CapacityError("support of size " + std::to_string(size) + " exceeds cap " +
                        std::to_string(cap));
  }
  if (kind_ == Kind::Joint) return atoms_;

  std::vector<Atom> out;
  out.reserve(size);
  std::vector<std::size_t> digit(static_cast<std::size_t>(arity_), 0);
  while (true) {
    Atom atom{1.0, Outcome(arity_)};
    for (int a = 0; a < arity_; ++a) {
      const auto& m = marginals_[static_cast<std::size_t>(a)];
      const auto i = digit[static_cast<std::size_t>(a)];
      atom.outcome(a) = m.values[i];
      atom.weight *= m.probs[i];
    }
    out.push_back(std::move(atom));
    int a = arity_ - 1;
    for (; a >= 0; --a) {
      auto& d = digit[static_cast<std::size_t>(a)];
      if (++d < marginals_[static_cast<std::size_t>(a)].values.size()) break;
      d = 0;
    }
    if (a < 0) break;
  }
  return out;
}

template <typename Scalar>
typename JointDistribution<Scalar>::Outcome JointDistribution<Scalar>::sample(
    RngStream& rng) const {
  if (arity_ == 0) throw ContractError("sample_joint: arity 0");
  if (kind_ == Kind::Joint) {
    return atoms_[pick(cumulative_, rng.uniform())].outcome;
  }
  Outcome out(arity_);
  for (int a = 0; a < arity_; ++a) {
    const auto idx = static_cast<std::size_t>(a);
    out(a) = marginals_[idx].values[pick(marginal_cumulative_[idx], rng.uniform())];
  }
  return out;
}

template class JointDistribution<double>;
template class JointDistribution<int>;

}  // namespace lookahead
