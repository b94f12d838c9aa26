#include "lookahead/selftest.hpp"

#include <cmath>
#include <sstream>

#include "lookahead/bonuses.hpp"
#include "lookahead/envs.hpp"
#include "lookahead/extended_mdp.hpp"
#include "lookahead/planning.hpp"
#include "lookahead/rng.hpp"

namespace lookahead {

namespace {

Eigen::MatrixXd random_marginals(int S, int A, RngStream& rng) {
  Eigen::MatrixXd P(A, S);
  for (int a = 0; a < A; ++a) {
    double total = 0.0;
    for (int s = 0; s < S; ++s) {
      // occasional exact zeros exercise the degenerate branches
      P(a, s) = rng.uniform() < 0.2 ? 0.0 : rng.uniform();
      total += P(a, s);
    }
    if (total == 0.0) {
      P(a, 0) = 1.0;
      total = 1.0;
    }
    P.row(a) /= total;
  }
  return P;
}

std::string gap(const char* what, double got, double want) {
  std::ostringstream os;
  os.precision(17);
  os << what << ": got " << got << ", expected " << want;
  return os.str();
}

CheckResult fig1_values() {
  const auto mdp = make_fig1_prophet(5, 20);
  const double v = plan_no_lookahead(mdp).values(0, 0);
  const double vr = plan_reward_lookahead(mdp).values(0, 0);
  const double want = 1.0 - std::pow(79.0 / 80.0, 80.0);
  if (std::abs(v - 0.0125) > 1e-12) return {"fig1-values", false, gap("V*", v, 0.0125)};
  if (std::abs(vr - want) > 1e-10) return {"fig1-values", false, gap("V^R*", vr, want)};
  return {"fig1-values", true, ""};
}

CheckResult chain_separation() {
  const auto mdp = make_transition_chain(4, 12);
  const double v = plan_no_lookahead(mdp).values(0, 0);
  const double vt = plan_transition_lookahead(mdp, PlannerMethod::exact_list()).values(0, 0);
  if (!(vt >= 0.5) || !(vt > 10.0 * v)) {
    std::ostringstream os;
    os << "V^T*=" << vt << ", V*=" << v;
    return {"chain-separation", false, os.str()};
  }
  return {"chain-separation", true, ""};
}

CheckResult mu_check(const MuFunction& mu) {
  Eigen::MatrixXd P(2, 2);
  P << 0.7, 0.3, 0.4, 0.6;
  const RankedList worked({{0, 0, 4.0}, {0, 1, 3.0}, {1, 1, 2.0}, {1, 0, 1.0}}, 2, 2);
  const Eigen::Vector4d want(0.7, 0.12, 0.18, 0.0);
  const Eigen::VectorXd got = mu(worked, P);
  if (got.size() != 4 || (got - want).cwiseAbs().maxCoeff() > 1e-12) {
    return {"mu-enumeration", false, "worked example mismatch"};
  }
  RngStream rng(2024, {0, 0, Purpose::Simulation, 1});
  for (int trial = 0; trial < 100; ++trial) {
    const int S = 1 + static_cast<int>(rng.uniform() * 3);
    const int A = 1 + static_cast<int>(rng.uniform() * 3);
    const Eigen::MatrixXd M = random_marginals(S, A, rng);
    Eigen::MatrixXd scores(S, A);
    for (int s = 0; s < S; ++s) {
      for (int a = 0; a < A; ++a) scores(s, a) = std::floor(rng.uniform() * 4.0);  // ties on purpose
    }
    const RankedList list = build_ranked_list(scores);
    const Eigen::VectorXd m = mu(list, M);
    const Eigen::VectorXd e = mu_by_enumeration(list, M);
    if (m.size() != e.size() || (m - e).cwiseAbs().maxCoeff() > 1e-12 || std::abs(m.sum() - 1.0) > 1e-12) {
      return {"mu-enumeration", false, "random trial " + std::to_string(trial) + " disagrees with enumeration"};
    }
  }
  return {"mu-enumeration", true, ""};
}

CheckResult oracle_equivalence() {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const int S = 1 + static_cast<int>(seed % 3);
    const int A = 1 + static_cast<int>((seed / 3) % 3);
    const int H = 1 + static_cast<int>(seed % 2) + static_cast<int>(seed % 3 == 0);
    for (bool independent : {true, false}) {
      const auto mdp = make_random_mdp(S, A, H, 100 + seed, independent);
      const auto r = plan_reward_lookahead(mdp).values.values;
      const auto ro = oracle_extended_reward(mdp).values;
      if ((r - ro).cwiseAbs().maxCoeff() > 1e-12) {
        return {"oracle-equivalence", false, "reward planner vs extended MDP, seed " + std::to_string(seed)};
      }
      const auto t = plan_transition_lookahead(mdp).values.values;
      const auto to = oracle_extended_transition(mdp).values;
      if ((t - to).cwiseAbs().maxCoeff() > 1e-12) {
        return {"oracle-equivalence", false, "transition planner vs extended MDP, seed " + std::to_string(seed)};
      }
      if (independent) {
        const auto tl = plan_transition_lookahead(mdp, PlannerMethod::exact_list()).values.values;
        if ((tl - t).cwiseAbs().maxCoeff() > 1e-12) {
          return {"oracle-equivalence", false, "list planner vs joint planner, seed " + std::to_string(seed)};
        }
      }
    }
  }
  return {"oracle-equivalence", true, ""};
}

CheckResult bonus_monotonicity() {
  RngStream rng(7, {0, 0, Purpose::Simulation, 2});
  for (int trial = 0; trial < 2000; ++trial) {
    const int S = 2 + static_cast<int>(rng.uniform() * 4);
    const double H = 1.0 + std::floor(rng.uniform() * 10.0);
    const double n = 1.0 + std::floor(rng.uniform() * 1000.0);
    const double L = 0.01 + rng.uniform() * 20.0;
    Eigen::VectorXd p(S), v(S);
    for (int i = 0; i < S; ++i) {
      p(i) = rng.uniform();
      v(i) = rng.uniform() * H;
    }
    p /= p.sum();
    const double before = monotone_objective(p, v, n, L, H);
    const int i = static_cast<int>(rng.uniform() * S);
    v(i) += rng.uniform() * (H - v(i));
    if (monotone_objective(p, v, n, L, H) < before - 1e-12) {
      return {"bonus-monotonicity", false, "decrease at trial " + std::to_string(trial)};
    }
  }
  return {"bonus-monotonicity", true, ""};
}

}  // namespace

Eigen::VectorXd mu_by_enumeration(const RankedList& list, const Eigen::MatrixXd& marginals) {
  const int A = static_cast<int>(marginals.rows());
  const int S = static_cast<int>(marginals.cols());
  Eigen::VectorXd mu = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(list.size()));
  std::vector<int> next(static_cast<std::size_t>(A), 0);
  while (true) {
    double w = 1.0;
    for (int a = 0; a < A; ++a) w *= marginals(a, next[static_cast<std::size_t>(a)]);
    int best = -1;
    for (int a = 0; a < A; ++a) {
      const int r = list.rank(next[static_cast<std::size_t>(a)], a);
      if (best < 0 || r < best) best = r;
    }
    mu(best) += w;
    int a = A - 1;
    for (; a >= 0; --a) {
      if (++next[static_cast<std::size_t>(a)] < S) break;
      next[static_cast<std::size_t>(a)] = 0;
    }
    if (a < 0) break;
  }
  return mu;
}

std::vector<CheckResult> run_selftest(const SelftestHooks& hooks) {
  const std::vector<std::pair<std::string, std::function<CheckResult()>>> checks{
      {"fig1-values", fig1_values},
      {"chain-separation", chain_separation},
      {"mu-enumeration", [&] { return mu_check(hooks.mu); }},
      {"oracle-equivalence", oracle_equivalence},
      {"bonus-monotonicity", bonus_monotonicity}};
  std::vector<CheckResult> results;
  for (const auto& [name, check] : checks) {
    try {
      results.push_back(check());
    } catch (const std::exception& e) {
      results.push_back({name, false, std::string("threw: ") + e.what()});
    }
    if (!results.back().passed) break;
  }
  return results;
}

}  // namespace lookahead
