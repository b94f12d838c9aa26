#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lookahead/ranked_list.hpp"

namespace lookahead {

using MuFunction = std::function<Eigen::VectorXd(const RankedList&, const Eigen::MatrixXd&)>;

/// Replaceable pieces, so a deliberately broken variant can be checked to fail.
struct SelftestHooks {
  MuFunction mu = mu_independent;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// mu by brute force over all S^A joint outcomes of independent marginals.
Eigen::VectorXd mu_by_enumeration(const RankedList& list, const Eigen::MatrixXd& marginals);

/// Closed-form values, mu against enumeration, planners against the
/// extended-MDP oracles and bonus monotonicity. Stops at the first failure.
std::vector<CheckResult> run_selftest(const SelftestHooks& hooks = {});

}  // namespace lookahead
