#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"
#include "lookahead/mdp.hpp"

namespace lookahead {

/// Environment documents:
///
///   { "S": 2, "A": 2, "H": 3, "initial_states": [0],
///     "rewards":     [[ <dist>, ... S entries ], ... H entries],
///     "transitions": [[ <dist>, ... ], ...] }
///
/// where <dist> is either
///   { "kind": "joint",   "atoms": [ {"weight": w, "outcome": [x_0, ..., x_{A-1}]}, ... ] }
///   { "kind": "product", "marginals": [ {"values": [...], "probs": [...]}, ... A entries ] }
///
/// Weight sums off by less than kRenormalizeTolerance are rescaled to 1;
/// larger drift is rejected.
inline constexpr double kRenormalizeTolerance = 1e-9;

nlohmann::json mdp_to_json(const TabularLookaheadMdp& mdp);
TabularLookaheadMdp mdp_from_json(const nlohmann::json& doc);

TabularLookaheadMdp load_mdp(const std::filesystem::path& path);
void save_mdp(const TabularLookaheadMdp& mdp, const std::filesystem::path& path);

}  // namespace lookahead
