#include "lookahead/env_io.hpp"

#include <cmath>
#include <fstream>

#include "lookahead/errors.hpp"

namespace lookahead {

using nlohmann::json;

namespace {

template <typename Scalar>
json dist_to_json(const JointDistribution<Scalar>& d) {
  json out;
  if (d.independent()) {
    out["kind"] = "product";
    out["marginals"] = json::array();
    for (const auto& m : d.marginals()) {
      out["marginals"].push_back({{"values", m.values}, {"probs", m.probs}});
    }
  } else {
    out["kind"] = "joint";
    out["atoms"] = json::array();
    for (const auto& atom : d.atoms()) {
      std::vector<Scalar> outcome(atom.outcome.data(), atom.outcome.data() + atom.outcome.size());
      out["atoms"].push_back({{"weight", atom.weight}, {"outcome", outcome}});
    }
  }
  return out;
}

void renormalize(std::vector<double>& weights, const std::string& where) {
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw InputError(where + ": negative weight");
    total += w;
  }
  if (std::abs(total - 1.0) > kRenormalizeTolerance) {
    throw InputError(where + ": weights sum to " + std::to_string(total));
  }
  if (std::abs(total - 1.0) <= kWeightTolerance) return;
  for (double& w : weights) w /= total;
}

template <typename Scalar>
JointDistribution<Scalar> dist_from_json(const json& doc, int arity, const std::string& where) {
  const auto kind = doc.at("kind").get<std::string>();
  if (kind == "product") {
    std::vector<typename JointDistribution<Scalar>::Marginal> marginals;
    for (const auto& m : doc.at("marginals")) {
      typename JointDistribution<Scalar>::Marginal marginal{
          m.at("values").get<std::vector<Scalar>>(), m.at("probs").get<std::vector<double>>()};
      renormalize(marginal.probs, where);
      marginals.push_back(std::move(marginal));
    }
    if (static_cast<int>(marginals.size()) != arity) throw InputError(where + ": wrong arity");
    return JointDistribution<Scalar>::product(std::move(marginals));
  }
  if (kind == "joint") {
    std::vector<typename JointDistribution<Scalar>::Atom> atoms;
    std::vector<double> weights;
    for (const auto& a : doc.at("atoms")) {
      const auto outcome = a.at("outcome").get<std::vector<Scalar>>();
      if (static_cast<int>(outcome.size()) != arity) throw InputError(where + ": wrong arity");
      typename JointDistribution<Scalar>::Outcome v(arity);
      for (int i = 0; i < arity; ++i) v(i) = outcome[static_cast<std::size_t>(i)];
      atoms.push_back({0.0, std::move(v)});
      weights.push_back(a.at("weight").get<double>());
    }
    renormalize(weights, where);
    for (std::size_t i = 0; i < atoms.size(); ++i) atoms[i].weight = weights[i];
    return JointDistribution<Scalar>::joint(std::move(atoms));
  }
  throw InputError(where + ": unknown kind '" + kind + "'");
}

}  // namespace

json mdp_to_json(const TabularLookaheadMdp& mdp) {
  json doc;
  doc["S"] = mdp.num_states();
  doc["A"] = mdp.num_actions();
  doc["H"] = mdp.horizon();
  doc["initial_states"] = mdp.initial_states();
  doc["rewards"] = json::array();
  doc["transitions"] = json::array();
  for (int h = 0; h < mdp.horizon(); ++h) {
    json rs = json::array();
    json ts = json::array();
    for (int s = 0; s < mdp.num_states(); ++s) {
      rs.push_back(dist_to_json(mdp.rewards(h, s)));
      ts.push_back(dist_to_json(mdp.transitions(h, s)));
    }
    doc["rewards"].push_back(std::move(rs));
    doc["transitions"].push_back(std::move(ts));
  }
  return doc;
}

TabularLookaheadMdp mdp_from_json(const json& doc) {
  try {
    const int S = doc.at("S").get<int>();
    const int A = doc.at("A").get<int>();
    const int H = doc.at("H").get<int>();
    if (S < 1 || A < 1 || H < 1) throw InputError("S, A, H must be positive");
    const auto& rewards = doc.at("rewards");
    const auto& transitions = doc.at("transitions");
    if (rewards.size() != static_cast<std::size_t>(H) ||
        transitions.size() != static_cast<std::size_t>(H)) {
      throw InputError("rewards/transitions must have H rows");
    }
    std::vector<RewardDistribution> R;
    std::vector<StateDistribution> P;
    for (int h = 0; h < H; ++h) {
      const auto& rrow = rewards.at(static_cast<std::size_t>(h));
      const auto& trow = transitions.at(static_cast<std::size_t>(h));
      if (rrow.size() != static_cast<std::size_t>(S) || trow.size() != static_cast<std::size_t>(S)) {
        throw InputError("each rewards/transitions row must have S entries");
      }
      for (int s = 0; s < S; ++s) {
        const auto where = "(h=" + std::to_string(h) + ", s=" + std::to_string(s) + ")";
        R.push_back(dist_from_json<double>(rrow.at(static_cast<std::size_t>(s)), A, "rewards" + where));
        P.push_back(dist_from_json<int>(trow.at(static_cast<std::size_t>(s)), A, "transitions" + where));
      }
    }
    std::vector<int> initial{0};
    if (doc.contains("initial_states")) initial = doc.at("initial_states").get<std::vector<int>>();
    return TabularLookaheadMdp(S, A, H, std::move(R), std::move(P), std::move(initial));
  } catch (const json::exception& e) {
    throw InputError(std::string("environment document: ") + e.what());
  } catch (const ContractError& e) {
    throw InputError(std::string("environment document: ") + e.what());
  }
}

TabularLookaheadMdp load_mdp(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw InputError(path.string() + ": " + e.what());
  }
  return mdp_from_json(doc);
}

void save_mdp(const TabularLookaheadMdp& mdp, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  out << mdp_to_json(mdp).dump(1) << "\n";
}

}  // namespace lookahead
