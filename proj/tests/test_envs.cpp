#include <cmath>

#include "doctest.h"
#include "lookahead/env_io.hpp"
#include "lookahead/envs.hpp"
#include "lookahead/errors.hpp"
#include "lookahead/extended_mdp.hpp"
#include "lookahead/planning.hpp"

using namespace lookahead;

TEST_CASE("fig1 prophet values") {
  const auto mdp = make_fig1_prophet(5, 20);
  CHECK(mdp.num_states() == 2);
  CHECK(std::abs(plan_no_lookahead(mdp).values(0, 0) - 0.0125) < 1e-15);
  CHECK(std::abs(plan_reward_lookahead(mdp).values(0, 0) - (1.0 - std::pow(79.0 / 80.0, 80.0))) < 1e-10);
  CHECK(plan_reward_lookahead(make_fig1_prophet(2, 1)).values(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
  for (int A = 2; A <= 6; ++A) {
    for (int H = 2; H <= 20; ++H) {
      const auto m = make_fig1_prophet(A, H);
      const double want = 1.0 - std::pow(1.0 - 1.0 / ((A - 1.0) * H), (A - 1.0) * H);
      const double got = plan_reward_lookahead(m).values(0, 0);
      CHECK(std::abs(got - want) < 1e-10);
      CHECK(got >= 1.0 - std::exp(-1.0));
      CHECK(std::abs(plan_no_lookahead(m).values(0, 0) - 1.0 / ((A - 1.0) * H)) < 1e-12);
    }
  }
  CHECK_THROWS_AS(make_fig1_prophet(1, 5), ContractError);
}

TEST_CASE("fig1 dynamics") {
  const auto mdp = make_fig1_prophet(3, 4);
  CHECK(mdp.kernel(0, 0)(0, 0) == 1.0);
  CHECK(mdp.kernel(0, 0)(1, 1) == 1.0);
  CHECK(mdp.kernel(0, 0)(2, 1) == 1.0);
  CHECK(mdp.kernel(0, 1).col(1).isOnes(0.0));
  CHECK(mdp.mean_rewards(0)(0, 0) == 0.0);
  CHECK(mdp.mean_rewards(0)(0, 2) == doctest::Approx(1.0 / 8.0));
  CHECK(mdp.mean_rewards(0).row(1).isZero(0.0));
}

TEST_CASE("transition chain separation") {
  const auto mdp = make_transition_chain(4, 12);
  CHECK(mdp.num_states() == 7);
  const double v = plan_no_lookahead(mdp).values(0, 0);
  const double vt = plan_transition_lookahead(mdp, PlannerMethod::exact_list()).values(0, 0);
  CHECK(vt >= 0.5);
  CHECK(vt / v > 10.0);
  CHECK_THROWS_AS(make_transition_chain(4, 11), ContractError);
  CHECK_THROWS_AS(make_transition_chain(4, 2), ContractError);
  CHECK_THROWS_AS(make_transition_chain(1, 4), ContractError);
}

TEST_CASE("short chain matches the extended-MDP oracle") {
  const auto mdp = make_transition_chain(2, 4);
  const auto t = plan_transition_lookahead(mdp).values;
  CHECK((t.values - oracle_extended_transition(mdp).values).cwiseAbs().maxCoeff() < 1e-12);
  // last chain state pays exactly 1, terminal pays nothing
  CHECK(t(3, 1) == 1.0);
  CHECK(t(0, 2) == 0.0);
}

TEST_CASE("prophet chain shape") {
  const auto mdp = make_prophet_chain(3, {{{0.2}, {1.0}}, {{0.7}, {1.0}}, {{0.4}, {1.0}}});
  CHECK(mdp.num_states() == 4);
  CHECK(mdp.num_actions() == 2);
  CHECK(mdp.horizon() == 3);
  CHECK(plan_reward_lookahead(mdp).values(0, 0) == doctest::Approx(0.7));
  CHECK_THROWS_AS(make_prophet_chain(2, {{{0.2}, {1.0}}}), ContractError);
}

TEST_CASE("random instances are deterministic and normalized") {
  for (bool independent : {true, false}) {
    const auto a = make_random_mdp(4, 3, 5, 99, independent);
    const auto b = make_random_mdp(4, 3, 5, 99, independent);
    CHECK(mdp_to_json(a).dump() == mdp_to_json(b).dump());
    CHECK(mdp_to_json(a).dump() != mdp_to_json(make_random_mdp(4, 3, 5, 100, independent)).dump());
    for (int h = 0; h < 5; ++h) {
      for (int s = 0; s < 4; ++s) {
        CHECK(a.transitions(h, s).independent() == independent);
        for (int act = 0; act < 3; ++act) {
          double total = 0.0;
          for (double p : a.transitions(h, s).marginal(act).probs) total += p;
          CHECK(std::abs(total - 1.0) < 1e-12);
        }
      }
    }
  }
  CHECK_THROWS_AS(make_random_mdp(11, 2, 2, 0), ContractError);
  CHECK_THROWS_AS(make_random_mdp(2, 7, 2, 0), ContractError);
}

TEST_CASE("env dispatcher") {
  EnvSpecParams p;
  p.family = "prophet-chain";
  p.n = 2;
  p.p = 0.5;
  CHECK(plan_reward_lookahead(make_env(p)).values(0, 0) == doctest::Approx(0.75));
  p.family = "nope";
  CHECK_THROWS_AS(make_env(p), InputError);
  p.family = "fig1-prophet";
  p.A = 1;
  CHECK_THROWS_AS(make_env(p), InputError);
}
