#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>

#include "helpers.hpp"
#include "liqdem/neutral.hpp"
#include "liqdem/np_weights.hpp"
#include "liqdem/scenario.hpp"

using namespace liqdem;
using liqdem::testing::load_bundled;
using liqdem::testing::make_committee;
using liqdem::testing::single_expert;
using liqdem::testing::uniform_committee;

TEST_CASE("profile_from_vx realizes the allocation lowest-index-first") {
  Committee c = uniform_committee(5, 0.6);
  // voter 1 holds 3 votes, voter 4 holds 1 vote and abstains, 5 holds 1
  StrategyProfile p = profile_from_vx(c, {3, 0, 0, 1, 1}, {4});
  CHECK(p[0] == sincere());
  CHECK(p[1] == always_delegate(1));
  CHECK(p[2] == always_delegate(1));
  CHECK(p[3] == always_abstain());
  CHECK(p[4] == sincere());
}

TEST_CASE("profile_from_vx rejects malformed allocations") {
  Committee c = uniform_committee(3, 0.6);
  CHECK_THROWS_AS(profile_from_vx(c, {1, 1}, {}), std::invalid_argument);
  CHECK_THROWS_AS(profile_from_vx(c, {2, 2, 0}, {}), std::invalid_argument);
  CHECK_THROWS_AS(profile_from_vx(c, {-1, 2, 2}, {}), std::invalid_argument);
  CHECK_THROWS_AS(profile_from_vx(c, {2, 0, 1}, {2}), std::invalid_argument);
  CHECK_THROWS_AS(profile_from_vx(c, {2, 0, 1}, {4}), std::invalid_argument);
}

TEST_CASE("is_neutral recognizes state-symmetric play only") {
  Mechanism ld = Mechanism::ld();
  CHECK(is_neutral(ld, {sincere(), always_abstain(), always_delegate(1)}));
  // signal-contingent delegation is not neutral
  CHECK_FALSE(is_neutral(ld, {sincere(), {Action::delegate(1), Action::vote_b()}, sincere()}));
  // unresponsive one-sided voting is not neutral
  CHECK_FALSE(is_neutral(ld, {always_vote(Alternative::A), sincere(), sincere()}));
  // under RD the mechanical-representative analogue of sincerity is neutral
  Mechanism rd = Mechanism::rd({1});
  CHECK(is_neutral(rd, {sincere(), rep_sincere(), rep_sincere()}));
  CHECK_FALSE(is_neutral(rd, {sincere(), {Action::delegate(kRepB), Action::delegate(kRepA)}, rep_sincere()}));
}

TEST_CASE("the appendix profile is better than every neutral one and is not neutral") {
  Scenario sc = load_bundled("nonneutral_best");
  StrategyProfile p = build_profile(sc);
  CHECK_FALSE(is_neutral(sc.mechanism, p));
  CHECK_FALSE(vx_of_profile(sc.committee, p).has_value());
  BestNeutralResult best = best_neutral_search(sc.committee, sc.mechanism);
  CHECK(best.report.p_correct == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(evaluate_profile(sc.committee, sc.mechanism, p).p_correct >
        best.report.p_correct + 1e-6);
}

TEST_CASE("vx classification round-trips through the realized profile") {
  Committee c = uniform_committee(5, 0.6);
  std::vector<int> V = {3, 0, 0, 1, 1}, X = {4};
  StrategyProfile p = profile_from_vx(c, V, X);
  auto vx = vx_of_profile(c, p);
  REQUIRE(vx.has_value());
  CHECK(vx->V == V);
  CHECK(vx->X == X);
  // cyclic delegation cannot be classified
  StrategyProfile cyc = {always_delegate(2), always_delegate(1), sincere(),
                         sincere(), sincere()};
  CHECK_FALSE(vx_of_profile(c, cyc).has_value());
}

TEST_CASE("single-expert delegation count follows the weight formula") {
  // weight below 2: nobody delegates
  NeutralProfile low = prop3_predict(single_expert(5, 0.6, 0.63));
  CHECK(low.V == std::vector<int>{1, 1, 1, 1, 1});
  // strong expert capped by the majority bound (N-1)/2
  NeutralProfile strong = prop3_predict(single_expert(5, 0.6, 0.95));
  CHECK(strong.V[4] == 3);
  CHECK(std::accumulate(strong.V.begin(), strong.V.end(), 0) == 5);
  // perfect expert gets the full cap
  NeutralProfile perfect = prop3_predict(single_expert(9, 0.6, 1.0));
  CHECK(perfect.V[8] == 5);
  // interior case: w(0.7 over 0.6) ~ 2.09 so exactly one delegator
  NeutralProfile mid = prop3_predict(single_expert(9, 0.6, 0.7));
  CHECK(mid.V[8] == 2);
  CHECK_THROWS_AS(prop3_predict(single_expert(4, 0.6, 0.7)),
                  std::invalid_argument);
}

TEST_CASE("the delegation count is independent of committee size when uncapped") {
  CHECK(prop3_predict(single_expert(7, 0.6, 0.7)).V[6] ==
        prop3_predict(single_expert(9, 0.6, 0.7)).V[8]);
  CHECK(prop3_predict(single_expert(11, 0.6, 0.7)).V[10] == 2);
}

TEST_CASE("several experts each attract floor(w)-1 delegators") {
  Committee c = make_committee(
      0.5, {{'I', 0.8}, {'I', 0.7}, {'I', 0.65}, {'I', 0.6}, {'I', 0.6},
            {'I', 0.6}, {'I', 0.6}, {'I', 0.6}, {'I', 0.6}});
  NeutralProfile p = prop4_predict(c);
  CHECK(p.V[0] == 3);  // w(0.8) ~ 3.419
  CHECK(p.V[1] == 2);  // w(0.7) ~ 2.090
  CHECK(p.V[2] == 1);  // w(0.65) ~ 1.527
  CHECK(std::accumulate(p.V.begin(), p.V.end(), 0) == 9);
}

TEST_CASE("single-expert prediction is optimal among neutral profiles") {
  NeutralSearchOptions opts;
  opts.check_equilibrium = false;
  for (int n : {5, 7, 9}) {
    for (double q : {0.55, 0.6, 0.65}) {
      for (double r = q + 0.05; r < 0.951; r += 0.05) {
        Committee c = single_expert(n, q, r);
        NeutralProfile predicted = prop3_predict(c);
        StrategyProfile realized = profile_from_vx(c, predicted.V, predicted.X);
        double via_formula =
            evaluate_profile(c, Mechanism::ld(), realized).p_correct;
        BestNeutralResult best = best_neutral_search(c, Mechanism::ld(), opts);
        REQUIRE_MESSAGE(
            via_formula == doctest::Approx(best.report.p_correct).epsilon(1e-12),
            "n=" << n << " q=" << q << " r=" << r);
      }
    }
  }
}

TEST_CASE("frozen value: the n=9 single-expert optimum") {
  Scenario sc = load_bundled("single_expert_n9");
  BestNeutralResult ld = best_neutral_search(sc.committee, Mechanism::ld());
  CHECK(ld.report.p_correct == doctest::Approx(0.758592).epsilon(1e-9));
  CHECK(ld.neutral.V[8] == 2);
  CHECK(ld.equilibrium);
  BestNeutralResult dd = best_neutral_search(sc.committee, Mechanism::dd());
  CHECK(dd.report.p_correct == doctest::Approx(0.75665664).epsilon(1e-9));
  CHECK(ld.report.p_correct > dd.report.p_correct + 1e-6);
}

TEST_CASE("the expert never abstains in an optimal single-expert profile") {
  for (double r : {0.65, 0.75, 0.9}) {
    Committee c = single_expert(7, 0.6, r);
    BestNeutralResult best = best_neutral_search(c, Mechanism::ld());
    int expert = 7;
    CHECK(best.neutral.V[expert - 1] >= 1);
    for (int x : best.neutral.X) CHECK(x != expert);
  }
}

TEST_CASE("best neutral profiles of common-interest committees are equilibria") {
  for (const char* name : {"trio_uniform", "quad_perfect_expert"}) {
    Scenario sc = load_bundled(name);
    BestNeutralResult best = best_neutral_search(sc.committee, sc.mechanism);
    CHECK_MESSAGE(best.equilibrium, name);
  }
}

TEST_CASE("dd neutral search only considers single-vote sincere or abstaining roles") {
  Committee c = uniform_committee(4, 0.6);
  BestNeutralResult best = best_neutral_search(c, Mechanism::dd());
  for (int v : best.neutral.V) CHECK(v <= 1);
  CHECK(best.neutral.delegation_realization.empty());
}

TEST_CASE("rd neutral search routes non-representatives through the mechanical pair") {
  Scenario sc = load_bundled("perfect_expert_committee");
  Mechanism rd = Mechanism::rd(sc.rd_sets.front());
  BestNeutralResult best = best_neutral_search(sc.committee, rd);
  CHECK(best.report.p_correct == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(is_neutral(rd, best.profile));
}

TEST_CASE("integer vote assignment reproducing first best on the four-expert bench") {
  Scenario sc = load_bundled("four_expert_bench");
  Prop2Result r = prop2_construct(sc.committee);
  CHECK(r.expert_votes == std::vector<int>{3, 2, 1, 1});
  CHECK(r.certificate);
  CHECK(r.p_correct == doctest::Approx(r.first_best).epsilon(1e-12));
  CHECK(r.p_correct == doctest::Approx(0.821).epsilon(5e-4));
  // a larger valid scale also reproduces first best, with more delegators
  Committee padded = sc.committee;
  for (int i = 0; i < 8; ++i) padded.voters.push_back({Preference::Independent, 0.5});
  Prop2Result scaled = prop2_construct(padded, 2.0 / optimal_weight(0.6));
  CHECK(scaled.certificate);
  CHECK(scaled.p_correct == doctest::Approx(r.p_correct).epsilon(1e-12));
}

TEST_CASE("the construction reports how many uninformed voters it needs") {
  Scenario sc = load_bundled("four_expert_bench");
  Committee c = sc.committee;
  c.voters.pop_back();  // drop one uninformed voter
  CHECK_THROWS_WITH_AS(prop2_construct(c), doctest::Contains("at least"),
                       std::invalid_argument);
}

TEST_CASE("prop2 rejects unbalanced or degenerate committees") {
  Committee biased = make_committee(0.6, {{'I', 0.8}, {'I', 0.5}});
  CHECK_THROWS_AS(prop2_construct(biased), std::invalid_argument);
  Committee perfect = make_committee(0.5, {{'I', 1.0}, {'I', 0.5}});
  CHECK_THROWS_AS(prop2_construct(perfect), std::invalid_argument);
  Committee partisan = make_committee(
      0.5, {{'B', 0.5}, {'A', 0.5}, {'A', 0.5}, {'A', 0.5}, {'I', 0.8}, {'I', 0.5}});
  // n_A - n_B = 2 unresponsive votes are needed but only one voter is uninformed
  CHECK_THROWS_WITH_AS(prop2_construct(partisan), doctest::Contains("at least"),
                       std::invalid_argument);
}

TEST_CASE("neutral search caps are reported rather than silently truncated") {
  Committee big = uniform_committee(9, 0.6);
  NeutralSearchOptions opts;
  opts.candidate_cap = 1;
  CHECK_THROWS_AS(best_neutral_search(big, Mechanism::ld(), opts),
                  std::runtime_error);
}
