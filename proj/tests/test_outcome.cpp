#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "liqdem/outcome.hpp"
#include "liqdem/scenario.hpp"

using namespace liqdem;
using liqdem::testing::load_bundled;
using liqdem::testing::make_committee;
using liqdem::testing::single_expert;
using liqdem::testing::uniform_committee;

TEST_CASE("resolve follows delegation chains") {
  // 1 -> 2 -> 3 votes a, 4 votes b
  std::vector<Action> acts = {Action::delegate(2), Action::delegate(3),
                              Action::vote_a(), Action::vote_b()};
  ResolvedBallots r = resolve(acts, Mechanism::ld());
  CHECK(r.votes_a == 3);
  CHECK(r.votes_b == 1);
  CHECK(r.abstained == 0);
}

TEST_CASE("cycles abstain every vote flowing into them") {
  // 1 <-> 2 cycle, 3 -> 1 feeds the cycle, 4 votes a
  std::vector<Action> acts = {Action::delegate(2), Action::delegate(1),
                              Action::delegate(1), Action::vote_a()};
  ResolvedBallots r = resolve(acts, Mechanism::ld());
  CHECK(r.votes_a == 1);
  CHECK(r.votes_b == 0);
  CHECK(r.abstained == 3);
}

TEST_CASE("delegating to an abstainer abstains the vote") {
  std::vector<Action> acts = {Action::delegate(2), Action::abstain(),
                              Action::vote_b()};
  ResolvedBallots r = resolve(acts, Mechanism::ld());
  CHECK(r.votes_a == 0);
  CHECK(r.votes_b == 1);
  CHECK(r.abstained == 2);
}

TEST_CASE("mechanical representatives cast one ballot each") {
  Mechanism rd = Mechanism::rd({1, 2});
  // reps vote a,b; 3 routes to a*, 4 routes to b*, 5 abstains
  std::vector<Action> acts = {Action::vote_a(), Action::vote_b(),
                              Action::delegate(kRepA),
                              Action::delegate(kRepB), Action::abstain()};
  ResolvedBallots r = resolve(acts, rd);
  CHECK(r.votes_a == 3);  // rep 1 + routed 3 + mechanical a*
  CHECK(r.votes_b == 3);  // rep 2 + routed 4 + mechanical b*
  CHECK(r.abstained == 1);
}

TEST_CASE("rd with all committee members as representatives matches dd plus the mechanical pair") {
  Committee c = uniform_committee(3, 0.6);
  Mechanism rd = Mechanism::rd({1, 2, 3});
  StrategyProfile sincere_all(3, sincere());
  EvalReport via_rd = evaluate_profile(c, rd, sincere_all);
  EvalReport via_dd = evaluate_profile(c, Mechanism::dd(), sincere_all);
  // the mechanical ballots cancel, so all outcome metrics coincide
  CHECK(via_rd.p_correct == doctest::Approx(via_dd.p_correct).epsilon(1e-12));
  CHECK(via_rd.p_a_given_b == doctest::Approx(via_dd.p_a_given_b).epsilon(1e-12));
}

TEST_CASE("tally breaks ties at one half including the empty election") {
  CHECK(tally({0, 0, 4}).p_a == 0.5);
  CHECK(tally({2, 2, 0}).p_a == 0.5);
  CHECK(tally({3, 1, 0}).p_a == 1.0);
  CHECK(tally({1, 3, 0}).p_b == 1.0);
}

TEST_CASE("three sincere voters of precision 0.6") {
  Committee c = uniform_committee(3, 0.6);
  EvalReport r = evaluate_profile(c, Mechanism::dd(), {sincere(), sincere(), sincere()});
  // majority of three conditionally iid signals
  double expect = 0.6 * 0.6 * 0.6 + 3 * 0.6 * 0.6 * 0.4;
  CHECK(r.p_correct == doctest::Approx(expect).epsilon(1e-12));
  CHECK(r.p_correct_given_a == doctest::Approx(expect).epsilon(1e-12));
  CHECK(r.p_majoritarian == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("single sincere voter and the all-abstain profile") {
  Committee c = uniform_committee(3, 0.6);
  StrategyProfile dictator = {sincere(), always_abstain(), always_abstain()};
  CHECK(evaluate_profile(c, Mechanism::ld(), dictator).p_correct ==
        doctest::Approx(0.6).epsilon(1e-12));
  StrategyProfile nobody(3, always_abstain());
  CHECK(evaluate_profile(c, Mechanism::ld(), nobody).p_correct ==
        doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("frozen value: the over-delegation example evaluates to 0.72") {
  Scenario sc = load_bundled("example1_overdelegation");
  EvalReport r = evaluate_profile(sc.committee, sc.mechanism, build_profile(sc));
  CHECK(r.p_correct == doctest::Approx(0.72).epsilon(1e-12));
}

TEST_CASE("frozen value: the non-neutral five-voter profile evaluates to 0.80272") {
  Scenario sc = load_bundled("nonneutral_best");
  EvalReport r = evaluate_profile(sc.committee, sc.mechanism, build_profile(sc));
  CHECK(r.p_correct == doctest::Approx(0.80272).epsilon(1e-9));
}

TEST_CASE("responsive-voter cap is enforced") {
  Committee c = uniform_committee(30, 0.6);
  StrategyProfile p(30, sincere());
  CHECK_THROWS_AS(evaluate_profile(c, Mechanism::dd(), p), std::exception);
  // only responsive voters count against the cap
  Committee small = uniform_committee(4, 0.6);
  StrategyProfile mixed = {sincere(), sincere(), always_abstain(),
                           always_vote(Alternative::A)};
  EvalOptions tight;
  tight.responsive_cap = 2;
  CHECK_NOTHROW(evaluate_profile(small, Mechanism::dd(), mixed, tight));
  tight.responsive_cap = 1;
  CHECK_THROWS_AS(evaluate_profile(small, Mechanism::dd(), mixed, tight),
                  std::exception);
}

namespace {

// direct oracle: enumerate all signal vectors with their probabilities
EvalReport brute_force(const Committee& c, const Mechanism& m,
                       const StrategyProfile& profile) {
  int n = c.size();
  EvalReport out;
  out.voter_utilities.assign(n, 0.0);
  for (int wi = 0; wi < 2; ++wi) {
    State w = wi == 0 ? State::a : State::b;
    double pw = wi == 0 ? c.prior : 1 - c.prior;
    double p_a_wins = 0;
    for (int mask = 0; mask < (1 << n); ++mask) {
      double p = 1;
      std::vector<Action> acts(n);
      for (int i = 0; i < n; ++i) {
        bool match = (mask >> i) & 1;  // signal equals the state
        double q = c.voters[i].precision;
        p *= match ? q : 1 - q;
        State s = match ? w : (w == State::a ? State::b : State::a);
        acts[i] = profile[i].on(s);
      }
      if (p == 0) continue;
      p_a_wins += p * tally(resolve(acts, m)).p_a;
    }
    double p_correct_w = w == State::a ? p_a_wins : 1 - p_a_wins;
    if (wi == 0) {
      out.p_correct_given_a = p_correct_w;
      out.p_a_given_a = p_a_wins;
    } else {
      out.p_correct_given_b = p_correct_w;
      out.p_a_given_b = p_a_wins;
    }
    out.p_correct += pw * p_correct_w;
  }
  return out;
}

}  // namespace

TEST_CASE("exact evaluator agrees with the full-grid oracle on every three-voter profile") {
  Committee c = make_committee(0.45, {{'I', 0.7}, {'A', 0.6}, {'I', 0.55}});
  Mechanism ld = Mechanism::ld();
  auto s1 = legal_strategies(1, ld, 3);
  REQUIRE(s1.size() == 25);
  int checked = 0;
  for (const auto& a : legal_strategies(1, ld, 3))
    for (const auto& b : legal_strategies(2, ld, 3))
      for (const auto& d : legal_strategies(3, ld, 3)) {
        StrategyProfile p = {a, b, d};
        EvalReport fast = evaluate_profile(c, ld, p);
        EvalReport slow = brute_force(c, ld, p);
        REQUIRE(fast.p_correct == doctest::Approx(slow.p_correct).epsilon(1e-12));
        REQUIRE(fast.p_a_given_a == doctest::Approx(slow.p_a_given_a).epsilon(1e-12));
        REQUIRE(fast.p_a_given_b == doctest::Approx(slow.p_a_given_b).epsilon(1e-12));
        ++checked;
      }
  CHECK(checked == 25 * 25 * 25);
}

TEST_CASE("majoritarian alternative counts ex-post preferences by head") {
  // 2 A-partisans, 1 B-partisan, 2 independents: independents side with the state
  Committee c = make_committee(
      0.5, {{'A', 0.5}, {'A', 0.5}, {'B', 0.5}, {'I', 0.6}, {'I', 0.6}});
  auto in_a = majoritarian_alternative(c, State::a);
  REQUIRE(in_a.size() == 1);
  CHECK(in_a[0] == Alternative::A);
  auto in_b = majoritarian_alternative(c, State::b);
  // 2 partisans for A vs 1 partisan + 2 independents for B
  REQUIRE(in_b.size() == 1);
  CHECK(in_b[0] == Alternative::B);
  // perfectly split committee -> both alternatives
  Committee split = make_committee(0.5, {{'A', 0.5}, {'B', 0.5}});
  CHECK(majoritarian_alternative(split, State::a).size() == 2);
}

TEST_CASE("p_majoritarian tracks the head-count winner not the state") {
  // A-partisan majority: the majoritarian alternative is A in both states
  Committee c = make_committee(0.5, {{'A', 0.5}, {'A', 0.5}, {'I', 0.9}});
  StrategyProfile p = {always_vote(Alternative::A), always_vote(Alternative::A),
                       sincere()};
  EvalReport r = evaluate_profile(c, Mechanism::dd(), p);
  CHECK(r.p_majoritarian == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.p_correct == doctest::Approx(0.5).epsilon(1e-12));
}
