#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "helpers.hpp"
#include "liqdem/equilibrium.hpp"
#include "liqdem/scenario.hpp"

using namespace liqdem;
using liqdem::testing::load_bundled;
using liqdem::testing::make_committee;
using liqdem::testing::uniform_committee;

TEST_CASE("interim utility matches the profile evaluation") {
  Committee c = make_committee(0.5, {{'A', 0.5}, {'I', 0.6}, {'I', 0.6}});
  StrategyProfile p = {always_vote(Alternative::A), sincere(), sincere()};
  EvalReport r = evaluate_profile(c, Mechanism::dd(), p);
  CHECK(interim_utility(c, Mechanism::dd(), p, 1) ==
        doctest::Approx(r.voter_utilities[0]).epsilon(1e-15));
  CHECK(interim_utility(c, Mechanism::dd(), p, 2) ==
        doctest::Approx(r.voter_utilities[1]).epsilon(1e-15));
}

TEST_CASE("a never-pivotal voter is indifferent across all strategies") {
  Committee c = uniform_committee(3, 0.6);
  Mechanism ld = Mechanism::ld();
  StrategyProfile p = {always_vote(Alternative::A), always_vote(Alternative::A),
                       always_abstain()};
  auto br = best_responses(c, ld, p, 3);
  CHECK(br.size() == legal_strategies(3, ld, 3).size());
}

TEST_CASE("best responses exclude strategies that waste pivotality") {
  Committee c = uniform_committee(3, 0.6);
  Mechanism ld = Mechanism::ld();
  // opponent 2 sincere, opponent 3 abstains: voter 1 is pivotal on ties
  StrategyProfile p = {always_abstain(), sincere(), always_abstain()};
  auto br = best_responses(c, ld, p, 1);
  auto has = [&](const InterimStrategy& s) {
    return std::find(br.begin(), br.end(), s) != br.end();
  };
  CHECK(has(sincere()));
  CHECK(has(always_delegate(2)));
  CHECK_FALSE(has(always_vote(Alternative::A)));
  // sanity: the value at a best response equals sincere's value
  StrategyProfile best = p;
  best[0] = br.front();
  CHECK(interim_utility(c, ld, best, 1) == doctest::Approx(0.6).epsilon(1e-12));
}

TEST_CASE("a pile of delegations onto a perfect voter is an equilibrium") {
  Scenario sc = load_bundled("quad_perfect_expert");
  StrategyProfile p = {always_delegate(4), always_delegate(4),
                       always_delegate(4), sincere()};
  DeviationWitness w;
  CHECK(is_equilibrium(sc.committee, sc.mechanism, p, &w));
  CHECK(evaluate_profile(sc.committee, sc.mechanism, p).p_correct ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("all-sincere with a perfect voter present is not an equilibrium") {
  Scenario sc = load_bundled("quad_perfect_expert");
  StrategyProfile p(4, sincere());
  DeviationWitness w;
  CHECK_FALSE(is_equilibrium(sc.committee, sc.mechanism, p, &w));
  // the witness must reproduce its claimed gain
  StrategyProfile deviated = p;
  deviated[w.voter - 1] = w.better;
  double before = interim_utility(sc.committee, sc.mechanism, p, w.voter);
  double after = interim_utility(sc.committee, sc.mechanism, deviated, w.voter);
  CHECK(after - before == doctest::Approx(w.gain).epsilon(1e-9));
  CHECK(w.gain > kUtilityEps);
}

TEST_CASE("the over-delegation profile is an equilibrium despite being inefficient") {
  Scenario sc = load_bundled("example1_overdelegation");
  StrategyProfile p = build_profile(sc);
  CHECK(is_equilibrium(sc.committee, sc.mechanism, p));
}

TEST_CASE("iewds on the trio runs in the exact tier and its witnesses check out") {
  Scenario sc = load_bundled("trio_uniform");
  IEWDSReport r = iewds(sc.committee, sc.mechanism);
  CHECK_FALSE(r.budget_limited);
  CHECK(!r.eliminations.empty());
  for (const EliminationRecord& rec : r.eliminations) {
    const DominanceWitness& w = rec.witness;
    StrategyProfile at = w.strict_at;
    at[w.voter - 1] = w.dominated;
    double u_dominated = interim_utility(sc.committee, sc.mechanism, at, w.voter);
    at[w.voter - 1] = w.dominator;
    double u_dominator = interim_utility(sc.committee, sc.mechanism, at, w.voter);
    CHECK(u_dominator > u_dominated + kUtilityEps);
  }
  // survivor sets never empty
  for (const auto& set : r.survivors.sets) CHECK(!set.empty());
}

TEST_CASE("iewds flags an exhausted budget instead of deciding") {
  Scenario sc = load_bundled("quad_direct");
  IEWDSOptions opts;
  opts.dominance.tuple_budget = 1;
  opts.dominance.probe_budget = 1;
  opts.solvability_profile_cap = 1;
  IEWDSReport r = iewds(sc.committee, sc.mechanism, opts);
  CHECK(r.budget_limited);
  CHECK_FALSE(r.solvability_decided);
  CHECK_FALSE(r.solvable);
}

TEST_CASE("sequential elimination order is honoured and sound") {
  Scenario sc = load_bundled("quad_direct");
  IEWDSOptions opts;
  opts.simultaneous = false;
  opts.elimination_order = {4, 3, 2, 1};
  IEWDSReport seq = iewds(sc.committee, sc.mechanism, opts);
  IEWDSReport sim = iewds(sc.committee, sc.mechanism);
  CHECK(seq.solvability_decided == sim.solvability_decided);
  CHECK(seq.solvable == sim.solvable);
}

namespace {

double exhaustive_best(const Committee& c, const Mechanism& m) {
  int n = c.size();
  std::vector<std::vector<InterimStrategy>> sets;
  for (int i = 1; i <= n; ++i) sets.push_back(legal_strategies(i, m, n));
  std::vector<int> idx(n, 0);
  double best = -1;
  while (true) {
    StrategyProfile p(n);
    for (int i = 0; i < n; ++i) p[i] = sets[i][idx[i]];
    best = std::max(best, evaluate_profile(c, m, p).p_correct);
    int k = 0;
    while (k < n && ++idx[k] == static_cast<int>(sets[k].size())) idx[k++] = 0;
    if (k == n) break;
  }
  return best;
}

}  // namespace

TEST_CASE("best_equilibrium_search matches brute force on the trio") {
  Scenario sc = load_bundled("trio_uniform");
  BestEquilibriumResult r =
      best_equilibrium_search(sc.committee, sc.mechanism, SearchRestriction::Full);
  CHECK(r.report.p_correct ==
        doctest::Approx(exhaustive_best(sc.committee, sc.mechanism)).epsilon(1e-12));
  CHECK(r.equilibrium);
  CHECK(evaluate_profile(sc.committee, sc.mechanism, r.profile).p_correct ==
        doctest::Approx(r.report.p_correct).epsilon(1e-15));
}

TEST_CASE("the search cap error points at the neutral search") {
  Scenario sc = load_bundled("example1_overdelegation");
  CHECK_THROWS_WITH_AS(
      best_equilibrium_search(sc.committee, sc.mechanism),
      doctest::Contains("neutral"), std::exception);
}

TEST_CASE("partisans are pinned to their unresponsive preferred strategy") {
  CHECK(pinned_partisan_strategy(Preference::PartisanA, 1, Mechanism::dd()) ==
        always_vote(Alternative::A));
  CHECK(pinned_partisan_strategy(Preference::PartisanB, 1, Mechanism::ld()) ==
        always_vote(Alternative::B));
  Mechanism rd = Mechanism::rd({1, 2});
  CHECK(pinned_partisan_strategy(Preference::PartisanA, 1, rd) ==
        always_vote(Alternative::A));
  CHECK(pinned_partisan_strategy(Preference::PartisanA, 3, rd) ==
        always_delegate(kRepA));
  CHECK(pinned_partisan_strategy(Preference::PartisanB, 3, rd) ==
        always_delegate(kRepB));
}

TEST_CASE("restricted search pins partisans and still finds an equilibrium") {
  Scenario sc = load_bundled("five_with_partisans");
  BestEquilibriumResult r = best_equilibrium_search(sc.committee, sc.mechanism);
  CHECK(r.profile[0] == always_vote(Alternative::A));
  CHECK(r.profile[1] == always_vote(Alternative::B));
  // three sincere independents is the best the committee can do here
  double maj3 = 0.6 * 0.6 * 0.6 + 3 * 0.6 * 0.6 * 0.4;
  CHECK(r.report.p_correct == doctest::Approx(maj3).epsilon(1e-12));
  CHECK(r.equilibrium);
}

TEST_CASE("is_weakly_dominated rejects strategies outside the voter's set") {
  Scenario sc = load_bundled("trio_uniform");
  StrategySet sets = StrategySet::full(sc.committee, sc.mechanism);
  sets.sets[0] = {sincere(), always_abstain()};
  CHECK_THROWS_AS(is_weakly_dominated(sc.committee, sc.mechanism, 1,
                                      always_vote(Alternative::A), sets),
                  std::invalid_argument);
  DominanceCheck check = is_weakly_dominated(sc.committee, sc.mechanism, 1,
                                             always_abstain(), sets);
  CHECK(check.result == DominanceResult::Dominated);
  REQUIRE(check.witness.has_value());
  CHECK(check.witness->dominator == sincere());
}
