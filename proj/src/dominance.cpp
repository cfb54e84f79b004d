#include "liqdem/dominance.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "liqdem/outcome.hpp"

namespace liqdem {

Prop5Conditions check_prop5(const Committee& committee) {
  Prop5Conditions c;
  c.counts = classify_voters(committee);
  int imbalance = std::abs(c.counts.n_A - c.counts.n_B);
  c.n_e_ok = c.counts.n_e >= 1;
  c.n_U_ok = c.counts.n_U >= c.counts.n_e + imbalance + 1;
  c.pivotality_ok =
      2 * std::max(c.counts.n_e + c.counts.n_A, c.counts.n_e + c.counts.n_B) <=
      committee.size();
  return c;
}

Prop5Suite run_prop5_suite(const Committee& committee,
                           const std::vector<std::vector<int>>& rd_sets,
                           const IEWDSOptions& options) {
  Prop5Suite suite;
  suite.conditions = check_prop5(committee);
  suite.ld = iewds(committee, Mechanism::ld(), options);
  suite.dd = iewds(committee, Mechanism::dd(), options);
  for (const std::vector<int>& reps : rd_sets)
    suite.rd.push_back({reps, iewds(committee, Mechanism::rd(reps), options)});
  return suite;
}

namespace {

bool profile_efficient(const Committee& committee,
                       const StrategyProfile& profile) {
  EvalReport report = evaluate_profile(committee, Mechanism::dd(), profile);
  return report.p_correct_given_a > 1.0 - 1e-12 &&
         report.p_correct_given_b > 1.0 - 1e-12;
}

Prop6Witness make_witness(const Committee& committee, std::string label,
                          StrategyProfile profile) {
  Prop6Witness w;
  w.label = std::move(label);
  w.equilibrium =
      is_equilibrium(committee, Mechanism::dd(), profile, &w.deviation);
  w.efficient = profile_efficient(committee, profile);
  w.profile = std::move(profile);
  return w;
}

}  // namespace

Prop6Result prop6_equilibria(const Committee& committee) {
  const int n = committee.size();
  VoterCounts counts = classify_voters(committee);
  int imbalance = std::abs(counts.n_A - counts.n_B);
  Alternative minority =
      counts.n_A >= counts.n_B ? Alternative::B : Alternative::A;

  std::vector<int> perfect, imperfect;
  StrategyProfile base(n);
  for (int i = 1; i <= n; ++i) {
    const VoterType& t = committee.voter(i);
    if (t.preference == Preference::PartisanA) base[i - 1] = always_vote(Alternative::A);
    else if (t.preference == Preference::PartisanB) base[i - 1] = always_vote(Alternative::B);
    else if (t.precision >= 1.0) { perfect.push_back(i); base[i - 1] = sincere(); }
    else imperfect.push_back(i);
  }
  if (counts.n_e < 1)
    throw std::invalid_argument(
        "prop6_equilibria requires a perfectly informed voter");
  if (static_cast<int>(imperfect.size()) < imbalance)
    throw std::invalid_argument(
        "prop6_equilibria: not enough imperfect independents to offset the "
        "partisan imbalance");

  Prop6Result result;

  StrategyProfile asym = base;
  for (std::size_t k = 0; k < imperfect.size(); ++k)
    asym[imperfect[k] - 1] = k < static_cast<std::size_t>(imbalance)
                                 ? always_vote(minority)
                                 : always_abstain();
  result.efficient_asymmetric =
      make_witness(committee, "efficient_asymmetric", std::move(asym));

  StrategyProfile abstain_all = base;
  for (int i : imperfect) abstain_all[i - 1] = always_abstain();
  result.all_abstain =
      make_witness(committee, "all_abstain", std::move(abstain_all));

  StrategyProfile all_a = base;
  for (int i = 1; i <= n; ++i)
    if (committee.voter(i).preference == Preference::Independent)
      all_a[i - 1] = always_vote(Alternative::A);
  result.all_unresponsive_a =
      make_witness(committee, "all_unresponsive_a", std::move(all_a));

  return result;
}

}  // namespace liqdem
