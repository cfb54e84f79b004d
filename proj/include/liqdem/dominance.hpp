#pragma once

#include <string>
#include <utility>
#include <vector>

#include "liqdem/equilibrium.hpp"
#include "liqdem/model.hpp"

namespace liqdem {

// Preconditions for dominance solvability with delegation:
// at least one perfectly informed voter, enough imperfect independents to
// neutralize the partisan imbalance, and no partisan-expert bloc that is a
// majority on its own.
struct Prop5Conditions {
  VoterCounts counts;
  bool n_e_ok = false;        // n_e >= 1
  bool n_U_ok = false;        // n_U >= n_e + |n_A - n_B| + 1
  bool pivotality_ok = false; // max(n_e + n_A, n_e + n_B) <= N / 2

  bool all() const { return n_e_ok && n_U_ok && pivotality_ok; }
};

Prop5Conditions check_prop5(const Committee& committee);

struct Prop5Suite {
  Prop5Conditions conditions;
  IEWDSReport ld;
  IEWDSReport dd;
  std::vector<std::pair<std::vector<int>, IEWDSReport>> rd;  // per J
};

// IEWDS verdicts for LD, DD and each supplied RD representative set.
Prop5Suite run_prop5_suite(const Committee& committee,
                           const std::vector<std::vector<int>>& rd_sets = {},
                           const IEWDSOptions& options = {});

struct Prop6Witness {
  std::string label;
  StrategyProfile profile;
  bool equilibrium = false;
  bool efficient = false;  // correct outcome w.p. 1 in both states
  DeviationWitness deviation;  // filled when not an equilibrium
};

struct Prop6Result {
  // |n_A - n_B| imperfect independents vote unresponsively for the minority
  // alternative, the rest abstain, perfect voters sincere.
  Prop6Witness efficient_asymmetric;
  // every imperfect independent abstains; efficient iff n_e > |n_A - n_B|
  Prop6Witness all_abstain;
  // every independent votes unresponsively for A; outcome A in both states
  Prop6Witness all_unresponsive_a;
};

// Direct-democracy witness profiles, each verified with is_equilibrium and
// classified by efficiency.
Prop6Result prop6_equilibria(const Committee& committee);

}  // namespace liqdem
