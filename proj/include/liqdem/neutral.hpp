#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "liqdem/equilibrium.hpp"
#include "liqdem/model.hpp"
#include "liqdem/outcome.hpp"

namespace liqdem {

// State-symmetric profile compressed to a vote allocation V (v_i = votes
// voter i ends up holding; delegators hold 0) and the set X of holders who
// abstain with everything they hold.
struct NeutralProfile {
  std::vector<int> V;
  std::vector<int> X;  // voter ids, ascending
  std::vector<std::pair<int, int>> delegation_realization;  // delegator -> target
};

// Concrete LD profile realizing (V, X): delegators are assigned to vote
// recipients lowest-index-first; holders vote sincerely unless in X.
StrategyProfile profile_from_vx(const Committee& committee,
                                const std::vector<int>& V,
                                const std::vector<int>& X);

// True iff every voter's strategy is state-symmetric: sincere voting,
// unconditional abstention, or unconditional delegation to a fixed voter
// (under RD also the sincere analogue d_a* at signal a / d_b* at signal b).
bool is_neutral(const Mechanism& mechanism, const StrategyProfile& profile);

// (V, X) classification of a neutral LD/DD profile; nullopt when the
// profile is not neutral or contains a delegation cycle.
std::optional<NeutralProfile> vx_of_profile(const Committee& committee,
                                            const StrategyProfile& profile);

struct NeutralSearchOptions {
  bool check_equilibrium = true;
  long long candidate_cap = 20000000;
};

struct BestNeutralResult {
  NeutralProfile neutral;
  StrategyProfile profile;
  EvalReport report;
  bool equilibrium = false;
};

// Exact argmax of p_correct over all neutral profiles, enumerated
// canonically up to permutation of same-type voters.
BestNeutralResult best_neutral_search(const Committee& committee,
                                      const Mechanism& mechanism,
                                      const NeutralSearchOptions& options = {});

struct Prop2Result {
  StrategyProfile profile;
  NeutralProfile kernel;  // unresponsive voters carry v=1 outside X
  double scale_k = 0;
  std::vector<int> expert_votes;  // held votes per expert, committee order
  double p_correct = 0;
  double first_best = 0;
  bool certificate = false;  // p_correct == first-best of the expert bench
};

// Committee of experts (independents, q > 0.5), uninformed independents
// (q = 0.5) and partisans at prior 0.5 with n_A >= n_B. Builds the profile
// where n_A - n_B uninformed vote unresponsively B, floor(k w*(i)) - 1
// uninformed delegate to each expert i, the rest abstain. When `scale` is
// absent, picks the scale minimizing total expert votes subject to the
// integer allocation reproducing every first-best comparison.
Prop2Result prop2_construct(const Committee& committee,
                            std::optional<double> scale = std::nullopt);

// Single expert (precision r) among common-precision nonexperts, N odd:
// min{floor(w) - 1, (N-1)/2} nonexperts delegate to the expert, where w is
// the expert's weight in nonexpert units; everyone else sincere.
NeutralProfile prop3_predict(const Committee& committee);

// Several experts over a common nonexpert precision: expert i receives
// floor(w_i) - 1 delegators; everyone else sincere.
NeutralProfile prop4_predict(const Committee& committee);

}  // namespace liqdem
