#pragma once

#include <optional>
#include <vector>

#include "liqdem/model.hpp"
#include "liqdem/outcome.hpp"

namespace liqdem {

constexpr double kUtilityEps = 1e-12;

struct StrategySet {
  std::vector<std::vector<InterimStrategy>> sets;  // one list per voter

  static StrategySet full(const Committee& committee,
                          const Mechanism& mechanism);
  long long opponent_tuples(int voter) const;  // clamped at a large sentinel
};

struct DominanceWitness {
  int voter = 0;
  InterimStrategy dominated;
  InterimStrategy dominator;
  StrategyProfile strict_at;  // opponents at which the dominator is strictly better
};

enum class DominanceResult { Dominated, NotDominated, Undecided };

struct DominanceOptions {
  long long tuple_budget = 200000;  // exact tier: max opponent tuples
  long long probe_budget = 20000;   // certificate tier: strictness probes
};

struct DominanceCheck {
  DominanceResult result = DominanceResult::Undecided;
  std::optional<DominanceWitness> witness;
};

struct VoterScan {
  bool exact = false;  // true when the full opponent product was enumerated
  std::vector<DominanceWitness> dominated;
};

// All weakly dominated strategies of one voter against the current sets.
// Quantification is over pure opponent profiles drawn from the sets. Runs
// the exact tier when the opponent product fits the budget, otherwise a
// sound vote-destination certificate that may leave strategies undecided.
VoterScan scan_dominated(const Committee& committee,
                         const Mechanism& mechanism, int voter,
                         const StrategySet& sets,
                         const DominanceOptions& options = {});

DominanceCheck is_weakly_dominated(const Committee& committee,
                                   const Mechanism& mechanism, int voter,
                                   const InterimStrategy& strategy,
                                   const StrategySet& sets,
                                   const DominanceOptions& options = {});

double interim_utility(const Committee& committee, const Mechanism& mechanism,
                       const StrategyProfile& profile, int voter);

// All exact maximizers of the voter's interim utility against the fixed
// opponent strategies in `profile` (the voter's own slot is ignored).
std::vector<InterimStrategy> best_responses(const Committee& committee,
                                            const Mechanism& mechanism,
                                            const StrategyProfile& profile,
                                            int voter);

struct DeviationWitness {
  int voter = 0;
  InterimStrategy better;
  double gain = 0;
};

bool is_equilibrium(const Committee& committee, const Mechanism& mechanism,
                    const StrategyProfile& profile,
                    DeviationWitness* witness = nullptr);

struct EliminationRecord {
  int round = 0;
  DominanceWitness witness;
};

struct IEWDSReport {
  std::vector<EliminationRecord> eliminations;
  StrategySet survivors;
  int rounds = 0;           // rounds in which something was eliminated
  bool budget_limited = false;
  bool solvable = false;
  bool solvability_decided = false;
  std::optional<EvalReport> solution_metrics;
};

struct IEWDSOptions {
  int max_rounds = 64;
  bool simultaneous = true;
  // Sequential mode: voters are scanned cyclically in this order and each
  // scanned voter's dominated strategies are removed immediately.
  std::vector<int> elimination_order;
  DominanceOptions dominance;
  long long solvability_profile_cap = 200000;
};

IEWDSReport iewds(const Committee& committee, const Mechanism& mechanism,
                  const IEWDSOptions& options = {});

enum class SearchRestriction { IndependentsOnlyFree, Full };

struct BestEquilibriumResult {
  StrategyProfile profile;
  EvalReport report;
  bool equilibrium = false;
};

// Exact argmax of p_correct over the product of the free voters' strategy
// sets; ties resolved toward the lowest lexicographic profile index.
BestEquilibriumResult best_equilibrium_search(
    const Committee& committee, const Mechanism& mechanism,
    SearchRestriction restriction = SearchRestriction::IndependentsOnlyFree,
    long long profile_cap = 3000000);

// Unresponsive preferred strategy of a partisan under the mechanism
// (vote under DD/LD or as a representative; route through the matching
// mechanical representative otherwise).
InterimStrategy pinned_partisan_strategy(Preference preference, int voter,
                                         const Mechanism& mechanism);

}  // namespace liqdem
