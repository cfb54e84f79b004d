#pragma once

#include <vector>

#include "liqdem/model.hpp"

namespace liqdem {

struct ResolvedBallots {
  int votes_a = 0;
  int votes_b = 0;
  int abstained = 0;
};

struct OutcomeDistribution {
  double p_a = 0.5;
  double p_b = 0.5;
};

struct EvalReport {
  double p_correct_given_a = 0;
  double p_correct_given_b = 0;
  double p_correct = 0;
  double p_majoritarian = 0;
  // P(A wins | state), needed for partisan utilities.
  double p_a_given_a = 0;
  double p_a_given_b = 0;
  std::vector<double> voter_utilities;
};

struct EvalOptions {
  int responsive_cap = 25;  // refuse exact enumeration beyond this
};

// Follows delegation chains to a terminal voter; votes held inside or
// delegated into a cycle are abstained. Under RD the mechanical
// representatives additionally cast one ballot each (one A, one B).
ResolvedBallots resolve(const std::vector<Action>& actions,
                        const Mechanism& mechanism);

OutcomeDistribution tally(const ResolvedBallots& ballots);

// Exact evaluation: enumerates the signal realizations of responsive voters
// per state; unresponsive voters contribute no enumeration branch.
EvalReport evaluate_profile(const Committee& committee,
                            const Mechanism& mechanism,
                            const StrategyProfile& profile,
                            const EvalOptions& options = {});

// The alternative(s) preferred ex post by the larger head-count of voters.
std::vector<Alternative> majoritarian_alternative(const Committee& committee,
                                                  State state);

}  // namespace liqdem
