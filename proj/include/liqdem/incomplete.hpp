#pragma once

#include <optional>
#include <vector>

#include "liqdem/model.hpp"
#include "liqdem/outcome.hpp"

namespace liqdem {

struct TypeAtom {
  Preference preference = Preference::Independent;
  double precision = 0.5;
  double probability = 0;
};

// Uniformly distributed precision on [lo, hi] for an independent type.
struct UniformSegment {
  double lo = 0.5, hi = 1.0;
  double probability = 0;
};

struct VoterDistribution {
  std::vector<TypeAtom> atoms;
  std::optional<UniformSegment> segment;
};

struct TypeDistribution {
  double prior = 0.5;
  std::vector<VoterDistribution> voters;

  int size() const { return static_cast<int>(voters.size()); }
  void validate() const;  // masses sum to 1 per voter, supports in range
};

// Piecewise-constant strategy over a precision segment: pieces[k] applies
// on [cutoffs[k-1], cutoffs[k]) with implicit end cutoffs lo and hi.
struct CutoffRule {
  std::vector<double> cutoffs;          // interior, nondecreasing
  std::vector<InterimStrategy> pieces;  // cutoffs.size() + 1 entries
};

// Full type-contingent plan of one voter.
struct ExAnteStrategy {
  std::vector<InterimStrategy> atom_strategies;  // one per atom
  std::optional<CutoffRule> segment_rule;
};

struct ExAnteReport {
  double p_correct = 0;
  double p_correct_given_a = 0, p_correct_given_b = 0;
  std::vector<double> voter_utilities;  // ex-ante, one per voter
};

struct ExAnteOptions {
  long long cell_cap = 2000000;
};

// Exact expectation over the type space. Continuous segments are handled by
// splitting at the cutoffs: within a piece the strategy is constant and the
// win probability is multilinear in each precision, so the uniform average
// equals evaluation at the piece midpoint.
ExAnteReport exante_utility(const TypeDistribution& distribution,
                            const Mechanism& mechanism,
                            const std::vector<ExAnteStrategy>& sigma,
                            const ExAnteOptions& options = {});

struct CutoffSolution {
  double cutoff = 0;
  bool boundary = false;  // no interior root; nearest support endpoint used
};

// Indifference cutoff of a nonexpert facing one expert of precision r and
// one other nonexpert uniform on [lo, hi] who delegates below the same
// cutoff: r (1-c)(1-mu(c)) = (1-r) c mu(c) with mu(c) = (c + hi) / 2.
CutoffSolution solve_campbell_cutoff(double r, double lo, double hi,
                                     double tol = 1e-6);

struct ThreePlayerResult {
  double no_delegation = 0;   // p_correct, everyone sincere
  double delegation_eq = 0;   // p_correct, uninformed 2 and 3 swap votes
  bool fie_certificate = false;  // correct w.p. 1 whenever 2,3 independent
                                 // and at least one of them informed
  double residual_p_correct = 0;  // both independent, both uninformed
};

// Three-player game: player 1 partisan (A or B, half-half); players 2 and 3
// each informed independent w.p. 0.5-x, uninformed independent w.p. 0.5-x
// and partisan for each party w.p. x.
ThreePlayerResult three_player_partisan_example(double x);

// Common-value transform with partisan types pinned to their unresponsive
// preferred action; equilibria correspond to undominated equilibria of the
// original game.
struct AuxiliaryGame {
  TypeDistribution distribution;
  Mechanism mechanism;
  // allowed[voter][atom]: strategy set of that type (singleton if pinned)
  std::vector<std::vector<std::vector<InterimStrategy>>> allowed;
};

AuxiliaryGame auxiliary_transform(const TypeDistribution& distribution,
                                  const Mechanism& mechanism);

struct AffineUtility {
  double slope = 0, intercept = 0;  // u(q) = slope * q + intercept
};

// Interim utility of an independent voter of precision q playing action y
// at her signal, against the others' ex-ante strategies:
// u(q) = q P(A wins | state a, y) + (1-q) P(B wins | state b, y).
AffineUtility interim_linearity_check(const TypeDistribution& distribution,
                                      const Mechanism& mechanism,
                                      const std::vector<ExAnteStrategy>& sigma,
                                      int voter, const Action& y);

struct BestCandidateResult {
  std::vector<int> choice;  // index into each voter's candidate list
  ExAnteReport report;
};

// Exhaustive argmax of p_correct over explicit per-voter candidate lists of
// ex-ante strategies; ties resolved toward the lowest indices.
BestCandidateResult best_threshold_search(
    const TypeDistribution& distribution, const Mechanism& mechanism,
    const std::vector<std::vector<ExAnteStrategy>>& candidates,
    const ExAnteOptions& options = {});

}  // namespace liqdem
