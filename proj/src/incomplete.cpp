#include "liqdem/incomplete.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "liqdem/equilibrium.hpp"

namespace liqdem {

void TypeDistribution::validate() const {
  if (!(prior > 0.0 && prior < 1.0))
    throw std::invalid_argument("prior must lie in (0, 1)");
  for (std::size_t v = 0; v < voters.size(); ++v) {
    std::string who = "voter " + std::to_string(v + 1);
    double mass = 0;
    for (const TypeAtom& atom : voters[v].atoms) {
      if (!(atom.precision >= 0.5 && atom.precision <= 1.0))
        throw std::invalid_argument(who + ": atom precision outside [0.5, 1]");
      if (!(atom.probability >= 0.0))
        throw std::invalid_argument(who + ": negative atom probability");
      mass += atom.probability;
    }
    if (voters[v].segment) {
      const UniformSegment& seg = *voters[v].segment;
      if (!(seg.lo >= 0.5 && seg.hi <= 1.0 && seg.lo <= seg.hi))
        throw std::invalid_argument(who + ": segment support outside [0.5, 1]");
      if (!(seg.probability >= 0.0))
        throw std::invalid_argument(who + ": negative segment probability");
      mass += seg.probability;
    }
    if (std::abs(mass - 1.0) > 1e-9)
      throw std::invalid_argument(who + ": type masses must sum to 1");
  }
}

namespace {

struct Cell {
  double mass = 0;
  VoterType type;
  InterimStrategy strategy;
};

std::vector<Cell> voter_cells(const VoterDistribution& dist,
                              const ExAnteStrategy& sigma, int voter) {
  std::string who = "voter " + std::to_string(voter);
  if (sigma.atom_strategies.size() != dist.atoms.size())
    throw std::invalid_argument(who + ": one strategy per atom required");
  if (dist.segment.has_value() != sigma.segment_rule.has_value())
    throw std::invalid_argument(who +
                                ": segment and cutoff rule must come together");
  std::vector<Cell> cells;
  for (std::size_t k = 0; k < dist.atoms.size(); ++k) {
    const TypeAtom& atom = dist.atoms[k];
    if (atom.probability == 0.0) continue;
    cells.push_back({atom.probability,
                     {atom.preference, atom.precision},
                     sigma.atom_strategies[k]});
  }
  if (dist.segment) {
    const UniformSegment& seg = *dist.segment;
    const CutoffRule& rule = *sigma.segment_rule;
    if (rule.pieces.size() != rule.cutoffs.size() + 1)
      throw std::invalid_argument(who + ": cutoff rule needs one more piece "
                                        "than cutoffs");
    double prev = seg.lo;
    for (std::size_t k = 0; k <= rule.cutoffs.size(); ++k) {
      double next = k < rule.cutoffs.size() ? rule.cutoffs[k] : seg.hi;
      if (next < prev - 1e-12 || next > seg.hi + 1e-12)
        throw std::invalid_argument(who + ": cutoffs must be nondecreasing "
                                          "within the segment support");
      next = std::min(std::max(next, prev), seg.hi);
      double width = next - prev;
      if (width > 0 && seg.probability > 0) {
        // uniform density: piece mass and conditional-mean precision.
        // The win probability is multilinear in the precision, so the
        // midpoint evaluates the piece average exactly.
        cells.push_back({seg.probability * width / (seg.hi - seg.lo),
                         {Preference::Independent, (prev + next) / 2},
                         rule.pieces[k]});
      }
      prev = next;
    }
  }
  if (cells.empty()) throw std::invalid_argument(who + ": no type mass");
  return cells;
}

// Enumerates the product of per-voter cells, calling fn(mass, committee,
// profile) at each leaf.
template <typename Fn>
void for_each_cell_combo(double prior,
                         const std::vector<std::vector<Cell>>& cells,
                         long long cell_cap, Fn&& fn) {
  const int n = static_cast<int>(cells.size());
  long long combos = 1;
  for (const auto& c : cells) {
    combos *= static_cast<long long>(c.size());
    if (combos > cell_cap)
      throw std::runtime_error("type-space cell enumeration cap exceeded");
  }
  Committee committee;
  committee.prior = prior;
  committee.voters.resize(n);
  StrategyProfile profile(n);
  std::vector<int> idx(n, 0);
  for (long long t = 0; t < combos; ++t) {
    double mass = 1.0;
    for (int i = 0; i < n; ++i) {
      const Cell& cell = cells[i][idx[i]];
      mass *= cell.mass;
      committee.voters[i] = cell.type;
      profile[i] = cell.strategy;
    }
    if (mass > 0) fn(mass, committee, profile);
    for (int i = 0; i < n; ++i) {
      if (++idx[i] < static_cast<int>(cells[i].size())) break;
      idx[i] = 0;
    }
  }
}

std::vector<std::vector<Cell>> all_cells(
    const TypeDistribution& distribution,
    const std::vector<ExAnteStrategy>& sigma) {
  distribution.validate();
  if (sigma.size() != distribution.voters.size())
    throw std::invalid_argument("one ex-ante strategy per voter required");
  std::vector<std::vector<Cell>> cells;
  for (int i = 0; i < distribution.size(); ++i)
    cells.push_back(voter_cells(distribution.voters[i], sigma[i], i + 1));
  return cells;
}

}  // namespace

ExAnteReport exante_utility(const TypeDistribution& distribution,
                            const Mechanism& mechanism,
                            const std::vector<ExAnteStrategy>& sigma,
                            const ExAnteOptions& options) {
  ExAnteReport report;
  report.voter_utilities.assign(distribution.size(), 0.0);
  for_each_cell_combo(
      distribution.prior, all_cells(distribution, sigma), options.cell_cap,
      [&](double mass, const Committee& committee,
          const StrategyProfile& profile) {
        EvalReport eval = evaluate_profile(committee, mechanism, profile);
        report.p_correct += mass * eval.p_correct;
        report.p_correct_given_a += mass * eval.p_correct_given_a;
        report.p_correct_given_b += mass * eval.p_correct_given_b;
        for (int i = 0; i < committee.size(); ++i)
          report.voter_utilities[i] += mass * eval.voter_utilities[i];
      });
  return report;
}

CutoffSolution solve_campbell_cutoff(double r, double lo, double hi,
                                     double tol) {
  if (!(r >= 0.5 && r <= 1.0))
    throw std::invalid_argument("expert precision must lie in [0.5, 1]");
  if (!(lo >= 0.5 && lo <= hi && hi <= 1.0))
    throw std::invalid_argument("support must satisfy 0.5 <= lo <= hi <= 1");
  auto f = [&](double c) {
    double mu = (c + hi) / 2;  // mean precision above the cutoff
    return r * (1 - c) * (1 - mu) - (1 - r) * c * mu;
  };
  if (hi - lo <= tol) return {lo, false};
  double flo = f(lo), fhi = f(hi);
  if (flo == 0) return {lo, false};
  if (fhi == 0) return {hi, false};
  if ((flo > 0) == (fhi > 0))
    return {std::abs(flo) <= std::abs(fhi) ? lo : hi, true};
  double a = lo, b = hi;
  while (b - a > tol) {
    double mid = (a + b) / 2;
    if ((f(mid) > 0) == (flo > 0)) a = mid;
    else b = mid;
  }
  return {(a + b) / 2, false};
}

ThreePlayerResult three_player_partisan_example(double x) {
  if (!(x >= 0.0 && x < 0.5))
    throw std::invalid_argument("x must lie in [0, 0.5)");

  TypeDistribution dist;
  dist.prior = 0.5;
  VoterDistribution p1;
  p1.atoms = {{Preference::PartisanA, 0.5, 0.5},
              {Preference::PartisanB, 0.5, 0.5}};
  VoterDistribution p23;
  p23.atoms = {{Preference::Independent, 1.0, 0.5 - x},
               {Preference::Independent, 0.5, 0.5 - x},
               {Preference::PartisanA, 0.5, x},
               {Preference::PartisanB, 0.5, x}};
  dist.voters = {p1, p23, p23};

  auto base_sigma = [&] {
    std::vector<ExAnteStrategy> sigma(3);
    sigma[0].atom_strategies = {always_vote(Alternative::A),
                                always_vote(Alternative::B)};
    for (int v : {1, 2})
      sigma[v].atom_strategies = {sincere(), sincere(),
                                  always_vote(Alternative::A),
                                  always_vote(Alternative::B)};
    return sigma;
  };

  std::vector<ExAnteStrategy> no_delegation = base_sigma();
  std::vector<ExAnteStrategy> delegation = base_sigma();
  delegation[1].atom_strategies[1] = always_delegate(3);  // uninformed 2
  delegation[2].atom_strategies[1] = always_delegate(2);  // uninformed 3

  Mechanism ld = Mechanism::ld();
  ThreePlayerResult result;
  result.no_delegation = exante_utility(dist, ld, no_delegation).p_correct;
  result.delegation_eq = exante_utility(dist, ld, delegation).p_correct;

  // Condition on the joint types of players 2 and 3 and check the
  // full-information-equivalence event atom by atom.
  result.fie_certificate = true;
  for (int a2 = 0; a2 < 2; ++a2) {
    for (int a3 = 0; a3 < 2; ++a3) {
      TypeDistribution cond = dist;
      cond.voters[1].atoms = {p23.atoms[a2]};
      cond.voters[1].atoms[0].probability = 1.0;
      cond.voters[2].atoms = {p23.atoms[a3]};
      cond.voters[2].atoms[0].probability = 1.0;
      std::vector<ExAnteStrategy> sigma = delegation;
      sigma[1].atom_strategies = {delegation[1].atom_strategies[a2]};
      sigma[2].atom_strategies = {delegation[2].atom_strategies[a3]};
      double p = exante_utility(cond, ld, sigma).p_correct;
      if (a2 == 1 && a3 == 1) result.residual_p_correct = p;
      else if (p < 1.0 - 1e-12) result.fie_certificate = false;
    }
  }
  return result;
}

AuxiliaryGame auxiliary_transform(const TypeDistribution& distribution,
                                  const Mechanism& mechanism) {
  distribution.validate();
  AuxiliaryGame game;
  game.distribution = distribution;
  game.mechanism = mechanism;
  const int n = distribution.size();
  game.allowed.resize(n);
  for (int i = 1; i <= n; ++i) {
    for (const TypeAtom& atom : distribution.voters[i - 1].atoms) {
      if (atom.preference == Preference::Independent)
        game.allowed[i - 1].push_back(legal_strategies(i, mechanism, n));
      else
        game.allowed[i - 1].push_back(
            {pinned_partisan_strategy(atom.preference, i, mechanism)});
    }
  }
  return game;
}

AffineUtility interim_linearity_check(const TypeDistribution& distribution,
                                      const Mechanism& mechanism,
                                      const std::vector<ExAnteStrategy>& sigma,
                                      int voter, const Action& y) {
  std::vector<std::vector<Cell>> cells = all_cells(distribution, sigma);
  // the voter's own type does not affect the outcome when the action is
  // fixed, so pin a placeholder cell
  cells[voter - 1] = {{1.0, {Preference::Independent, 0.5}, always(y)}};
  double win_a = 0, win_b = 0;  // P(A | state a), P(B | state b)
  for_each_cell_combo(distribution.prior, cells,
                      ExAnteOptions{}.cell_cap,
                      [&](double mass, const Committee& committee,
                          const StrategyProfile& profile) {
                        EvalReport eval =
                            evaluate_profile(committee, mechanism, profile);
                        win_a += mass * eval.p_a_given_a;
                        win_b += mass * (1.0 - eval.p_a_given_b);
                      });
  return {win_a - win_b, win_b};
}

BestCandidateResult best_threshold_search(
    const TypeDistribution& distribution, const Mechanism& mechanism,
    const std::vector<std::vector<ExAnteStrategy>>& candidates,
    const ExAnteOptions& options) {
  if (candidates.size() != distribution.voters.size())
    throw std::invalid_argument("one candidate list per voter required");
  const int n = distribution.size();
  std::vector<ExAnteStrategy> sigma(n);
  std::vector<int> idx(n, 0);
  long long combos = 1;
  for (const auto& list : candidates) {
    if (list.empty())
      throw std::invalid_argument("empty candidate list");
    combos *= static_cast<long long>(list.size());
    if (combos > options.cell_cap)
      throw std::runtime_error("candidate enumeration cap exceeded");
  }
  BestCandidateResult best;
  double value = -1;
  for (long long t = 0; t < combos; ++t) {
    for (int i = 0; i < n; ++i) sigma[i] = candidates[i][idx[i]];
    ExAnteReport report = exante_utility(distribution, mechanism, sigma, options);
    if (report.p_correct > value + kUtilityEps) {
      value = report.p_correct;
      best.choice = idx;
      best.report = report;
    }
    for (int i = 0; i < n; ++i) {
      if (++idx[i] < static_cast<int>(candidates[i].size())) break;
      idx[i] = 0;
    }
  }
  return best;
}

}  // namespace liqdem
