#include "liqdem/equilibrium.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>

namespace liqdem {

namespace {

constexpr long long kHugeTupleCount = (1LL << 62);

// Destination bits for where a vote bundle can end up.
constexpr int kDestA = 1, kDestB = 2, kDestX = 4;

std::vector<int> opponents_of(int voter, int n) {
  std::vector<int> ids;
  ids.reserve(n - 1);
  for (int j = 1; j <= n; ++j)
    if (j != voter) ids.push_back(j);
  return ids;
}

// Evaluates, for a fixed tuple of opponent strategies, the interim utility
// of every strategy of one voter. Shares the signal enumeration and vote
// resolution across all of the voter's strategies.
class TupleEvaluator {
 public:
  TupleEvaluator(const Committee& committee, const Mechanism& mechanism,
                 int voter, const std::vector<InterimStrategy>& strategies)
      : committee_(committee),
        mechanism_(mechanism),
        voter_(voter),
        strategies_(strategies),
        actions_(committee.size()) {
    my_actions_ = legal_actions(voter, mechanism, committee.size());
    auto index_of = [&](const Action& act) {
      for (std::size_t k = 0; k < my_actions_.size(); ++k)
        if (my_actions_[k] == act) return static_cast<int>(k);
      throw std::logic_error("strategy uses an illegal action");
    };
    for (const InterimStrategy& s : strategies_)
      strat_idx_.push_back({index_of(s.on_a), index_of(s.on_b)});
    win_a_.resize(my_actions_.size());
    win_b_.resize(my_actions_.size());
  }

  // `profile` holds the opponents' strategies; the voter's slot is ignored.
  // Fills `out[k]` with the utility of strategies_[k].
  void eval(const StrategyProfile& profile, std::vector<double>& out) {
    const int n = committee_.size();
    std::vector<int> responsive;
    for (int j = 1; j <= n; ++j) {
      if (j == voter_) continue;
      actions_[j - 1] = profile[j - 1].on_a;
      if (profile[j - 1].responsive()) responsive.push_back(j);
    }
    const int r = static_cast<int>(responsive.size());
    std::fill(win_a_.begin(), win_a_.end(), 0.0);
    std::fill(win_b_.begin(), win_b_.end(), 0.0);
    for (int si = 0; si < 2; ++si) {
      State state = si == 0 ? State::a : State::b;
      State wrong = si == 0 ? State::b : State::a;
      std::vector<double>& win = si == 0 ? win_a_ : win_b_;
      for (std::uint32_t mask = 0; mask < (1u << r); ++mask) {
        double prob = 1.0;
        for (int k = 0; k < r; ++k) {
          int id = responsive[k];
          double q = committee_.voter(id).precision;
          bool correct = (mask >> k) & 1u;
          prob *= correct ? q : 1.0 - q;
          actions_[id - 1] = profile[id - 1].on(correct ? state : wrong);
        }
        if (prob == 0.0) continue;
        for (std::size_t y = 0; y < my_actions_.size(); ++y) {
          actions_[voter_ - 1] = my_actions_[y];
          win[y] += prob * tally(resolve(actions_, mechanism_)).p_a;
        }
      }
      for (int k = 0; k < r; ++k)
        actions_[responsive[k] - 1] = profile[responsive[k] - 1].on_a;
    }

    const double pi = committee_.prior;
    const double q = committee_.voter(voter_).precision;
    Preference pref = committee_.voter(voter_).preference;
    out.resize(strategies_.size());
    for (std::size_t k = 0; k < strategies_.size(); ++k) {
      auto [ya, yb] = strat_idx_[k];
      double va, vb;  // expected payoff per state
      switch (pref) {
        case Preference::Independent:
          va = q * win_a_[ya] + (1 - q) * win_a_[yb];
          vb = q * (1 - win_b_[yb]) + (1 - q) * (1 - win_b_[ya]);
          break;
        case Preference::PartisanA:
          va = q * win_a_[ya] + (1 - q) * win_a_[yb];
          vb = q * win_b_[yb] + (1 - q) * win_b_[ya];
          break;
        case Preference::PartisanB:
          va = q * (1 - win_a_[ya]) + (1 - q) * (1 - win_a_[yb]);
          vb = q * (1 - win_b_[yb]) + (1 - q) * (1 - win_b_[ya]);
          break;
      }
      out[k] = pi * va + (1 - pi) * vb;
    }
  }

 private:
  const Committee& committee_;
  const Mechanism& mechanism_;
  int voter_;
  const std::vector<InterimStrategy>& strategies_;
  std::vector<Action> my_actions_;
  std::vector<std::pair<int, int>> strat_idx_;
  std::vector<Action> actions_;
  std::vector<double> win_a_, win_b_;
};

// --- Vote-destination certificate tier -------------------------------------
//
// For each voter j and state, compute the set of destinations (A, B or
// abstention) a vote arriving at j can end up at, given j's surviving
// strategies. Delegation contributes the target's destination set plus an
// abstention bit whenever the target may delegate onward (conservative
// cycle risk). A strategy d then certifiably weakly dominates s when, per
// state and per possible own signal, the worst destination d can produce is
// at least as favorable as the best destination s can produce: the election
// outcome is monotone in where the voter's held bundle of votes goes, with
// everything else fixed.

struct DestinationModel {
  // reach[state][j]: destination bits of a vote arriving at voter j
  int reach[2][64] = {};
  bool may_delegate[64] = {};
};

bool signal_possible(const Committee& committee, int voter, State state,
                     State signal) {
  if (signal == state) return true;
  return committee.voter(voter).precision < 1.0;
}

int action_destinations(const Action& act, int state_idx,
                        const DestinationModel& model) {
  switch (act.kind) {
    case ActionKind::VoteA: return kDestA;
    case ActionKind::VoteB: return kDestB;
    case ActionKind::Abstain: return kDestX;
    case ActionKind::Delegate:
      if (act.target == kRepA) return kDestA;
      if (act.target == kRepB) return kDestB;
      return model.reach[state_idx][act.target] |
             (model.may_delegate[act.target] ? kDestX : 0);
  }
  return kDestX;
}

DestinationModel build_destination_model(const Committee& committee,
                                         const StrategySet& sets) {
  DestinationModel model;
  const int n = committee.size();
  for (int j = 1; j <= n; ++j) {
    for (const InterimStrategy& s : sets.sets[j - 1]) {
      for (State sig : {State::a, State::b}) {
        const Action& act = s.on(sig);
        if (act.kind == ActionKind::Delegate && act.target >= 1)
          model.may_delegate[j] = true;
      }
    }
  }
  for (int si = 0; si < 2; ++si) {
    State state = si == 0 ? State::a : State::b;
    bool changed = true;
    while (changed) {
      changed = false;
      for (int j = 1; j <= n; ++j) {
        int bits = model.reach[si][j];
        for (const InterimStrategy& s : sets.sets[j - 1]) {
          for (State sig : {State::a, State::b}) {
            if (!signal_possible(committee, j, state, sig)) continue;
            bits |= action_destinations(s.on(sig), si, model);
          }
        }
        if (bits != model.reach[si][j]) {
          model.reach[si][j] = bits;
          changed = true;
        }
      }
    }
  }
  return model;
}

// Favorability rank of a destination: 2 best, 0 worst.
int destination_rank(int dest_bit, Preference pref, State state) {
  Alternative good;
  if (pref == Preference::PartisanA) good = Alternative::A;
  else if (pref == Preference::PartisanB) good = Alternative::B;
  else good = correct_alternative(state);
  if (dest_bit == kDestX) return 1;
  bool is_a = dest_bit == kDestA;
  return (is_a == (good == Alternative::A)) ? 2 : 0;
}

int min_rank(int dests, Preference pref, State state) {
  int best = 3;
  for (int bit : {kDestA, kDestB, kDestX})
    if (dests & bit) best = std::min(best, destination_rank(bit, pref, state));
  return best;
}

int max_rank(int dests, Preference pref, State state) {
  int worst = -1;
  for (int bit : {kDestA, kDestB, kDestX})
    if (dests & bit) worst = std::max(worst, destination_rank(bit, pref, state));
  return worst;
}

bool pointwise_dominates(const Committee& committee, int voter,
                         const InterimStrategy& dominator,
                         const InterimStrategy& dominated,
                         const DestinationModel& model) {
  Preference pref = committee.voter(voter).preference;
  for (int si = 0; si < 2; ++si) {
    State state = si == 0 ? State::a : State::b;
    for (State sig : {State::a, State::b}) {
      if (!signal_possible(committee, voter, state, sig)) continue;
      int dd = action_destinations(dominator.on(sig), si, model);
      int ds = action_destinations(dominated.on(sig), si, model);
      if (min_rank(dd, pref, state) < max_rank(ds, pref, state)) return false;
    }
  }
  return true;
}

bool terminal_unresponsive(const InterimStrategy& s) {
  if (s.responsive()) return false;
  return s.on_a.kind != ActionKind::Delegate || s.on_a.target < 0;
}

// Searches pure opponent tuples (preferring unresponsive, non-delegating
// strategies, which make both profiles cheap to evaluate exactly) for one at
// which the dominator is strictly better.
std::optional<StrategyProfile> find_strict_witness(
    const Committee& committee, const Mechanism& mechanism, int voter,
    const InterimStrategy& dominated, const InterimStrategy& dominator,
    const StrategySet& sets, long long probe_budget) {
  const int n = committee.size();
  std::vector<std::vector<InterimStrategy>> probe(n);
  for (int j = 1; j <= n; ++j) {
    if (j == voter) continue;
    for (const InterimStrategy& s : sets.sets[j - 1])
      if (terminal_unresponsive(s)) probe[j - 1].push_back(s);
    if (probe[j - 1].empty()) {
      std::size_t take = std::min<std::size_t>(3, sets.sets[j - 1].size());
      probe[j - 1].assign(sets.sets[j - 1].begin(),
                          sets.sets[j - 1].begin() + take);
    }
  }
  std::vector<int> idx(n, 0);
  StrategyProfile profile(n);
  for (long long count = 0; count < probe_budget; ++count) {
    for (int j = 1; j <= n; ++j)
      if (j != voter) profile[j - 1] = probe[j - 1][idx[j - 1]];
    profile[voter - 1] = dominated;
    double u_s = evaluate_profile(committee, mechanism, profile)
                     .voter_utilities[voter - 1];
    profile[voter - 1] = dominator;
    double u_d = evaluate_profile(committee, mechanism, profile)
                     .voter_utilities[voter - 1];
    if (u_d > u_s + kUtilityEps) {
      profile[voter - 1] = dominated;
      return profile;
    }
    // advance mixed-radix counter
    int j = 0;
    while (j < n) {
      if (j + 1 == voter) { ++j; continue; }
      if (++idx[j] < static_cast<int>(probe[j].size())) break;
      idx[j] = 0;
      ++j;
    }
    if (j >= n) break;
  }
  return std::nullopt;
}

VoterScan scan_exact(const Committee& committee, const Mechanism& mechanism,
                     int voter, const StrategySet& sets, long long tuples) {
  const int n = committee.size();
  const std::vector<InterimStrategy>& mine = sets.sets[voter - 1];
  const int s_count = static_cast<int>(mine.size());
  std::vector<int> opp = opponents_of(voter, n);

  TupleEvaluator evaluator(committee, mechanism, voter, mine);
  StrategyProfile profile(n);
  std::vector<int> idx(opp.size(), 0);
  std::vector<double> u;

  // alive[d][s]: can strategy d still weakly dominate s; strict_at[d][s]:
  // first tuple index with a strict improvement (-1 if none seen).
  std::vector<char> alive(s_count * s_count, 1);
  std::vector<long long> strict_at(s_count * s_count, -1);

  for (long long t = 0; t < tuples; ++t) {
    for (std::size_t k = 0; k < opp.size(); ++k)
      profile[opp[k] - 1] = sets.sets[opp[k] - 1][idx[k]];
    evaluator.eval(profile, u);
    for (int d = 0; d < s_count; ++d) {
      for (int s = 0; s < s_count; ++s) {
        if (d == s) continue;
        char& a = alive[d * s_count + s];
        if (!a) continue;
        if (u[d] < u[s] - kUtilityEps) a = 0;
        else if (strict_at[d * s_count + s] < 0 && u[d] > u[s] + kUtilityEps)
          strict_at[d * s_count + s] = t;
      }
    }
    for (std::size_t k = 0; k < opp.size(); ++k) {
      if (++idx[k] < static_cast<int>(sets.sets[opp[k] - 1].size())) break;
      idx[k] = 0;
    }
  }

  VoterScan scan;
  scan.exact = true;
  for (int s = 0; s < s_count; ++s) {
    for (int d = 0; d < s_count; ++d) {
      if (d == s) continue;
      long long t = strict_at[d * s_count + s];
      if (!alive[d * s_count + s] || t < 0) continue;
      DominanceWitness witness;
      witness.voter = voter;
      witness.dominated = mine[s];
      witness.dominator = mine[d];
      StrategyProfile at(n);
      for (std::size_t k = 0; k < opp.size(); ++k) {
        int size = static_cast<int>(sets.sets[opp[k] - 1].size());
        at[opp[k] - 1] = sets.sets[opp[k] - 1][t % size];
        t /= size;
      }
      at[voter - 1] = mine[s];
      witness.strict_at = std::move(at);
      scan.dominated.push_back(std::move(witness));
      break;
    }
  }
  return scan;
}

VoterScan scan_certificate(const Committee& committee,
                           const Mechanism& mechanism, int voter,
                           const StrategySet& sets,
                           const DominanceOptions& options) {
  VoterScan scan;
  scan.exact = false;
  DestinationModel model = build_destination_model(committee, sets);
  const std::vector<InterimStrategy>& mine = sets.sets[voter - 1];
  for (std::size_t s = 0; s < mine.size(); ++s) {
    for (std::size_t d = 0; d < mine.size(); ++d) {
      if (d == s || mine[d] == mine[s]) continue;
      if (!pointwise_dominates(committee, voter, mine[d], mine[s], model))
        continue;
      auto at = find_strict_witness(committee, mechanism, voter, mine[s],
                                    mine[d], sets, options.probe_budget);
      if (!at) continue;
      DominanceWitness witness;
      witness.voter = voter;
      witness.dominated = mine[s];
      witness.dominator = mine[d];
      witness.strict_at = std::move(*at);
      scan.dominated.push_back(std::move(witness));
      break;
    }
  }
  return scan;
}

}  // namespace

StrategySet StrategySet::full(const Committee& committee,
                              const Mechanism& mechanism) {
  StrategySet result;
  result.sets.resize(committee.size());
  for (int i = 1; i <= committee.size(); ++i)
    result.sets[i - 1] = legal_strategies(i, mechanism, committee.size());
  return result;
}

long long StrategySet::opponent_tuples(int voter) const {
  long long product = 1;
  for (std::size_t j = 0; j < sets.size(); ++j) {
    if (static_cast<int>(j) == voter - 1) continue;
    long long size = static_cast<long long>(sets[j].size());
    if (size == 0) return 0;
    if (product > kHugeTupleCount / size) return kHugeTupleCount;
    product *= size;
  }
  return product;
}

VoterScan scan_dominated(const Committee& committee,
                         const Mechanism& mechanism, int voter,
                         const StrategySet& sets,
                         const DominanceOptions& options) {
  if (sets.sets[voter - 1].size() < 2) return {true, {}};
  long long tuples = sets.opponent_tuples(voter);
  if (tuples <= options.tuple_budget)
    return scan_exact(committee, mechanism, voter, sets, tuples);
  return scan_certificate(committee, mechanism, voter, sets, options);
}

DominanceCheck is_weakly_dominated(const Committee& committee,
                                   const Mechanism& mechanism, int voter,
                                   const InterimStrategy& strategy,
                                   const StrategySet& sets,
                                   const DominanceOptions& options) {
  bool member = false;
  for (const InterimStrategy& s : sets.sets[voter - 1])
    if (s == strategy) member = true;
  if (!member)
    throw std::invalid_argument("strategy is not in the voter's current set");

  VoterScan scan = scan_dominated(committee, mechanism, voter, sets, options);
  DominanceCheck check;
  for (DominanceWitness& w : scan.dominated) {
    if (w.dominated == strategy) {
      check.result = DominanceResult::Dominated;
      check.witness = std::move(w);
      return check;
    }
  }
  check.result =
      scan.exact ? DominanceResult::NotDominated : DominanceResult::Undecided;
  return check;
}

double interim_utility(const Committee& committee, const Mechanism& mechanism,
                       const StrategyProfile& profile, int voter) {
  return evaluate_profile(committee, mechanism, profile)
      .voter_utilities[voter - 1];
}

std::vector<InterimStrategy> best_responses(const Committee& committee,
                                            const Mechanism& mechanism,
                                            const StrategyProfile& profile,
                                            int voter) {
  StrategyProfile work = profile;
  std::vector<InterimStrategy> candidates =
      legal_strategies(voter, mechanism, committee.size());
  std::vector<double> utilities;
  utilities.reserve(candidates.size());
  double best = -1;
  for (const InterimStrategy& s : candidates) {
    work[voter - 1] = s;
    double u = interim_utility(committee, mechanism, work, voter);
    utilities.push_back(u);
    best = std::max(best, u);
  }
  std::vector<InterimStrategy> result;
  for (std::size_t k = 0; k < candidates.size(); ++k)
    if (utilities[k] >= best - kUtilityEps) result.push_back(candidates[k]);
  return result;
}

bool is_equilibrium(const Committee& committee, const Mechanism& mechanism,
                    const StrategyProfile& profile,
                    DeviationWitness* witness) {
  EvalReport base = evaluate_profile(committee, mechanism, profile);
  StrategyProfile work = profile;
  for (int voter = 1; voter <= committee.size(); ++voter) {
    double u0 = base.voter_utilities[voter - 1];
    for (const InterimStrategy& s :
         legal_strategies(voter, mechanism, committee.size())) {
      if (s == profile[voter - 1]) continue;
      work[voter - 1] = s;
      double u = interim_utility(committee, mechanism, work, voter);
      if (u > u0 + kUtilityEps) {
        if (witness) *witness = {voter, s, u - u0};
        return false;
      }
    }
    work[voter - 1] = profile[voter - 1];
  }
  return true;
}

IEWDSReport iewds(const Committee& committee, const Mechanism& mechanism,
                  const IEWDSOptions& options) {
  const int n = committee.size();
  IEWDSReport report;
  StrategySet sets = StrategySet::full(committee, mechanism);

  auto remove_strategy = [&](int voter, const InterimStrategy& strategy) {
    std::vector<InterimStrategy>& set = sets.sets[voter - 1];
    if (set.size() <= 1) return false;
    auto it = std::find(set.begin(), set.end(), strategy);
    if (it == set.end()) return false;
    set.erase(it);
    return true;
  };

  std::vector<int> order = options.elimination_order;
  if (order.empty())
    for (int i = 1; i <= n; ++i) order.push_back(i);

  int round = 0;
  for (int pass = 0; pass < options.max_rounds; ++pass) {
    bool eliminated_this_pass = false;
    if (options.simultaneous) {
      std::vector<DominanceWitness> round_witnesses;
      for (int voter : order) {
        VoterScan scan =
            scan_dominated(committee, mechanism, voter, sets, options.dominance);
        if (!scan.exact) report.budget_limited = true;
        for (DominanceWitness& w : scan.dominated)
          round_witnesses.push_back(std::move(w));
      }
      if (!round_witnesses.empty()) {
        ++round;
        for (DominanceWitness& w : round_witnesses) {
          if (remove_strategy(w.voter, w.dominated)) {
            eliminated_this_pass = true;
            report.eliminations.push_back({round, std::move(w)});
          }
        }
      }
    } else {
      bool any = false;
      for (int voter : order) {
        VoterScan scan =
            scan_dominated(committee, mechanism, voter, sets, options.dominance);
        if (!scan.exact) report.budget_limited = true;
        bool first = true;
        for (DominanceWitness& w : scan.dominated) {
          if (remove_strategy(w.voter, w.dominated)) {
            if (first && !any) ++round;
            first = false;
            any = true;
            report.eliminations.push_back({round, std::move(w)});
          }
        }
      }
      eliminated_this_pass = any;
      if (any) round = round;  // one logical round per pass
    }
    if (!eliminated_this_pass) break;
    if (!options.simultaneous) { /* next pass continues elimination */ }
  }
  report.rounds = round;
  report.survivors = sets;

  // Solvability: every surviving profile must induce the same outcome
  // distribution in each state.
  long long profiles = 1;
  for (int i = 1; i <= n; ++i) {
    long long size = static_cast<long long>(sets.sets[i - 1].size());
    if (profiles > kHugeTupleCount / size) { profiles = kHugeTupleCount; break; }
    profiles *= size;
  }
  if (profiles > options.solvability_profile_cap) {
    report.solvability_decided = false;
    return report;
  }
  report.solvability_decided = true;
  std::vector<int> idx(n, 0);
  StrategyProfile profile(n);
  bool first = true;
  double ref_a = 0, ref_b = 0;
  report.solvable = true;
  for (long long t = 0; t < profiles; ++t) {
    for (int i = 0; i < n; ++i) profile[i] = sets.sets[i][idx[i]];
    EvalReport eval = evaluate_profile(committee, mechanism, profile);
    if (first) {
      ref_a = eval.p_a_given_a;
      ref_b = eval.p_a_given_b;
      report.solution_metrics = eval;
      first = false;
    } else if (std::abs(eval.p_a_given_a - ref_a) > kUtilityEps ||
               std::abs(eval.p_a_given_b - ref_b) > kUtilityEps) {
      report.solvable = false;
      report.solution_metrics.reset();
      break;
    }
    for (int i = 0; i < n; ++i) {
      if (++idx[i] < static_cast<int>(sets.sets[i].size())) break;
      idx[i] = 0;
    }
  }
  return report;
}

InterimStrategy pinned_partisan_strategy(Preference preference, int voter,
                                         const Mechanism& mechanism) {
  Alternative alt =
      preference == Preference::PartisanA ? Alternative::A : Alternative::B;
  if (mechanism.kind == MechanismKind::RD &&
      !mechanism.is_representative(voter))
    return always_delegate(alt == Alternative::A ? kRepA : kRepB);
  return always_vote(alt);
}

BestEquilibriumResult best_equilibrium_search(const Committee& committee,
                                              const Mechanism& mechanism,
                                              SearchRestriction restriction,
                                              long long profile_cap) {
  const int n = committee.size();
  std::vector<std::vector<InterimStrategy>> space(n);
  for (int i = 1; i <= n; ++i) {
    Preference pref = committee.voter(i).preference;
    if (restriction == SearchRestriction::IndependentsOnlyFree &&
        pref != Preference::Independent)
      space[i - 1] = {pinned_partisan_strategy(pref, i, mechanism)};
    else
      space[i - 1] = legal_strategies(i, mechanism, n);
  }
  long long profiles = 1;
  for (int i = 0; i < n; ++i) {
    long long size = static_cast<long long>(space[i].size());
    if (profiles > kHugeTupleCount / size) { profiles = kHugeTupleCount; break; }
    profiles *= size;
  }
  if (profiles > profile_cap)
    throw std::runtime_error(
        "best_equilibrium_search: search space too large (" +
        std::to_string(profiles) + " profiles); use the neutral search");

  std::vector<int> idx(n, 0);
  StrategyProfile profile(n);
  BestEquilibriumResult result;
  double best = -1;
  for (long long t = 0; t < profiles; ++t) {
    for (int i = 0; i < n; ++i) profile[i] = space[i][idx[i]];
    EvalReport eval = evaluate_profile(committee, mechanism, profile);
    if (eval.p_correct > best + kUtilityEps) {
      best = eval.p_correct;
      result.profile = profile;
      result.report = eval;
    }
    for (int i = 0; i < n; ++i) {
      if (++idx[i] < static_cast<int>(space[i].size())) break;
      idx[i] = 0;
    }
  }
  result.equilibrium = is_equilibrium(committee, mechanism, result.profile);
  return result;
}

}  // namespace liqdem
