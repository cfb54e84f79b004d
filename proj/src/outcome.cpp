#include "liqdem/outcome.hpp"

#include <stdexcept>

namespace liqdem {

namespace {
enum Terminal { kA = 0, kB = 1, kX = 2 };
}

ResolvedBallots resolve(const std::vector<Action>& actions,
                        const Mechanism& mechanism) {
  const int n = static_cast<int>(actions.size());
  std::vector<int> status(n + 1, 0);  // 0 fresh, 1 on current path, 2 done
  std::vector<int> result(n + 1, kX);
  std::vector<int> path;

  for (int start = 1; start <= n; ++start) {
    if (status[start] == 2) continue;
    path.clear();
    int cur = start;
    int res = kX;
    while (true) {
      if (status[cur] == 2) { res = result[cur]; break; }
      if (status[cur] == 1) { res = kX; break; }  // delegation cycle
      const Action& act = actions[cur - 1];
      if (act.kind == ActionKind::VoteA) { res = kA; }
      else if (act.kind == ActionKind::VoteB) { res = kB; }
      else if (act.kind == ActionKind::Abstain) { res = kX; }
      else if (act.target == kRepA) { res = kA; }
      else if (act.target == kRepB) { res = kB; }
      else {
        status[cur] = 1;
        path.push_back(cur);
        cur = act.target;
        continue;
      }
      status[cur] = 2;
      result[cur] = res;
      break;
    }
    for (int v : path) {
      status[v] = 2;
      result[v] = res;
    }
  }

  ResolvedBallots ballots;
  for (int i = 1; i <= n; ++i) {
    if (result[i] == kA) ++ballots.votes_a;
    else if (result[i] == kB) ++ballots.votes_b;
    else ++ballots.abstained;
  }
  if (mechanism.kind == MechanismKind::RD) {
    // The mechanical representatives each cast their own ballot; the pair
    // cancels, so tallies shift by one on each side.
    ++ballots.votes_a;
    ++ballots.votes_b;
  }
  return ballots;
}

OutcomeDistribution tally(const ResolvedBallots& ballots) {
  if (ballots.votes_a > ballots.votes_b) return {1.0, 0.0};
  if (ballots.votes_a < ballots.votes_b) return {0.0, 1.0};
  return {0.5, 0.5};  // includes the all-abstain 0-0 tie
}

EvalReport evaluate_profile(const Committee& committee,
                            const Mechanism& mechanism,
                            const StrategyProfile& profile,
                            const EvalOptions& options) {
  validate_profile(committee, mechanism, profile);
  const int n = committee.size();

  std::vector<int> responsive;
  for (int i = 1; i <= n; ++i)
    if (profile[i - 1].responsive()) responsive.push_back(i);
  const int r = static_cast<int>(responsive.size());
  if (r > options.responsive_cap)
    throw std::runtime_error(
        "instance too large for exact evaluation: " + std::to_string(r) +
        " responsive voters exceed cap " +
        std::to_string(options.responsive_cap));

  std::vector<Action> actions(n);
  for (int i = 1; i <= n; ++i) actions[i - 1] = profile[i - 1].on_a;

  double p_a_win[2] = {0, 0};  // P(A wins | state)
  double p_maj[2] = {0, 0};

  for (int si = 0; si < 2; ++si) {
    State state = si == 0 ? State::a : State::b;
    State wrong_signal = si == 0 ? State::b : State::a;
    bool maj_a = false, maj_b = false;
    for (Alternative c : majoritarian_alternative(committee, state)) {
      if (c == Alternative::A) maj_a = true; else maj_b = true;
    }
    for (std::uint32_t mask = 0; mask < (1u << r); ++mask) {
      double prob = 1.0;
      for (int k = 0; k < r; ++k) {
        int id = responsive[k];
        double q = committee.voter(id).precision;
        bool correct = (mask >> k) & 1u;
        prob *= correct ? q : 1.0 - q;
        actions[id - 1] = profile[id - 1].on(correct ? state : wrong_signal);
      }
      if (prob == 0.0) continue;
      OutcomeDistribution outcome = tally(resolve(actions, mechanism));
      p_a_win[si] += prob * outcome.p_a;
      p_maj[si] += prob * ((maj_a ? outcome.p_a : 0.0) +
                           (maj_b ? outcome.p_b : 0.0));
    }
    for (int k = 0; k < r; ++k)
      actions[responsive[k] - 1] = profile[responsive[k] - 1].on_a;
  }

  EvalReport report;
  report.p_a_given_a = p_a_win[0];
  report.p_a_given_b = p_a_win[1];
  report.p_correct_given_a = p_a_win[0];
  report.p_correct_given_b = 1.0 - p_a_win[1];
  const double pi = committee.prior;
  report.p_correct =
      pi * report.p_correct_given_a + (1.0 - pi) * report.p_correct_given_b;
  report.p_majoritarian = pi * p_maj[0] + (1.0 - pi) * p_maj[1];
  report.voter_utilities.resize(n);
  for (int i = 1; i <= n; ++i) {
    switch (committee.voter(i).preference) {
      case Preference::Independent:
        report.voter_utilities[i - 1] = report.p_correct;
        break;
      case Preference::PartisanA:
        report.voter_utilities[i - 1] =
            pi * report.p_a_given_a + (1.0 - pi) * report.p_a_given_b;
        break;
      case Preference::PartisanB:
        report.voter_utilities[i - 1] =
            pi * (1.0 - report.p_a_given_a) +
            (1.0 - pi) * (1.0 - report.p_a_given_b);
        break;
    }
  }
  return report;
}

std::vector<Alternative> majoritarian_alternative(const Committee& committee,
                                                  State state) {
  VoterCounts counts = classify_voters(committee);
  int head_a = counts.n_A + (state == State::a ? counts.n_I : 0);
  int head_b = counts.n_B + (state == State::b ? counts.n_I : 0);
  if (head_a > head_b) return {Alternative::A};
  if (head_a < head_b) return {Alternative::B};
  return {Alternative::A, Alternative::B};
}

}  // namespace liqdem
