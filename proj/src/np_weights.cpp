#include "liqdem/np_weights.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace liqdem {

int guarded_floor(double x) {
  return static_cast<int>(std::floor(x + kFloorEpsilon));
}

double optimal_weight(double q) {
  if (!(q >= 0.5 && q <= 1.0))
    throw std::invalid_argument("precision must lie in [0.5, 1]");
  if (q == 1.0) return std::numeric_limits<double>::infinity();
  return std::log(q / (1.0 - q));
}

double relative_weight(double r, double q) {
  if (!(q > 0.5))
    throw std::invalid_argument("relative_weight: q = 0.5 has zero weight");
  if (!(r < 1.0))
    throw std::invalid_argument("relative_weight: r = 1 has infinite weight");
  if (!(q <= r))
    throw std::invalid_argument("relative_weight requires q <= r");
  return optimal_weight(r) / optimal_weight(q);
}

FirstBestOutcome first_best_decision(const Committee& committee,
                                     const std::vector<State>& signals) {
  std::vector<int> independents;
  for (int i = 1; i <= committee.size(); ++i)
    if (committee.voter(i).preference == Preference::Independent)
      independents.push_back(i);
  if (signals.size() != independents.size())
    throw std::invalid_argument("need one signal per independent voter");

  // A perfectly informed voter dictates; two of them disagreeing is a
  // zero-probability event.
  std::optional<State> perfect_signal;
  for (std::size_t k = 0; k < independents.size(); ++k) {
    if (committee.voter(independents[k]).precision == 1.0) {
      if (perfect_signal && *perfect_signal != signals[k])
        throw std::domain_error(
            "contradictory signals from perfectly informed voters");
      perfect_signal = signals[k];
    }
  }
  if (perfect_signal)
    return *perfect_signal == State::a ? FirstBestOutcome::A
                                       : FirstBestOutcome::B;

  double score =
      std::log(committee.prior / (1.0 - committee.prior));
  for (std::size_t k = 0; k < independents.size(); ++k) {
    double w = optimal_weight(committee.voter(independents[k]).precision);
    score += signals[k] == State::a ? w : -w;
  }
  if (std::abs(score) <= 1e-12) return FirstBestOutcome::Tie;
  return score > 0 ? FirstBestOutcome::A : FirstBestOutcome::B;
}

double first_best_probability(const Committee& committee) {
  std::vector<int> independents;
  for (int i = 1; i <= committee.size(); ++i)
    if (committee.voter(i).preference == Preference::Independent)
      independents.push_back(i);
  const int r = static_cast<int>(independents.size());
  if (r > 25)
    throw std::runtime_error(
        "instance too large for exact first-best enumeration");

  double p_correct[2] = {0, 0};
  std::vector<State> signals(r);
  for (int si = 0; si < 2; ++si) {
    State state = si == 0 ? State::a : State::b;
    State wrong = si == 0 ? State::b : State::a;
    for (std::uint32_t mask = 0; mask < (1u << r); ++mask) {
      double prob = 1.0;
      for (int k = 0; k < r; ++k) {
        double q = committee.voter(independents[k]).precision;
        bool correct = (mask >> k) & 1u;
        prob *= correct ? q : 1.0 - q;
        signals[k] = correct ? state : wrong;
      }
      if (prob == 0.0) continue;
      FirstBestOutcome decision = first_best_decision(committee, signals);
      if (decision == FirstBestOutcome::Tie) p_correct[si] += 0.5 * prob;
      else if ((decision == FirstBestOutcome::A) == (state == State::a))
        p_correct[si] += prob;
    }
  }
  return committee.prior * p_correct[0] +
         (1.0 - committee.prior) * p_correct[1];
}

}  // namespace liqdem
