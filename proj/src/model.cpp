#include "liqdem/model.hpp"

#include <algorithm>

namespace liqdem {

void Committee::validate() const {
  if (voters.empty()) throw std::invalid_argument("committee must have N >= 1 voters");
  if (!(prior > 0.0 && prior < 1.0))
    throw std::invalid_argument("prior must lie strictly inside (0, 1)");
  for (int i = 0; i < size(); ++i) {
    double q = voters[i].precision;
    if (!(q >= 0.5 && q <= 1.0))
      throw std::invalid_argument("voter " + std::to_string(i + 1) +
                                  ": precision must lie in [0.5, 1]");
  }
}

VoterCounts classify_voters(const Committee& committee) {
  VoterCounts counts;
  for (const VoterType& v : committee.voters) {
    switch (v.preference) {
      case Preference::PartisanA: ++counts.n_A; break;
      case Preference::PartisanB: ++counts.n_B; break;
      case Preference::Independent:
        ++counts.n_I;
        if (v.precision == 1.0) ++counts.n_e; else ++counts.n_U;
        break;
    }
  }
  return counts;
}

bool Mechanism::is_representative(int id) const {
  return std::find(representatives.begin(), representatives.end(), id) !=
         representatives.end();
}

void Mechanism::validate(const Committee& committee) const {
  if (kind != MechanismKind::RD) {
    if (!representatives.empty())
      throw std::invalid_argument("representatives only apply to rd");
    return;
  }
  if (representatives.empty())
    throw std::invalid_argument("rd needs a nonempty representative set");
  for (int id : representatives)
    if (id < 1 || id > committee.size())
      throw std::invalid_argument("representative id " + std::to_string(id) +
                                  " outside 1..N");
  std::vector<int> sorted = representatives;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw std::invalid_argument("representative ids must be distinct");
}

bool action_valid(const Action& act, int voter_id, const Mechanism& mechanism,
                  int n) {
  switch (mechanism.kind) {
    case MechanismKind::DD:
      return act.kind != ActionKind::Delegate;
    case MechanismKind::LD:
      if (act.kind != ActionKind::Delegate) return true;
      return act.target >= 1 && act.target <= n && act.target != voter_id;
    case MechanismKind::RD:
      if (mechanism.is_representative(voter_id))
        return act.kind != ActionKind::Delegate;
      // Non-representatives may only abstain or delegate to J or a*/b*.
      if (act.kind == ActionKind::Abstain) return true;
      if (act.kind != ActionKind::Delegate) return false;
      if (act.target == kRepA || act.target == kRepB) return true;
      return act.target != voter_id && mechanism.is_representative(act.target);
  }
  return false;
}

void validate_profile(const Committee& committee, const Mechanism& mechanism,
                      const StrategyProfile& profile) {
  if (static_cast<int>(profile.size()) != committee.size())
    throw std::invalid_argument("profile length must equal committee size");
  for (int id = 1; id <= committee.size(); ++id) {
    const InterimStrategy& s = profile[id - 1];
    if (!action_valid(s.on_a, id, mechanism, committee.size()) ||
        !action_valid(s.on_b, id, mechanism, committee.size()))
      throw std::invalid_argument("voter " + std::to_string(id) +
                                  ": action not allowed under this mechanism");
  }
}

std::vector<Action> legal_actions(int voter_id, const Mechanism& mechanism,
                                  int n) {
  std::vector<Action> actions;
  switch (mechanism.kind) {
    case MechanismKind::DD:
      actions = {Action::vote_a(), Action::vote_b(), Action::abstain()};
      break;
    case MechanismKind::LD:
      actions = {Action::vote_a(), Action::vote_b(), Action::abstain()};
      for (int j = 1; j <= n; ++j)
        if (j != voter_id) actions.push_back(Action::delegate(j));
      break;
    case MechanismKind::RD:
      if (mechanism.is_representative(voter_id)) {
        actions = {Action::vote_a(), Action::vote_b(), Action::abstain()};
      } else {
        actions = {Action::abstain()};
        for (int j : mechanism.representatives)
          if (j != voter_id) actions.push_back(Action::delegate(j));
        actions.push_back(Action::delegate(kRepA));
        actions.push_back(Action::delegate(kRepB));
      }
      break;
  }
  return actions;
}

std::vector<InterimStrategy> legal_strategies(int voter_id,
                                              const Mechanism& mechanism,
                                              int n) {
  std::vector<Action> actions = legal_actions(voter_id, mechanism, n);
  std::vector<InterimStrategy> strategies;
  strategies.reserve(actions.size() * actions.size());
  for (const Action& on_a : actions)
    for (const Action& on_b : actions) strategies.push_back({on_a, on_b});
  return strategies;
}

std::string to_string(const Action& act) {
  switch (act.kind) {
    case ActionKind::VoteA: return "a";
    case ActionKind::VoteB: return "b";
    case ActionKind::Abstain: return "x";
    case ActionKind::Delegate:
      if (act.target == kRepA) return "d_a*";
      if (act.target == kRepB) return "d_b*";
      return "d" + std::to_string(act.target);
  }
  return "?";
}

std::string to_string(const InterimStrategy& strategy) {
  return "(" + to_string(strategy.on_a) + "," + to_string(strategy.on_b) + ")";
}

}  // namespace liqdem
