#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace liqdem {

enum class Alternative { A, B };
enum class State { a, b };
enum class Preference { PartisanA, PartisanB, Independent };

inline Alternative correct_alternative(State w) {
  return w == State::a ? Alternative::A : Alternative::B;
}
inline Alternative other(Alternative c) {
  return c == Alternative::A ? Alternative::B : Alternative::A;
}

struct VoterType {
  Preference preference = Preference::Independent;
  double precision = 0.5;  // P(signal matches state), in [0.5, 1]
};

// Voter ids are 1-based. Mechanical representatives (always-A / always-B)
// get reserved negative ids; they are not members of the committee.
constexpr int kRepA = -1;
constexpr int kRepB = -2;

struct Committee {
  std::vector<VoterType> voters;
  double prior = 0.5;  // P(state == a)

  int size() const { return static_cast<int>(voters.size()); }
  const VoterType& voter(int id) const { return voters[id - 1]; }
  void validate() const;  // throws std::invalid_argument naming the field
};

struct VoterCounts {
  int n_A = 0, n_B = 0, n_I = 0;
  int n_e = 0;  // independents with precision exactly 1
  int n_U = 0;  // independents with precision < 1
};

VoterCounts classify_voters(const Committee& committee);

enum class MechanismKind { DD, LD, RD };

struct Mechanism {
  MechanismKind kind = MechanismKind::LD;
  std::vector<int> representatives;  // RD only, subset of 1..N

  static Mechanism dd() { return {MechanismKind::DD, {}}; }
  static Mechanism ld() { return {MechanismKind::LD, {}}; }
  static Mechanism rd(std::vector<int> reps) {
    return {MechanismKind::RD, std::move(reps)};
  }
  bool is_representative(int id) const;
  void validate(const Committee& committee) const;
};

enum class ActionKind { VoteA, VoteB, Abstain, Delegate };

struct Action {
  ActionKind kind = ActionKind::Abstain;
  int target = 0;  // Delegate only: 1..N, kRepA or kRepB

  static Action vote(Alternative c) {
    return {c == Alternative::A ? ActionKind::VoteA : ActionKind::VoteB, 0};
  }
  static Action vote_a() { return {ActionKind::VoteA, 0}; }
  static Action vote_b() { return {ActionKind::VoteB, 0}; }
  static Action abstain() { return {ActionKind::Abstain, 0}; }
  static Action delegate(int to) { return {ActionKind::Delegate, to}; }

  bool operator==(const Action&) const = default;
};

struct InterimStrategy {
  Action on_a = Action::abstain();  // action when own signal is a
  Action on_b = Action::abstain();  // action when own signal is b

  bool responsive() const { return !(on_a == on_b); }
  const Action& on(State s) const { return s == State::a ? on_a : on_b; }
  bool operator==(const InterimStrategy&) const = default;
};

inline InterimStrategy sincere() {
  return {Action::vote_a(), Action::vote_b()};
}
inline InterimStrategy always(Action act) { return {act, act}; }
inline InterimStrategy always_vote(Alternative c) {
  return always(Action::vote(c));
}
inline InterimStrategy always_abstain() { return always(Action::abstain()); }
inline InterimStrategy always_delegate(int to) {
  return always(Action::delegate(to));
}
// Sincere analogue for RD non-representatives: route the vote through the
// mechanical representative matching the signal.
inline InterimStrategy rep_sincere() {
  return {Action::delegate(kRepA), Action::delegate(kRepB)};
}

using StrategyProfile = std::vector<InterimStrategy>;

bool action_valid(const Action& act, int voter_id, const Mechanism& mechanism,
                  int n);
void validate_profile(const Committee& committee, const Mechanism& mechanism,
                      const StrategyProfile& profile);  // throws

std::vector<Action> legal_actions(int voter_id, const Mechanism& mechanism,
                                  int n);
std::vector<InterimStrategy> legal_strategies(int voter_id,
                                              const Mechanism& mechanism,
                                              int n);

std::string to_string(const Action& act);
std::string to_string(const InterimStrategy& strategy);

}  // namespace liqdem
