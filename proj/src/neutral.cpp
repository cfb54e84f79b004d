#include "liqdem/neutral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <tuple>
#include <stdexcept>
#include <string>

#include "liqdem/np_weights.hpp"

namespace liqdem {

namespace {

// Role of one voter in a canonical neutral profile: holds `votes` votes
// (0 = delegator) and abstains with them or casts them sincerely.
struct Role {
  int votes = 1;
  bool abstains = false;
};

struct GroupOption {
  std::vector<int> active;  // held votes of sincere holders, descending
  int abstainers = 0;       // holders of a single vote who abstain
  int delegators = 0;
  int vote_mass = 0;        // sum(active) + abstainers
};

struct TypeGroup {
  std::vector<int> members;  // voter ids, ascending
  double precision = 0.5;
  std::vector<GroupOption> options;
};

void collect_options(int size, int max_hold, bool allow_delegation,
                     bool multi_hold, std::vector<int>& active,
                     int active_sum, int next_max,
                     std::vector<GroupOption>& out) {
  int used = static_cast<int>(active.size());
  for (int abstainers = 0; abstainers + used <= size; ++abstainers) {
    int delegators = size - used - abstainers;
    if (delegators > 0 && !allow_delegation) break;
    out.push_back({active, abstainers, delegators,
                   active_sum + abstainers});
  }
  if (used == size) return;
  int cap = multi_hold ? std::min(next_max, max_hold - active_sum) : 1;
  for (int v = cap; v >= 1; --v) {
    active.push_back(v);
    collect_options(size, max_hold, allow_delegation, multi_hold, active,
                    active_sum + v, v, out);
    active.pop_back();
  }
}

// P(sincere weighted majority of `holders` picks the correct alternative)
// where each holder casts `votes` votes on their signal; ties count half.
// State-symmetric, so one pass suffices.
double margin_dp(const std::vector<std::pair<double, int>>& holders, int n) {
  std::vector<double> dist(2 * n + 1, 0.0);
  dist[n] = 1.0;  // margin offset by n
  std::vector<double> next(2 * n + 1);
  for (auto [q, v] : holders) {
    std::fill(next.begin(), next.end(), 0.0);
    for (int m = 0; m <= 2 * n; ++m) {
      if (dist[m] == 0.0) continue;
      next[m + v] += dist[m] * q;
      next[m - v] += dist[m] * (1.0 - q);
    }
    dist.swap(next);
  }
  double p = 0.5 * dist[n];
  for (int m = n + 1; m <= 2 * n; ++m) p += dist[m];
  return p;
}

InterimStrategy sincere_analogue() {
  return {Action::delegate(kRepA), Action::delegate(kRepB)};
}

// Realizes one canonical candidate (roles per voter id) as a profile plus
// its (V, X) record. Delegators are assigned lowest-index-first.
struct Realization {
  NeutralProfile neutral;
  StrategyProfile profile;
};

Realization realize(const Committee& committee, const Mechanism& mechanism,
                    const std::vector<Role>& roles) {
  const int n = committee.size();
  Realization r;
  r.neutral.V.resize(n);
  r.profile.resize(n);
  for (int i = 1; i <= n; ++i) {
    r.neutral.V[i - 1] = roles[i - 1].votes;
    if (roles[i - 1].abstains && roles[i - 1].votes > 0)
      r.neutral.X.push_back(i);
  }
  std::vector<int> demand(n + 1, 0);
  for (int i = 1; i <= n; ++i)
    if (roles[i - 1].votes > 0) demand[i] = roles[i - 1].votes - 1;
  int recipient = 1;
  for (int i = 1; i <= n; ++i) {
    const Role& role = roles[i - 1];
    if (role.votes == 0) {
      while (recipient <= n && demand[recipient] == 0) ++recipient;
      if (recipient > n)
        throw std::logic_error("delegator without a vote recipient");
      --demand[recipient];
      r.neutral.delegation_realization.push_back({i, recipient});
      r.profile[i - 1] = always_delegate(recipient);
    } else if (role.abstains) {
      r.profile[i - 1] = always_abstain();
    } else if (mechanism.kind == MechanismKind::RD &&
               !mechanism.is_representative(i)) {
      r.profile[i - 1] = sincere_analogue();
    } else {
      r.profile[i - 1] = sincere();
    }
  }
  return r;
}

}  // namespace

StrategyProfile profile_from_vx(const Committee& committee,
                                const std::vector<int>& V,
                                const std::vector<int>& X) {
  const int n = committee.size();
  if (static_cast<int>(V.size()) != n)
    throw std::invalid_argument("V must have one entry per voter");
  int total = 0;
  for (int v : V) {
    if (v < 0) throw std::invalid_argument("V entries must be nonnegative");
    total += v;
  }
  if (total != n)
    throw std::invalid_argument("V must sum to the committee size");
  std::vector<bool> abstains(n + 1, false);
  for (int i : X) {
    if (i < 1 || i > n) throw std::invalid_argument("X contains a bad voter id");
    if (V[i - 1] == 0)
      throw std::invalid_argument("X may only contain vote holders");
    abstains[i] = true;
  }
  std::vector<Role> roles(n);
  for (int i = 1; i <= n; ++i) roles[i - 1] = {V[i - 1], abstains[i]};
  return realize(committee, Mechanism::ld(), roles).profile;
}

bool is_neutral(const Mechanism& mechanism, const StrategyProfile& profile) {
  for (const InterimStrategy& s : profile) {
    if (s.on_a == Action::vote_a() && s.on_b == Action::vote_b()) continue;
    if (s.on_a == Action::abstain() && s.on_b == Action::abstain()) continue;
    if (s.on_a.kind == ActionKind::Delegate && s.on_a == s.on_b &&
        s.on_a.target >= 1)
      continue;
    if (mechanism.kind == MechanismKind::RD &&
        s.on_a == Action::delegate(kRepA) && s.on_b == Action::delegate(kRepB))
      continue;
    return false;
  }
  return true;
}

std::optional<NeutralProfile> vx_of_profile(const Committee& committee,
                                            const StrategyProfile& profile) {
  const int n = committee.size();
  if (!is_neutral(Mechanism::ld(), profile)) return std::nullopt;
  NeutralProfile out;
  out.V.assign(n, 0);
  for (int i = 1; i <= n; ++i) {
    // follow the (unconditional) delegation chain to its holder
    int cur = i, steps = 0;
    while (profile[cur - 1].on_a.kind == ActionKind::Delegate) {
      cur = profile[cur - 1].on_a.target;
      if (++steps > n) return std::nullopt;  // cycle
    }
    ++out.V[cur - 1];
    if (cur != i)
      out.delegation_realization.push_back({i, profile[i - 1].on_a.target});
  }
  for (int i = 1; i <= n; ++i) {
    if (profile[i - 1].on_a.kind == ActionKind::Delegate) out.V[i - 1] = 0;
    else if (profile[i - 1].on_a.kind == ActionKind::Abstain) out.X.push_back(i);
  }
  return out;
}

BestNeutralResult best_neutral_search(const Committee& committee,
                                      const Mechanism& mechanism,
                                      const NeutralSearchOptions& options) {
  const int n = committee.size();
  const bool ld = mechanism.kind == MechanismKind::LD;
  const bool rd = mechanism.kind == MechanismKind::RD;

  // Same-type voters are interchangeable; enumerate role multisets per group.
  std::map<std::tuple<int, int, bool>, std::vector<int>> keyed;
  for (int i = 1; i <= n; ++i) {
    const VoterType& t = committee.voter(i);
    bool rep = !rd || mechanism.is_representative(i);
    keyed[{static_cast<int>(t.preference),
           static_cast<int>(std::llround(t.precision * 1e9)), rep}]
        .push_back(i);
  }
  std::vector<TypeGroup> groups;
  for (auto& [key, members] : keyed) {
    TypeGroup g;
    g.members = members;
    g.precision = committee.voter(members.front()).precision;
    bool rep = std::get<2>(key);
    bool allow_delegation = ld || (rd && !rep);
    bool multi_hold = ld || (rd && rep);  // only these can receive votes
    std::vector<int> active;
    collect_options(static_cast<int>(members.size()), n, allow_delegation,
                    multi_hold, active, 0, n, g.options);
    groups.push_back(std::move(g));
  }
  std::sort(groups.begin(), groups.end(),
            [](const TypeGroup& a, const TypeGroup& b) {
              return a.members.front() < b.members.front();
            });

  long long combos = 1;
  for (const TypeGroup& g : groups) {
    combos *= static_cast<long long>(g.options.size());
    if (combos > options.candidate_cap)
      throw std::runtime_error("best_neutral_search: candidate cap exceeded");
  }

  double best = -1;
  std::vector<int> best_choice;
  std::vector<int> choice(groups.size(), 0);
  std::vector<std::pair<double, int>> holders;
  auto consider_leaf = [&] {
    holders.clear();
    bool delegators = false, capacity = false;
    for (std::size_t g = 0; g < groups.size(); ++g) {
      const GroupOption& opt = groups[g].options[choice[g]];
      if (opt.delegators > 0) delegators = true;
      for (int v : opt.active) {
        holders.push_back({groups[g].precision, v});
        if (v > 1) capacity = true;
      }
    }
    if (delegators && !capacity) return;  // nowhere to send delegated votes
    double p = margin_dp(holders, n);
    if (p > best + kUtilityEps) {
      best = p;
      best_choice = choice;
    }
  };
  // depth-first product over group options, pruned by the vote-mass budget
  auto rec = [&](auto&& self, std::size_t g, int mass) -> void {
    if (g == groups.size()) {
      if (mass == n) consider_leaf();
      return;
    }
    for (std::size_t o = 0; o < groups[g].options.size(); ++o) {
      int next = mass + groups[g].options[o].vote_mass;
      if (next > n) continue;
      choice[g] = static_cast<int>(o);
      self(self, g + 1, next);
    }
    choice[g] = 0;
  };
  rec(rec, 0, 0);
  if (best < 0)
    throw std::runtime_error("best_neutral_search: no feasible neutral profile");

  std::vector<Role> roles(n);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const GroupOption& opt = groups[g].options[best_choice[g]];
    std::size_t k = 0;
    for (int v : opt.active) roles[groups[g].members[k++] - 1] = {v, false};
    for (int j = 0; j < opt.abstainers; ++j)
      roles[groups[g].members[k++] - 1] = {1, true};
    for (int j = 0; j < opt.delegators; ++j)
      roles[groups[g].members[k++] - 1] = {0, false};
  }
  Realization r = realize(committee, mechanism, roles);
  BestNeutralResult result;
  result.neutral = std::move(r.neutral);
  result.profile = std::move(r.profile);
  result.report = evaluate_profile(committee, mechanism, result.profile);
  if (options.check_equilibrium)
    result.equilibrium = is_equilibrium(committee, mechanism, result.profile);
  return result;
}

namespace {

struct Prop2Roster {
  std::vector<int> experts, uninformed, partisans;
};

Prop2Roster prop2_roster(const Committee& committee) {
  Prop2Roster r;
  for (int i = 1; i <= committee.size(); ++i) {
    const VoterType& t = committee.voter(i);
    if (t.preference != Preference::Independent) r.partisans.push_back(i);
    else if (t.precision > 0.5) r.experts.push_back(i);
    else r.uninformed.push_back(i);
  }
  return r;
}

// true iff sincere weighted majority with integer weights d reproduces the
// first-best comparison at every expert signal profile
bool preserves_first_best(const std::vector<double>& w,
                          const std::vector<int>& d) {
  const int e = static_cast<int>(w.size());
  for (std::uint32_t mask = 0; mask < (1u << e); ++mask) {
    double fb = 0;
    long long score = 0;
    for (int k = 0; k < e; ++k) {
      int sign = (mask >> k) & 1u ? 1 : -1;
      fb += sign * w[k];
      score += sign * d[k];
    }
    int fb_sign = std::abs(fb) <= 1e-12 ? 0 : (fb > 0 ? 1 : -1);
    int sc_sign = score == 0 ? 0 : (score > 0 ? 1 : -1);
    if (fb_sign != sc_sign) return false;
  }
  return true;
}

}  // namespace

Prop2Result prop2_construct(const Committee& committee,
                            std::optional<double> scale) {
  if (std::abs(committee.prior - 0.5) > 1e-12)
    throw std::invalid_argument("prop2_construct requires prior 0.5");
  Prop2Roster roster = prop2_roster(committee);
  if (roster.experts.empty())
    throw std::invalid_argument("prop2_construct requires an informed expert");
  VoterCounts counts = classify_voters(committee);
  if (counts.n_A < counts.n_B)
    throw std::invalid_argument("prop2_construct requires n_A >= n_B");

  std::vector<double> w;
  for (int i : roster.experts) {
    double q = committee.voter(i).precision;
    if (q >= 1.0)
      throw std::invalid_argument(
          "prop2_construct: a perfectly informed expert has infinite weight");
    w.push_back(optimal_weight(q));
  }
  const int e = static_cast<int>(w.size());
  double w_min = *std::min_element(w.begin(), w.end());

  double k = 0;
  std::vector<int> d(e);
  auto allocation_at = [&](double kk) {
    std::vector<int> out(e);
    for (int j = 0; j < e; ++j) out[j] = guarded_floor(kk * w[j]);
    return out;
  };
  if (scale) {
    k = *scale;
    d = allocation_at(k);
    for (int v : d)
      if (v < 1)
        throw std::invalid_argument("prop2_construct: scale too small");
    if (!preserves_first_best(w, d))
      throw std::invalid_argument(
          "prop2_construct: scale does not preserve first-best comparisons");
  } else {
    // Scan the breakpoints of k -> floor(k w_j); the total vote count is
    // nondecreasing in k, so the first valid breakpoint minimizes it.
    std::vector<double> breakpoints;
    for (int j = 0; j < e; ++j)
      for (int m = 1; m <= 64; ++m) breakpoints.push_back(m / w[j]);
    std::sort(breakpoints.begin(), breakpoints.end());
    bool found = false;
    for (double kk : breakpoints) {
      if (kk * w_min < 1.0 - 1e-9) continue;
      std::vector<int> cand = allocation_at(kk);
      if (preserves_first_best(w, cand)) {
        k = kk;
        d = std::move(cand);
        found = true;
        break;
      }
    }
    if (!found)
      throw std::runtime_error(
          "prop2_construct: no integer allocation found up to 64 votes per "
          "expert");
  }

  int unresponsive = counts.n_A - counts.n_B;
  int delegators = 0;
  for (int v : d) delegators += v - 1;
  int needed = unresponsive + delegators;
  if (static_cast<int>(roster.uninformed.size()) < needed)
    throw std::invalid_argument(
        "prop2_construct: need at least " + std::to_string(needed) +
        " uninformed voters (have " +
        std::to_string(roster.uninformed.size()) + ")");

  const int n = committee.size();
  Prop2Result result;
  result.scale_k = k;
  result.expert_votes = d;
  result.profile.resize(n);
  result.kernel.V.assign(n, 1);
  for (int i : roster.partisans)
    result.profile[i - 1] = always_vote(
        committee.voter(i).preference == Preference::PartisanA ? Alternative::A
                                                               : Alternative::B);
  std::size_t next = 0;
  for (int j = 0; j < unresponsive; ++j)
    result.profile[roster.uninformed[next++] - 1] = always_vote(Alternative::B);
  for (int j = 0; j < e; ++j) {
    result.profile[roster.experts[j] - 1] = sincere();
    result.kernel.V[roster.experts[j] - 1] = d[j];
    for (int v = 1; v < d[j]; ++v) {
      int id = roster.uninformed[next++];
      result.profile[id - 1] = always_delegate(roster.experts[j]);
      result.kernel.V[id - 1] = 0;
      result.kernel.delegation_realization.push_back({id, roster.experts[j]});
    }
  }
  while (next < roster.uninformed.size()) {
    int id = roster.uninformed[next++];
    result.profile[id - 1] = always_abstain();
    result.kernel.X.push_back(id);
  }

  Committee bench;
  bench.prior = committee.prior;
  for (int i : roster.experts) bench.voters.push_back(committee.voter(i));
  result.first_best = first_best_probability(bench);
  result.p_correct =
      evaluate_profile(committee, Mechanism::ld(), result.profile).p_correct;
  result.certificate = std::abs(result.p_correct - result.first_best) <= 1e-12;
  return result;
}

namespace {

// single expert + common-precision nonexperts, everyone independent
std::pair<int, double> expert_and_weight(const Committee& committee) {
  int expert = 0;
  double r = 0;
  for (int i = 1; i <= committee.size(); ++i) {
    if (committee.voter(i).preference != Preference::Independent)
      throw std::invalid_argument("committee must be all independent");
    if (committee.voter(i).precision > r) {
      r = committee.voter(i).precision;
      expert = i;
    }
  }
  double q = -1;
  for (int i = 1; i <= committee.size(); ++i) {
    if (i == expert) continue;
    double qi = committee.voter(i).precision;
    if (qi >= r) throw std::invalid_argument("expert precision must be unique");
    if (q < 0) q = qi;
    else if (std::abs(q - qi) > 1e-12)
      throw std::invalid_argument("nonexperts must share one precision");
  }
  if (q <= 0.5)
    throw std::invalid_argument("nonexpert precision must exceed 0.5");
  double weight = r >= 1.0 ? std::numeric_limits<double>::infinity()
                           : relative_weight(r, q);
  return {expert, weight};
}

NeutralProfile expert_delegation_profile(const Committee& committee,
                                         const std::vector<int>& experts,
                                         const std::vector<int>& counts) {
  const int n = committee.size();
  NeutralProfile out;
  out.V.assign(n, 1);
  std::vector<bool> is_expert(n + 1, false);
  for (int i : experts) is_expert[i] = true;
  int cursor = 1;
  for (std::size_t j = 0; j < experts.size(); ++j) {
    out.V[experts[j] - 1] = 1 + counts[j];
    for (int c = 0; c < counts[j]; ++c) {
      while (cursor <= n && (is_expert[cursor] || out.V[cursor - 1] == 0))
        ++cursor;
      if (cursor > n)
        throw std::invalid_argument("not enough nonexperts to delegate");
      out.V[cursor - 1] = 0;
      out.delegation_realization.push_back({cursor, experts[j]});
    }
  }
  return out;
}

}  // namespace

NeutralProfile prop3_predict(const Committee& committee) {
  const int n = committee.size();
  if (n % 2 == 0) throw std::invalid_argument("committee size must be odd");
  auto [expert, weight] = expert_and_weight(committee);
  int d = 0;
  if (weight >= 2.0)
    d = std::min(std::isinf(weight) ? n : guarded_floor(weight) - 1,
                 (n - 1) / 2);
  return expert_delegation_profile(committee, {expert}, {d});
}

NeutralProfile prop4_predict(const Committee& committee) {
  const int n = committee.size();
  double q = 2.0;
  for (int i = 1; i <= n; ++i) {
    if (committee.voter(i).preference != Preference::Independent)
      throw std::invalid_argument("committee must be all independent");
    q = std::min(q, committee.voter(i).precision);
  }
  if (q <= 0.5)
    throw std::invalid_argument("nonexpert precision must exceed 0.5");
  std::vector<int> experts;
  std::vector<int> counts;
  for (int i = 1; i <= n; ++i) {
    double r = committee.voter(i).precision;
    if (r <= q + 1e-12) continue;
    experts.push_back(i);
    double weight = r >= 1.0 ? std::numeric_limits<double>::infinity()
                             : relative_weight(r, q);
    counts.push_back(weight < 2.0 ? 0
                     : std::isinf(weight)
                         ? (n - 1) / 2
                         : guarded_floor(weight) - 1);
  }
  if (experts.empty())
    throw std::invalid_argument("committee has no expert");
  return expert_delegation_profile(committee, experts, counts);
}

}  // namespace liqdem
