#include "liqdem/scenario.hpp"

#include <fstream>
#include <stdexcept>

#include "liqdem/neutral.hpp"

namespace liqdem {

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& why) {
  throw std::invalid_argument("scenario field '" + field + "': " + why);
}

Preference parse_preference(const std::string& token,
                            const std::string& field) {
  if (token == "A") return Preference::PartisanA;
  if (token == "B") return Preference::PartisanB;
  if (token == "I") return Preference::Independent;
  fail(field, "expected one of A, B, I (got '" + token + "')");
}

std::string preference_token(Preference p) {
  switch (p) {
    case Preference::PartisanA: return "A";
    case Preference::PartisanB: return "B";
    default: return "I";
  }
}

MechanismKind parse_kind(const std::string& token, const std::string& field) {
  if (token == "dd") return MechanismKind::DD;
  if (token == "ld") return MechanismKind::LD;
  if (token == "rd") return MechanismKind::RD;
  fail(field, "expected one of dd, ld, rd (got '" + token + "')");
}

TypeDistribution parse_distribution(const OrderedJson& data, double prior) {
  TypeDistribution dist;
  dist.prior = prior;
  if (!data.contains("voters"))
    fail("type_distribution.voters", "missing");
  int v = 0;
  for (const OrderedJson& voter : data.at("voters")) {
    std::string field = "type_distribution.voters[" + std::to_string(v++) + "]";
    VoterDistribution vd;
    for (const OrderedJson& atom : voter.value("atoms", OrderedJson::array())) {
      vd.atoms.push_back(
          {parse_preference(atom.at("preference").get<std::string>(),
                            field + ".preference"),
           atom.at("precision").get<double>(),
           atom.at("probability").get<double>()});
    }
    if (voter.contains("segment")) {
      const OrderedJson& seg = voter.at("segment");
      vd.segment = UniformSegment{seg.at("lo").get<double>(),
                                  seg.at("hi").get<double>(),
                                  seg.at("probability").get<double>()};
    }
    dist.voters.push_back(std::move(vd));
  }
  dist.validate();
  return dist;
}

}  // namespace

Action parse_action(const std::string& token, int voter, int n,
                    const Mechanism& mechanism) {
  std::string field = "profile.actions[" + std::to_string(voter - 1) + "]";
  Action act;
  if (token == "a") act = Action::vote_a();
  else if (token == "b") act = Action::vote_b();
  else if (token == "x") act = Action::abstain();
  else if (token == "d_a*") act = Action::delegate(kRepA);
  else if (token == "d_b*") act = Action::delegate(kRepB);
  else if (token.size() > 1 && token[0] == 'd') {
    int target = 0;
    try {
      target = std::stoi(token.substr(1));
    } catch (const std::exception&) {
      fail(field, "bad action token '" + token + "'");
    }
    act = Action::delegate(target);
  } else {
    fail(field, "bad action token '" + token + "'");
  }
  if (!action_valid(act, voter, mechanism, n))
    fail(field, "action '" + token + "' is illegal for voter " +
                    std::to_string(voter) + " under this mechanism");
  return act;
}

std::string action_token(const Action& action) {
  switch (action.kind) {
    case ActionKind::VoteA: return "a";
    case ActionKind::VoteB: return "b";
    case ActionKind::Abstain: return "x";
    case ActionKind::Delegate:
      if (action.target == kRepA) return "d_a*";
      if (action.target == kRepB) return "d_b*";
      return "d" + std::to_string(action.target);
  }
  return "x";
}

Scenario scenario_from_json(const OrderedJson& data) {
  Scenario s;
  s.id = data.value("id", std::string("unnamed"));
  if (!data.contains("prior")) fail("prior", "missing");
  s.committee.prior = data.at("prior").get<double>();

  if (!data.contains("voters")) fail("voters", "missing");
  int v = 0;
  for (const OrderedJson& voter : data.at("voters")) {
    std::string field = "voters[" + std::to_string(v++) + "]";
    if (!voter.contains("preference")) fail(field + ".preference", "missing");
    if (!voter.contains("precision")) fail(field + ".precision", "missing");
    s.committee.voters.push_back(
        {parse_preference(voter.at("preference").get<std::string>(),
                          field + ".preference"),
         voter.at("precision").get<double>()});
  }
  s.committee.validate();

  const OrderedJson& mech = data.contains("mechanism")
                                ? data.at("mechanism")
                                : OrderedJson{{"kind", "ld"}};
  s.mechanism.kind =
      parse_kind(mech.value("kind", std::string("ld")), "mechanism.kind");
  if (mech.contains("representatives"))
    s.mechanism.representatives =
        mech.at("representatives").get<std::vector<int>>();
  s.mechanism.validate(s.committee);

  if (data.contains("type_distribution"))
    s.distribution =
        parse_distribution(data.at("type_distribution"), s.committee.prior);

  if (data.contains("profile")) {
    const OrderedJson& p = data.at("profile");
    ProfileSpec spec;
    spec.kind = p.value("kind", std::string());
    if (spec.kind == "actions") {
      if (!p.contains("actions")) fail("profile.actions", "missing");
      for (const OrderedJson& pair : p.at("actions")) {
        if (!pair.is_array() || pair.size() != 2)
          fail("profile.actions", "each entry must be [on_a, on_b]");
        spec.actions.push_back({pair[0].get<std::string>(),
                                pair[1].get<std::string>()});
      }
    } else if (spec.kind == "vx") {
      spec.V = p.at("V").get<std::vector<int>>();
      spec.X = p.value("X", std::vector<int>{});
    } else if (spec.kind == "prop2") {
      if (p.contains("scale")) spec.scale = p.at("scale").get<double>();
    } else if (spec.kind == "threshold") {
      if (p.contains("cutoff")) spec.cutoff = p.at("cutoff").get<double>();
    } else if (spec.kind != "prop3" && spec.kind != "prop4") {
      fail("profile.kind", "unknown constructor '" + spec.kind + "'");
    }
    s.profile = std::move(spec);
  }

  if (data.contains("rd_representative_sets"))
    s.rd_sets =
        data.at("rd_representative_sets").get<std::vector<std::vector<int>>>();
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario file: " + path);
  OrderedJson data;
  try {
    in >> data;
  } catch (const std::exception& e) {
    throw std::runtime_error("scenario file " + path + ": " + e.what());
  }
  try {
    return scenario_from_json(data);
  } catch (const std::exception& e) {
    throw std::runtime_error("scenario file " + path + ": " + e.what());
  }
}

OrderedJson scenario_to_json(const Scenario& s) {
  OrderedJson data;
  data["id"] = s.id;
  data["prior"] = s.committee.prior;
  data["voters"] = OrderedJson::array();
  for (const VoterType& t : s.committee.voters)
    data["voters"].push_back({{"preference", preference_token(t.preference)},
                              {"precision", t.precision}});
  OrderedJson mech;
  mech["kind"] = s.mechanism.kind == MechanismKind::DD   ? "dd"
                 : s.mechanism.kind == MechanismKind::LD ? "ld"
                                                         : "rd";
  if (!s.mechanism.representatives.empty())
    mech["representatives"] = s.mechanism.representatives;
  data["mechanism"] = mech;
  if (s.distribution) {
    OrderedJson voters = OrderedJson::array();
    for (const VoterDistribution& vd : s.distribution->voters) {
      OrderedJson voter;
      voter["atoms"] = OrderedJson::array();
      for (const TypeAtom& atom : vd.atoms)
        voter["atoms"].push_back(
            {{"preference", preference_token(atom.preference)},
             {"precision", atom.precision},
             {"probability", atom.probability}});
      if (vd.segment)
        voter["segment"] = {{"lo", vd.segment->lo},
                            {"hi", vd.segment->hi},
                            {"probability", vd.segment->probability}};
      voters.push_back(voter);
    }
    data["type_distribution"] = {{"voters", voters}};
  }
  if (s.profile) {
    OrderedJson p;
    p["kind"] = s.profile->kind;
    if (s.profile->kind == "actions") {
      p["actions"] = OrderedJson::array();
      for (auto& [on_a, on_b] : s.profile->actions)
        p["actions"].push_back({on_a, on_b});
    } else if (s.profile->kind == "vx") {
      p["V"] = s.profile->V;
      p["X"] = s.profile->X;
    }
    if (s.profile->scale) p["scale"] = *s.profile->scale;
    if (s.profile->cutoff) p["cutoff"] = *s.profile->cutoff;
    data["profile"] = p;
  }
  if (!s.rd_sets.empty()) data["rd_representative_sets"] = s.rd_sets;
  return data;
}

StrategyProfile build_profile(const Scenario& scenario) {
  if (!scenario.profile)
    throw std::invalid_argument("scenario '" + scenario.id +
                                "' has no profile spec");
  const ProfileSpec& spec = *scenario.profile;
  const int n = scenario.committee.size();
  if (spec.kind == "actions") {
    if (static_cast<int>(spec.actions.size()) != n)
      fail("profile.actions", "expected one [on_a, on_b] pair per voter");
    StrategyProfile profile(n);
    for (int i = 1; i <= n; ++i)
      profile[i - 1] = {
          parse_action(spec.actions[i - 1].first, i, n, scenario.mechanism),
          parse_action(spec.actions[i - 1].second, i, n, scenario.mechanism)};
    return profile;
  }
  if (spec.kind == "vx")
    return profile_from_vx(scenario.committee, spec.V, spec.X);
  if (spec.kind == "prop2")
    return prop2_construct(scenario.committee, spec.scale).profile;
  if (spec.kind == "prop3") {
    NeutralProfile p = prop3_predict(scenario.committee);
    return profile_from_vx(scenario.committee, p.V, p.X);
  }
  if (spec.kind == "prop4") {
    NeutralProfile p = prop4_predict(scenario.committee);
    return profile_from_vx(scenario.committee, p.V, p.X);
  }
  throw std::invalid_argument("scenario '" + scenario.id + "': profile kind '" +
                              spec.kind +
                              "' does not build a complete-information profile");
}

}  // namespace liqdem
