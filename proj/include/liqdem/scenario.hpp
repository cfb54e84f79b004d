#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "liqdem/incomplete.hpp"
#include "liqdem/model.hpp"

namespace liqdem {

using OrderedJson = nlohmann::ordered_json;

// Profile constructor named in a scenario file.
struct ProfileSpec {
  std::string kind;  // actions | vx | prop2 | prop3 | prop4 | threshold
  std::vector<std::pair<std::string, std::string>> actions;  // kind=actions
  std::vector<int> V, X;                                     // kind=vx
  std::optional<double> scale;                               // kind=prop2
  std::optional<double> cutoff;                              // kind=threshold
};

struct Scenario {
  std::string id;
  Committee committee;
  Mechanism mechanism;
  std::optional<TypeDistribution> distribution;
  std::optional<ProfileSpec> profile;
  std::vector<std::vector<int>> rd_sets;  // representative sets to compare
};

Action parse_action(const std::string& token, int voter, int n,
                    const Mechanism& mechanism);
std::string action_token(const Action& action);

Scenario scenario_from_json(const OrderedJson& data);
Scenario load_scenario(const std::string& path);
OrderedJson scenario_to_json(const Scenario& scenario);

// Realizes the scenario's complete-information profile spec (kinds actions,
// vx, prop2, prop3, prop4). Throws for threshold specs.
StrategyProfile build_profile(const Scenario& scenario);

}  // namespace liqdem
