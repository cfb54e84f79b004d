#pragma once

#include <string>
#include <vector>

#include "liqdem/model.hpp"
#include "liqdem/scenario.hpp"

namespace liqdem::testing {

inline Committee make_committee(double prior,
                                std::vector<std::pair<char, double>> types) {
  Committee c;
  c.prior = prior;
  for (auto [pref, q] : types) {
    Preference p = pref == 'A'   ? Preference::PartisanA
                   : pref == 'B' ? Preference::PartisanB
                                 : Preference::Independent;
    c.voters.push_back({p, q});
  }
  c.validate();
  return c;
}

inline Committee uniform_committee(int n, double q) {
  std::vector<std::pair<char, double>> types(n, {'I', q});
  return make_committee(0.5, types);
}

// one expert with precision r in the last seat
inline Committee single_expert(int n, double q, double r) {
  std::vector<std::pair<char, double>> types(n - 1, {'I', q});
  types.push_back({'I', r});
  return make_committee(0.5, types);
}

inline Scenario load_bundled(const std::string& name) {
  return load_scenario(std::string(SCENARIO_DIR) + "/" + name + ".json");
}

}  // namespace liqdem::testing
