#pragma once

#include <string>
#include <vector>

namespace liqdem {

// One check of the reproduction suite driven by `reproduce-paper`.
// `criterion` groups items; checks within a group share a time budget.
struct GoldenItem {
  int criterion = 0;
  std::string name;
  bool passed = false;
  std::string details;  // computed vs expected values
};

std::vector<GoldenItem> run_golden_suite(const std::string& scenario_dir);

}  // namespace liqdem
