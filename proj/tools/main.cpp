#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "liqdem/dominance.hpp"
#include "liqdem/equilibrium.hpp"
#include "liqdem/golden.hpp"
#include "liqdem/incomplete.hpp"
#include "liqdem/neutral.hpp"
#include "liqdem/outcome.hpp"
#include "liqdem/scenario.hpp"

namespace {

using liqdem::OrderedJson;

struct OutputOptions {
  std::string format = "table";
  std::string out;
};

void render_table(const OrderedJson& data, std::ostream& os,
                  const std::string& prefix = "") {
  for (auto it = data.begin(); it != data.end(); ++it) {
    std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
    if (it->is_object()) render_table(*it, os, key);
    else os << key << ": " << it->dump() << "\n";
  }
}

void emit(const OrderedJson& data, const OutputOptions& opts) {
  std::ofstream file;
  std::ostream* os = &std::cout;
  if (!opts.out.empty()) {
    file.open(opts.out);
    if (!file) throw std::runtime_error("cannot write to " + opts.out);
    os = &file;
  }
  if (opts.format == "record") *os << data.dump(2) << "\n";
  else render_table(data, *os);
}

liqdem::Mechanism pick_mechanism(const liqdem::Scenario& scenario,
                                 const std::string& flag) {
  if (flag.empty()) return scenario.mechanism;
  if (flag == "dd") return liqdem::Mechanism::dd();
  if (flag == "ld") return liqdem::Mechanism::ld();
  if (flag == "rd") {
    if (scenario.rd_sets.empty())
      throw std::runtime_error("scenario '" + scenario.id +
                               "' lists no rd_representative_sets");
    return liqdem::Mechanism::rd(scenario.rd_sets.front());
  }
  throw std::runtime_error("--mechanism must be one of dd, ld, rd");
}

OrderedJson profile_json(const liqdem::StrategyProfile& profile) {
  OrderedJson out = OrderedJson::array();
  for (const liqdem::InterimStrategy& s : profile)
    out.push_back({liqdem::action_token(s.on_a), liqdem::action_token(s.on_b)});
  return out;
}

OrderedJson eval_json(const liqdem::EvalReport& report) {
  OrderedJson out;
  out["p_correct"] = report.p_correct;
  out["p_correct_given_a"] = report.p_correct_given_a;
  out["p_correct_given_b"] = report.p_correct_given_b;
  out["p_a_given_a"] = report.p_a_given_a;
  out["p_a_given_b"] = report.p_a_given_b;
  out["p_majoritarian"] = report.p_majoritarian;
  out["voter_utilities"] = report.voter_utilities;
  return out;
}

OrderedJson neutral_json(const liqdem::NeutralProfile& neutral) {
  OrderedJson out;
  out["V"] = neutral.V;
  out["X"] = neutral.X;
  OrderedJson edges = OrderedJson::array();
  for (auto [from, to] : neutral.delegation_realization)
    edges.push_back({from, to});
  out["delegation_realization"] = edges;
  return out;
}

OrderedJson iewds_json(const liqdem::IEWDSReport& report) {
  OrderedJson out;
  out["rounds"] = report.rounds;
  out["eliminations"] = static_cast<int>(report.eliminations.size());
  out["budget_limited"] = report.budget_limited;
  out["solvability_decided"] = report.solvability_decided;
  out["solvable"] = report.solvable;
  if (report.solution_metrics)
    out["solution"] = eval_json(*report.solution_metrics);
  OrderedJson survivors = OrderedJson::array();
  for (const auto& set : report.survivors.sets)
    survivors.push_back(static_cast<int>(set.size()));
  out["surviving_strategies"] = survivors;
  return out;
}

std::string mechanism_name(const liqdem::Mechanism& m) {
  switch (m.kind) {
    case liqdem::MechanismKind::DD: return "dd";
    case liqdem::MechanismKind::LD: return "ld";
    default: {
      std::string name = "rd(";
      for (std::size_t i = 0; i < m.representatives.size(); ++i)
        name += (i ? "," : "") + std::to_string(m.representatives[i]);
      return name + ")";
    }
  }
}

int run(int argc, char** argv) {
  CLI::App app{"liquid-democracy committee analysis"};
  app.require_subcommand(1);

  std::string scenario_path, mechanism_flag;
  long long budget = 200000;
  OutputOptions output;
  auto add_common = [&](CLI::App* cmd, bool scenario_required) {
    auto* s = cmd->add_option("--scenario", scenario_path, "scenario file");
    if (scenario_required) s->required();
    cmd->add_option("--mechanism", mechanism_flag, "dd | ld | rd");
    cmd->add_option("--budget", budget, "dominance tuple budget");
    cmd->add_option("--out", output.out, "write the report to a file");
    cmd->add_option("--format", output.format, "table | record")
        ->check(CLI::IsMember({"table", "record"}));
  };

  CLI::App* evaluate = app.add_subcommand("evaluate", "evaluate a profile");
  add_common(evaluate, true);
  CLI::App* compare = app.add_subcommand("compare", "mechanism comparison");
  add_common(compare, true);
  CLI::App* iewds_cmd = app.add_subcommand("iewds", "iterated elimination");
  add_common(iewds_cmd, true);
  CLI::App* best_neutral =
      app.add_subcommand("best-neutral", "best neutral profile");
  add_common(best_neutral, true);
  CLI::App* cutoff = app.add_subcommand("cutoff", "delegation cutoff solver");
  add_common(cutoff, true);
  CLI::App* reproduce =
      app.add_subcommand("reproduce-paper", "run the reproduction suite");
  add_common(reproduce, false);

  CLI11_PARSE(app, argc, argv);

  if (evaluate->parsed()) {
    liqdem::Scenario sc = liqdem::load_scenario(scenario_path);
    liqdem::Mechanism mech = pick_mechanism(sc, mechanism_flag);
    liqdem::StrategyProfile profile = liqdem::build_profile(sc);
    OrderedJson report;
    report["scenario"] = sc.id;
    report["task"] = "evaluate";
    report["mechanism"] = mechanism_name(mech);
    report["profile"] = profile_json(profile);
    report["result"] = eval_json(liqdem::evaluate_profile(sc.committee, mech, profile));
    emit(report, output);
    return 0;
  }

  if (compare->parsed()) {
    liqdem::Scenario sc = liqdem::load_scenario(scenario_path);
    std::vector<liqdem::Mechanism> mechanisms = {liqdem::Mechanism::ld(),
                                                 liqdem::Mechanism::dd()};
    for (const auto& reps : sc.rd_sets)
      mechanisms.push_back(liqdem::Mechanism::rd(reps));
    OrderedJson report;
    report["scenario"] = sc.id;
    report["task"] = "compare";
    OrderedJson rows = OrderedJson::array();
    liqdem::IEWDSOptions opts;
    opts.dominance.tuple_budget = budget;
    for (const liqdem::Mechanism& mech : mechanisms) {
      OrderedJson row;
      row["mechanism"] = mechanism_name(mech);
      try {
        row["best_value"] =
            liqdem::best_equilibrium_search(sc.committee, mech).report.p_correct;
      } catch (const std::exception&) {
        row["best_value"] = "undecided";
      }
      try {
        row["best_neutral"] =
            liqdem::best_neutral_search(sc.committee, mech).report.p_correct;
      } catch (const std::exception&) {
        row["best_neutral"] = "undecided";
      }
      liqdem::IEWDSReport r = liqdem::iewds(sc.committee, mech, opts);
      row["iewds"] = !r.solvability_decided ? "undecided"
                     : r.solvable           ? "solvable"
                                            : "not solvable";
      rows.push_back(row);
    }
    report["rows"] = rows;
    emit(report, output);
    return 0;
  }

  if (iewds_cmd->parsed()) {
    liqdem::Scenario sc = liqdem::load_scenario(scenario_path);
    liqdem::Mechanism mech = pick_mechanism(sc, mechanism_flag);
    liqdem::IEWDSOptions opts;
    opts.dominance.tuple_budget = budget;
    OrderedJson report;
    report["scenario"] = sc.id;
    report["task"] = "iewds";
    report["mechanism"] = mechanism_name(mech);
    report["result"] = iewds_json(liqdem::iewds(sc.committee, mech, opts));
    emit(report, output);
    return 0;
  }

  if (best_neutral->parsed()) {
    liqdem::Scenario sc = liqdem::load_scenario(scenario_path);
    liqdem::Mechanism mech = pick_mechanism(sc, mechanism_flag);
    liqdem::BestNeutralResult r = liqdem::best_neutral_search(sc.committee, mech);
    OrderedJson report;
    report["scenario"] = sc.id;
    report["task"] = "best-neutral";
    report["mechanism"] = mechanism_name(mech);
    report["neutral"] = neutral_json(r.neutral);
    report["profile"] = profile_json(r.profile);
    report["result"] = eval_json(r.report);
    report["equilibrium"] = r.equilibrium;
    emit(report, output);
    return 0;
  }

  if (cutoff->parsed()) {
    liqdem::Scenario sc = liqdem::load_scenario(scenario_path);
    if (!sc.distribution)
      throw std::runtime_error("scenario '" + sc.id +
                               "': task cutoff needs a type_distribution");
    double expert = 0;
    std::optional<liqdem::UniformSegment> segment;
    for (const liqdem::VoterDistribution& vd : sc.distribution->voters) {
      for (const liqdem::TypeAtom& atom : vd.atoms)
        expert = std::max(expert, atom.precision);
      if (!segment && vd.segment) segment = vd.segment;
    }
    if (!segment)
      throw std::runtime_error("scenario '" + sc.id +
                               "': task cutoff needs a uniform segment");
    liqdem::CutoffSolution sol =
        liqdem::solve_campbell_cutoff(expert, segment->lo, segment->hi);
    OrderedJson report;
    report["scenario"] = sc.id;
    report["task"] = "cutoff";
    report["expert_precision"] = expert;
    report["support"] = {segment->lo, segment->hi};
    report["cutoff"] = sol.cutoff;
    report["boundary"] = sol.boundary;
    emit(report, output);
    return 0;
  }

  // reproduce-paper
  std::string dir = scenario_path.empty() ? "scenarios" : scenario_path;
  std::vector<liqdem::GoldenItem> items = liqdem::run_golden_suite(dir);
  int failures = 0;
  OrderedJson report;
  report["task"] = "reproduce-paper";
  OrderedJson rows = OrderedJson::array();
  for (const liqdem::GoldenItem& item : items) {
    if (!item.passed) ++failures;
    OrderedJson row;
    row["criterion"] = item.criterion;
    row["name"] = item.name;
    row["passed"] = item.passed;
    row["details"] = item.details;
    rows.push_back(row);
  }
  report["items"] = rows;
  report["item_count"] = static_cast<int>(items.size());
  report["failures"] = failures;
  if (output.format == "record") {
    emit(report, output);
  } else {
    std::ofstream file;
    std::ostream* os = &std::cout;
    if (!output.out.empty()) {
      file.open(output.out);
      os = &file;
    }
    for (const liqdem::GoldenItem& item : items)
      *os << (item.passed ? "PASS" : "FAIL") << "  [" << item.criterion << "] "
          << item.name << " — " << item.details << "\n";
    *os << failures << " failures out of " << items.size() << " items\n";
  }
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
