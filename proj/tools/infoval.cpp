// Command line front end: exposes the VOI calculators, the inspection
// solvers, the oversight equilibrium solver, the market harness, the
// randomized verification suites and the scenario generator. Every run is
// also persisted as a run record for replay.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "infoval/admissible.hpp"
#include "infoval/errors.hpp"
#include "infoval/generator.hpp"
#include "infoval/market.hpp"
#include "infoval/oversight.hpp"
#include "infoval/runlog.hpp"
#include "infoval/scenario.hpp"
#include "infoval/verify.hpp"

namespace {

using namespace infoval;
using nlohmann::ordered_json;

struct GlobalOpts {
  std::string format = "table";
  std::string run_dir;
  std::string scenario_path;
  int workers = 1;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string resolve_run_dir(const GlobalOpts& opts) {
  if (!opts.run_dir.empty()) return opts.run_dir;
  if (const char* env = std::getenv("INFOVAL_RUN_DIR")) return env;
  return "runs";
}

int finish(const GlobalOpts& opts, RunRecord& record,
           std::chrono::steady_clock::time_point start) {
  record.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - start)
                       .count();
  std::cout << emit_report(record,
                           opts.format == "json" ? ReportFormat::kJson : ReportFormat::kTable);
  write_run_record(resolve_run_dir(opts), record);
  return record.verdict == "fail" ? 1 : 0;
}

Scenario load_with_digest(const GlobalOpts& opts, RunRecord& record) {
  std::string bytes = read_file(opts.scenario_path);
  record.scenario_digest = digest_bytes(bytes);
  Scenario scenario = parse_scenario(bytes);
  record.scenario_name = scenario.name;
  return scenario;
}

// ---------------------------------------------------------------------- voi

int cmd_voi(const GlobalOpts& opts) {
  auto start = std::chrono::steady_clock::now();
  RunRecord record;
  record.command = "voi";
  Scenario scenario = load_with_digest(opts, record);

  std::vector<std::vector<std::string>> rows;
  auto add_good = [&](const InfoGood& good) {
    VoiReport report = make_voi_report(scenario.problem, scenario.space, good,
                                       scenario.true_outcome);
    rows.push_back({good.variable.name(), num_cell(good.price), num_cell(report.realized),
                    num_cell(report.ex_post), num_cell(report.ex_ante),
                    scenario.problem.actions[report.best_action_prior],
                    scenario.problem.actions[report.best_action_posterior]});
  };
  if (scenario.ladder_spec && scenario.ladder_spec->mode == "fixed") {
    for (const auto& level : scenario.ladder_spec->levels) {
      for (const auto& offer : level) {
        add_good(InfoGood::from_outcome(scenario.variable(offer.variable),
                                        scenario.true_outcome, offer.price));
      }
    }
  } else {
    for (const auto& var : scenario.variables) {
      add_good(InfoGood::from_outcome(var, scenario.true_outcome, 0.0));
    }
  }
  record.body["voi"] = make_table(
      "value of information (realized value " +
          scenario.space.outcome(scenario.true_outcome) + ")",
      {"good", "price", "realized", "ex_post", "ex_ante", "prior_action", "posterior_action"},
      rows);
  return finish(opts, record, start);
}

// ------------------------------------------------------------------ inspect

int cmd_inspect(const GlobalOpts& opts, const std::string& mode, int depth_flag) {
  auto start = std::chrono::steady_clock::now();
  RunRecord record;
  record.command = "inspect";
  Scenario scenario = load_with_digest(opts, record);
  OfferLadder ladder = scenario.build_ladder();
  int depth = depth_flag > 0 ? depth_flag : scenario.params.depth;

  std::vector<std::vector<std::string>> rows;
  auto add_plan = [&](const std::string& label, const PurchasePlan& plan) {
    double realized = node_value(scenario.problem, scenario.space, ladder, depth,
                                 plan.purchases, plan.action, scenario.true_outcome);
    rows.push_back({label, scenario.problem.actions[plan.action],
                    plan_to_string(plan, scenario.problem,
                                   ladder.stack_for(scenario.true_outcome)),
                    num_cell(plan.total_price), num_cell(realized)});
  };
  if (mode == "successive" || mode == "both") {
    add_plan("successive",
             solve_successive(scenario.problem, scenario.space, ladder, depth,
                              scenario.true_outcome));
  }
  if (mode == "recursive" || mode == "both") {
    add_plan("recursive", solve_recursive(scenario.problem, scenario.space, ladder, depth,
                                          scenario.true_outcome));
  }
  record.body["plans"] = make_table("inspection plans (depth " + std::to_string(depth) + ")",
                                    {"protocol", "action", "plan", "price", "realized_value"},
                                    rows);
  return finish(opts, record, start);
}

// ---------------------------------------------------------------- oversight

int cmd_oversight(const GlobalOpts& opts) {
  auto start = std::chrono::steady_clock::now();
  RunRecord record;
  record.command = "oversight solve";
  Scenario scenario = load_with_digest(opts, record);
  OversightInstance instance = scenario.build_oversight();
  SpeSolution solution = solve_spe(instance);

  std::string path;
  for (int m : solution.path.moves) {
    if (!path.empty()) path += " > ";
    path += instance.moves()[m].name;
  }
  if (path.empty()) path = "(nothing revealed)";
  record.body["equilibrium_path"] = path;

  std::vector<std::vector<std::string>> ledger_rows;
  for (std::size_t i = 0; i < solution.path.moves.size(); ++i) {
    ledger_rows.push_back(
        {std::to_string(i + 1), instance.moves()[solution.path.moves[i]].name,
         scenario.problem.actions[solution.ledger.interim_actions[i + 1]],
         num_cell(solution.ledger.marginal_values[i]), num_cell(solution.ledger.rewards[i])});
  }
  record.body["ledger"] =
      make_table("reward ledger (prior action " +
                     scenario.problem.actions[solution.ledger.interim_actions[0]] + ")",
                 {"stage", "move", "interim_action", "marginal_value", "reward"}, ledger_rows);

  CharacterizationReport chk = verify_equilibrium_characterization(instance);
  record.body["first_move_inextensible"] = chk.first_inextensible ? "yes" : "no";
  record.body["later_moves_null"] = chk.later_all_null ? "yes" : "no";
  record.body["max_expost_among_inextensible"] =
      chk.max_expost_among_inextensible ? "yes" : "no";
  return finish(opts, record, start);
}

// ------------------------------------------------------------------- market

int cmd_market(const GlobalOpts& opts, const std::string& mode, int depth_flag) {
  auto start = std::chrono::steady_clock::now();
  RunRecord record;
  record.command = "market";
  Scenario scenario = load_with_digest(opts, record);
  BuyerContext context = scenario.build_context();
  if (depth_flag > 0) context.depth = depth_flag;
  auto sellers = scenario.build_sellers();

  MarketRun run = mode == "one-level"
                      ? run_one_level(scenario.space, context, sellers, scenario.true_outcome)
                      : run_rip(scenario.space, context, sellers, scenario.true_outcome);

  std::vector<std::vector<std::string>> offer_rows;
  for (const auto& node : run.nodes) {
    for (std::size_t i = 0; i < node.offers.offers.size(); ++i) {
      const InfoGood& good = node.offers.offers[i];
      bool bought = node.purchased & (1u << i);
      offer_rows.push_back({std::to_string(node.level), node.seller_of_offer[i],
                            good.variable.name(), good.realized_value, num_cell(good.price),
                            bought ? "yes" : "no"});
    }
  }
  record.body["offers"] = make_table(
      "market trace", {"level", "seller", "good", "value", "price", "bought"}, offer_rows);

  std::vector<std::vector<std::string>> payment_rows;
  for (const auto& [seller, amount] : run.payments) {
    payment_rows.push_back({seller, num_cell(amount)});
  }
  record.body["payments"] = make_table("payments", {"seller", "amount"}, payment_rows);
  record.body["final_action"] = scenario.problem.actions[run.final_action];
  record.body["total_paid"] = num_cell(run.total_paid);
  return finish(opts, record, start);
}

// ------------------------------------------------------------------- verify

int cmd_verify(const GlobalOpts& opts, const std::string& suite, int trials,
               std::uint64_t seed, std::uint64_t budget) {
  auto start = std::chrono::steady_clock::now();
  RunRecord record;
  record.command = "verify " + suite;
  record.seed = seed;
  bool pass = true;

  auto run_lemma = [&](const char* key, PropertyReport (*fn)(std::uint64_t, int, int)) {
    PropertyReport report = fn(seed, trials, opts.workers);
    record.body[key] = ordered_json{{"trials", report.trials},
                                    {"violations", report.violations},
                                    {"min_slack", report.min_slack}};
    pass = pass && report.violations == 0;
  };

  try {
    if (suite == "lemma1" || suite == "all") {
      run_lemma("gain_from_information", &verify_gain_from_information);
    }
    if (suite == "lemma2" || suite == "all") {
      run_lemma("gain_from_inspection", &verify_gain_from_inspection);
    }
    if (suite == "thm1" || suite == "all") {
      SuperioritySuiteReport report =
          verify_superiority_suite(seed, trials, budget, opts.workers);
      std::vector<std::vector<std::string>> rows;
      for (const auto& row : report.rows) {
        rows.push_back({std::to_string(row.seed), std::to_string(row.protocols),
                        num_cell(row.recursive_value), num_cell(row.best_admissible_value),
                        num_cell(row.margin), num_cell(row.chain_slack)});
      }
      record.body["exante_superiority"] = make_table(
          "ex-ante superiority over admissible protocols",
          {"seed", "protocols", "recursive", "best_admissible", "margin", "chain_slack"}, rows);
      record.body["exante_summary"] =
          ordered_json{{"instances", report.instances},
                       {"total_protocols", report.total_protocols},
                       {"min_margin", report.min_margin},
                       {"min_chain_slack", report.min_chain_slack},
                       {"violations", report.violations}};
      pass = pass && report.violations == 0;
    }
    if (suite == "thm2" || suite == "all") {
      CharacterizationSuiteReport report =
          verify_characterization_suite(seed, trials, opts.workers);
      std::vector<std::vector<std::string>> rows;
      for (const auto& row : report.rows) {
        rows.push_back({std::to_string(row.seed), row.first_move,
                        row.first_inextensible ? "pass" : "FAIL",
                        row.later_all_null ? "pass" : "FAIL",
                        row.max_expost ? "pass" : "FAIL"});
      }
      record.body["equilibrium_characterization"] = make_table(
          "equilibrium characterization",
          {"seed", "first_move", "inextensible", "later_null", "max_expost"}, rows);
      record.body["characterization_summary"] = ordered_json{
          {"instances", report.instances}, {"violations", report.violations}};
      int counter = 0;
      for (const auto& scenario_json : report.counterexamples) {
        std::string path = resolve_run_dir(opts) + "/counterexample-" +
                           std::to_string(seed) + "-" + std::to_string(counter++) + ".json";
        std::ofstream out(path, std::ios::binary);
        out << scenario_json;
        std::cerr << "counterexample written to " << path << "\n";
      }
      pass = pass && report.violations == 0;
    }
    if (suite == "equivalence" || suite == "all") {
      EquivalenceReport report = verify_harness_equivalence(seed, trials, opts.workers);
      record.body["harness_equivalence"] = ordered_json{
          {"instances", report.instances}, {"mismatches", report.mismatches}};
      pass = pass && report.mismatches == 0;
    }
    if (suite == "monotonicity" || suite == "all") {
      MonotonicityReport report = verify_depth_monotonicity(seed, trials, opts.workers);
      record.body["depth_monotonicity"] =
          ordered_json{{"instances", report.instances},
                       {"violations", report.violations},
                       {"min_gap", report.min_gap}};
      pass = pass && report.violations == 0;
    }
  } catch (const ViolationFound& violation) {
    std::string path = resolve_run_dir(opts) + "/violation-" + std::to_string(seed) + ".json";
    std::ofstream out(path, std::ios::binary);
    out << violation.scenario_json;
    record.body["violation"] = violation.what();
    record.body["violation_scenario"] = path;
    pass = false;
  }

  record.verdict = pass ? "pass" : "fail";
  return finish(opts, record, start);
}

// ---------------------------------------------------------------------- gen

int cmd_gen(const GlobalOpts& opts, const std::string& kind, std::uint64_t seed,
            const std::string& out_path) {
  auto start = std::chrono::steady_clock::now();
  RunRecord record;
  record.command = "gen " + kind;
  record.seed = seed;
  ScenarioGenerator gen(seed);
  Scenario scenario = [&] {
    if (kind == "voi") return gen.gen_voi_scenario();
    if (kind == "inspect") return gen.gen_inspect_scenario(2, 2, true, 3);
    if (kind == "oversight") return gen.gen_oversight_scenario();
    if (kind == "market") return gen.gen_market_scenario(3);
    throw ParseError("unknown generator kind '" + kind + "'");
  }();
  scenario.params.seed = seed;
  std::string text = serialize_scenario(scenario);
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw ParseError("cannot write '" + out_path + "'");
    out << text;
  }
  record.scenario_name = scenario.name;
  record.scenario_digest = digest_bytes(text);
  record.body["written"] = out_path.empty() ? "-" : out_path;
  return finish(opts, record, start);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"infoval: exact valuation of information goods, inspection protocols, and "
               "oversight equilibria over finite probability spaces"};
  app.require_subcommand(1);
  GlobalOpts opts;
  app.add_option("--format", opts.format, "Report format: table or json")
      ->check(CLI::IsMember({"table", "json"}));
  app.add_option("--run-dir", opts.run_dir,
                 "Run-log directory (default: $INFOVAL_RUN_DIR or ./runs)");
  app.add_option("--workers", opts.workers, "Worker threads for batch suites")
      ->check(CLI::PositiveNumber);

  auto* voi = app.add_subcommand("voi", "Realized, ex-post and ex-ante value of each good");
  voi->add_option("--scenario", opts.scenario_path, "Scenario file")->required();

  auto* inspect = app.add_subcommand("inspect", "Solve the successive/recursive protocols");
  inspect->add_option("--scenario", opts.scenario_path, "Scenario file")->required();
  std::string inspect_mode = "both";
  int inspect_depth = 0;
  inspect->add_option("--mode", inspect_mode, "successive | recursive | both")
      ->check(CLI::IsMember({"successive", "recursive", "both"}));
  inspect->add_option("--depth", inspect_depth, "Override the scenario depth");

  auto* oversight = app.add_subcommand("oversight", "Subgame-perfect equilibrium analysis");
  oversight->fallthrough();
  oversight->add_option("--scenario", opts.scenario_path, "Scenario file")->required();
  oversight->add_subcommand("solve", "Solve for the equilibrium (default)")->fallthrough();

  auto* market = app.add_subcommand("market", "Run the simulated information market");
  market->add_option("--scenario", opts.scenario_path, "Scenario file")->required();
  std::string market_mode = "rip";
  int market_depth = 0;
  market->add_option("--mode", market_mode, "one-level | rip")
      ->check(CLI::IsMember({"one-level", "rip"}));
  market->add_option("--depth", market_depth, "Override the scenario depth");

  auto* verify = app.add_subcommand("verify", "Randomized verification suites");
  std::string suite;
  int trials = 100;
  std::uint64_t seed = 0;
  std::uint64_t budget = 1'000'000;
  verify->add_option("suite", suite,
                     "lemma1 | lemma2 | thm1 | thm2 | equivalence | monotonicity | all")
      ->required()
      ->check(CLI::IsMember(
          {"lemma1", "lemma2", "thm1", "thm2", "equivalence", "monotonicity", "all"}));
  verify->add_option("--trials", trials, "Trials / instances")->check(CLI::PositiveNumber);
  auto* seed_opt = verify->add_option("--seed", seed, "Suite seed (required)");
  seed_opt->required();
  verify->add_option("--budget", budget, "Protocol enumeration budget");

  auto* gen = app.add_subcommand("gen", "Emit a random scenario file");
  std::string gen_kind = "voi";
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  gen->add_option("--kind", gen_kind, "voi | inspect | oversight | market")
      ->check(CLI::IsMember({"voi", "inspect", "oversight", "market"}));
  auto* gen_seed_opt = gen->add_option("--seed", gen_seed, "Generator seed (required)");
  gen_seed_opt->required();
  gen->add_option("--out", gen_out, "Output path ('-' for stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;  // usage errors
  }

  try {
    if (voi->parsed()) return cmd_voi(opts);
    if (inspect->parsed()) return cmd_inspect(opts, inspect_mode, inspect_depth);
    if (oversight->parsed()) return cmd_oversight(opts);
    if (market->parsed()) return cmd_market(opts, market_mode, market_depth);
    if (verify->parsed()) return cmd_verify(opts, suite, trials, seed, budget);
    if (gen->parsed()) return cmd_gen(opts, gen_kind, gen_seed, gen_out);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const FixtureViolation& e) {
    std::cerr << "fixture violation: " << e.what() << "\n";
    return 2;
  } catch (const ViolationFound& e) {
    std::cerr << "violation: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
