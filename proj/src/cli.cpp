#include "cimac/cli.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cimac/errors.hpp"
#include "cimac/evaluation.hpp"
#include "cimac/policies.hpp"
#include "cimac/policy_io.hpp"
#include "cimac/scenario.hpp"
#include "cimac/solver.hpp"
#include "cimac/version.hpp"

namespace cimac {

namespace {

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t seconds = std::chrono::system_clock::to_time_t(now);
  std::tm parts{};
  gmtime_r(&seconds, &parts);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &parts);
  return buf;
}

std::string fixed6(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", value);
  return buf;
}

// Records one command invocation. Written next to the first output file, or
// to the error stream when the command produced no file.
class RunManifest {
 public:
  RunManifest(std::string command, std::vector<std::string> arguments)
      : command_(std::move(command)), arguments_(std::move(arguments)),
        started_(utc_timestamp()) {}

  void set_fingerprint(std::string fingerprint) { fingerprint_ = std::move(fingerprint); }
  void add_belief_fingerprint(const std::string& id, std::string fingerprint) {
    belief_fingerprints_[id] = std::move(fingerprint);
  }
  void add_output(const std::string& path) { outputs_.push_back(path); }

  void emit(std::ostream& err) const {
    nlohmann::json doc;
    doc["tool"] = kToolName;
    doc["version"] = kToolVersion;
    doc["command"] = command_;
    doc["arguments"] = arguments_;
    doc["scenario_fingerprint"] = fingerprint_;
    if (!belief_fingerprints_.empty()) doc["belief_fingerprints"] = belief_fingerprints_;
    doc["started_at"] = started_;
    doc["finished_at"] = utc_timestamp();
    doc["outputs"] = outputs_;
    if (outputs_.empty()) {
      err << doc.dump() << '\n';
      return;
    }
    const std::string path = outputs_.front() + ".manifest.json";
    std::ofstream file(path);
    if (!file) throw InvalidInput("cannot write manifest " + path);
    file << doc.dump(2) << '\n';
  }

 private:
  std::string command_;
  std::vector<std::string> arguments_;
  std::string started_;
  std::string fingerprint_;
  nlohmann::json belief_fingerprints_ = nlohmann::json::object();
  std::vector<std::string> outputs_;
};

struct CommonArgs {
  std::string scenario_path;
  std::string belief_id;
  std::string space;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--scenario", args.scenario_path, "Scenario JSON file")->required();
  cmd->add_option("--belief", args.belief_id, "Id of the initial belief to use (default: first)");
  cmd->add_option("--space", args.space, "Prescription space override: constrained|full")
      ->check(CLI::IsMember({"constrained", "full"}));
}

Scenario load_with_overrides(const CommonArgs& args) {
  Scenario scenario = load_scenario(args.scenario_path);
  if (!args.space.empty()) scenario.prescription_space = parse_variant(args.space);
  return scenario;
}

std::size_t select_belief(const Scenario& scenario, const CommonArgs& args) {
  return args.belief_id.empty() ? 0 : scenario.belief_index(args.belief_id);
}

std::ofstream open_output(const std::string& path) {
  std::ofstream file(path);
  if (!file) throw InvalidInput("cannot write " + path);
  return file;
}

// Policy selected by --policy or --baseline, or nullptr when neither is set.
std::unique_ptr<ExecutablePolicy> policy_from_args(const Scenario& scenario, std::size_t belief,
                                                   const std::string& policy_path,
                                                   const std::string& baseline) {
  if (!policy_path.empty()) {
    auto solved = std::make_shared<const SolvedPolicy>(load_policy(policy_path));
    const std::string expected = scenario_fingerprint(scenario.with_belief(belief));
    if (solved->fingerprint() != expected) {
      throw FingerprintMismatch("policy " + policy_path + " was solved for scenario " +
                                solved->fingerprint() + " but the selected scenario is " +
                                expected);
    }
    return std::make_unique<OptimalPolicy>(std::move(solved));
  }
  if (!baseline.empty()) {
    return std::make_unique<ThresholdPolicy>(parse_threshold_triple(baseline), scenario.alpha,
                                             scenario.beta);
  }
  return nullptr;
}

int cmd_solve(const CommonArgs& args, const std::string& out_path, RunManifest& manifest,
              std::ostream& out) {
  const Scenario scenario = load_with_overrides(args);
  const std::size_t b = select_belief(scenario, args);
  const SolvedPolicy policy = solve(scenario, b);
  manifest.set_fingerprint(policy.fingerprint());
  if (!out_path.empty()) {
    save_policy(policy, out_path);
    manifest.add_output(out_path);
  }
  out << fixed6(policy.initial_value()) << '\n';
  return kExitOk;
}

struct EvaluateArgs {
  std::string policy_path;
  std::string baseline;
  std::string method = "exact";
  std::size_t episodes = 100'000;
  std::uint64_t seed = 0;
  std::string out_path;
};

int cmd_evaluate(const CommonArgs& args, const EvaluateArgs& eval, RunManifest& manifest,
                 std::ostream& out) {
  const Scenario scenario = load_with_overrides(args);
  const std::size_t b = select_belief(scenario, args);
  manifest.set_fingerprint(scenario_fingerprint(scenario.with_belief(b)));
  const auto policy = policy_from_args(scenario, b, eval.policy_path, eval.baseline);
  if (!policy) throw InvalidInput("evaluate needs --policy or --baseline");

  CostReport report;
  if (eval.method == "mc") {
    report = monte_carlo_cost(*policy, scenario, eval.episodes, eval.seed, b);
  } else {
    report.policy = policy->label();
    report.belief_id = scenario.initial_beliefs[b].id;
    report.expected_cost = exact_cost(*policy, scenario, b);
  }
  const std::string text = csv_header(false) + "\n" + csv_row(report, false) + "\n";
  if (eval.out_path.empty()) {
    out << text;
  } else {
    open_output(eval.out_path) << text;
    manifest.add_output(eval.out_path);
  }
  return kExitOk;
}

struct CompareArgs {
  std::string out_path;
  bool plot_data = false;
  bool baselines_only = false;
};

int cmd_compare(const CommonArgs& args, const CompareArgs& cmp, RunManifest& manifest,
                std::ostream& out) {
  Scenario scenario = load_with_overrides(args);
  if (!args.belief_id.empty()) scenario = scenario.with_belief(select_belief(scenario, args));
  manifest.set_fingerprint(scenario_fingerprint(scenario));
  for (std::size_t b = 0; b < scenario.initial_beliefs.size(); ++b) {
    manifest.add_belief_fingerprint(scenario.initial_beliefs[b].id,
                                    scenario_fingerprint(scenario.with_belief(b)));
  }

  const auto reports = compare(scenario, !cmp.baselines_only);
  std::string csv = csv_header(true) + "\n";
  std::string tsv = "belief_id\tpolicy\texpected_cost\n";
  bool any_ok = false;
  for (const auto& report : reports) {
    csv += csv_row(report, true) + "\n";
    if (!report.ok()) continue;
    any_ok = true;
    tsv += report.belief_id + "\t" + report.policy + "\t" + fixed6(report.expected_cost) + "\n";
  }

  if (cmp.out_path.empty()) {
    out << csv;
    if (cmp.plot_data) out << '\n' << tsv;
  } else {
    open_output(cmp.out_path) << csv;
    manifest.add_output(cmp.out_path);
    if (cmp.plot_data) {
      const std::string plot_path = cmp.out_path + ".plot.tsv";
      open_output(plot_path) << tsv;
      manifest.add_output(plot_path);
    }
  }
  return any_ok ? kExitOk : kExitFailure;
}

struct TraceArgs {
  std::string policy_path;
  std::string baseline;
  std::string profile;
  std::uint64_t seed = 0;
};

int cmd_trace(const CommonArgs& args, const TraceArgs& tr, RunManifest& manifest,
              std::ostream& out) {
  const Scenario scenario = load_with_overrides(args);
  const std::size_t b = select_belief(scenario, args);
  manifest.set_fingerprint(scenario_fingerprint(scenario.with_belief(b)));
  const Belief& initial = scenario.initial_beliefs[b].belief;

  ModeProfile profile;
  try {
    profile = ModeProfile::parse(tr.profile);
  } catch (const InvalidInput& e) {
    throw ParseError(e.what());
  }
  if (profile.agents() != scenario.agents) {
    throw ParseError("profile " + tr.profile + " does not have " +
                     std::to_string(scenario.agents) + " modes");
  }
  if (initial.at(profile) == 0.0) {
    throw Unsupported("profile " + profile.to_string() +
                      " is outside the support of the initial belief");
  }

  auto policy = policy_from_args(scenario, b, tr.policy_path, tr.baseline);
  if (!policy) {
    policy = std::make_unique<OptimalPolicy>(
        std::make_shared<const SolvedPolicy>(solve(scenario, b)));
  }
  const auto randomness = draw_episode(initial, scenario.horizon, episode_seed(tr.seed, 0));
  const EpisodeTrace trace =
      simulate_episode(*policy, initial, scenario.horizon, profile, randomness.slot_randoms);

  out << "policy " << policy->label() << "  profile " << profile.to_string() << "  seed "
      << tr.seed << "\n";
  const Belief* in_force = &trace.initial_belief;
  int total = 0;
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    const auto& step = trace.steps[i];
    total += step.cost;
    out << "t=" << (i + 1) << "  actions " << step.action.to_string() << "  cost " << step.cost
        << "  cumulative " << total << "\n"
        << in_force->render();
    if (scenario.agents != 2) out << '\n';
    in_force = &step.belief;
  }
  out << "final belief\n" << in_force->render();
  if (scenario.agents != 2) out << '\n';
  out << "total cost " << total << "\n";
  return kExitOk;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ParseError*>(&e)) return kExitParse;
  if (dynamic_cast<const StateExplosion*>(&e)) return kExitExplosion;
  if (dynamic_cast<const ExplosionError*>(&e)) return kExitExplosion;
  if (dynamic_cast<const FingerprintMismatch*>(&e)) return kExitMismatch;
  if (dynamic_cast<const Unsupported*>(&e)) return kExitUnsupported;
  if (dynamic_cast<const ImpossibleObservation*>(&e)) return kExitUnsupported;
  if (dynamic_cast<const UnreachableBelief*>(&e)) return kExitUnsupported;
  if (dynamic_cast<const InvalidInput*>(&e)) return kExitParse;
  return kExitFailure;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Optimal symmetric transmission strategies for slotted multiple access"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  CommonArgs common;
  std::string solve_out;
  auto* solve_cmd = app.add_subcommand("solve", "Solve the coordinator dynamic program");
  add_common(solve_cmd, common);
  solve_cmd->add_option("--out", solve_out, "Policy file to write");

  EvaluateArgs eval;
  auto* eval_cmd = app.add_subcommand("evaluate", "Expected cumulative cost of one policy");
  add_common(eval_cmd, common);
  auto* eval_policy = eval_cmd->add_option("--policy", eval.policy_path, "Solved policy file");
  auto* eval_baseline =
      eval_cmd->add_option("--baseline", eval.baseline, "Threshold baseline x,y,z");
  eval_policy->excludes(eval_baseline);
  eval_cmd->add_option("--method", eval.method, "exact|mc")
      ->check(CLI::IsMember({"exact", "mc"}));
  eval_cmd->add_option("--episodes", eval.episodes, "Monte-Carlo episodes")
      ->check(CLI::PositiveNumber);
  eval_cmd->add_option("--seed", eval.seed, "Monte-Carlo master seed");
  eval_cmd->add_option("--out", eval.out_path, "CSV file to write");

  CompareArgs cmp;
  auto* cmp_cmd = app.add_subcommand("compare", "Exact cost table for all policies and beliefs");
  add_common(cmp_cmd, common);
  cmp_cmd->add_option("--out", cmp.out_path, "CSV file to write");
  cmp_cmd->add_flag("--plot-data", cmp.plot_data, "Also emit tab-separated bar-plot data");
  cmp_cmd->add_flag("--baselines-only", cmp.baselines_only, "Skip the solved policy");

  TraceArgs tr;
  auto* trace_cmd = app.add_subcommand("trace", "Simulate one episode for a given mode profile");
  add_common(trace_cmd, common);
  auto* trace_policy = trace_cmd->add_option("--policy", tr.policy_path, "Solved policy file");
  auto* trace_baseline =
      trace_cmd->add_option("--baseline", tr.baseline, "Threshold baseline x,y,z");
  trace_policy->excludes(trace_baseline);
  trace_cmd->add_option("--profile", tr.profile, "True modes, e.g. De,Ag")->required();
  trace_cmd->add_option("--seed", tr.seed, "Seed for the transmit draws");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitParse;
  }

  std::vector<std::string> arguments(argv + 1, argv + argc);
  try {
    if (*solve_cmd) {
      RunManifest manifest("solve", arguments);
      const int code = cmd_solve(common, solve_out, manifest, out);
      manifest.emit(err);
      return code;
    }
    if (*eval_cmd) {
      if (eval.policy_path.empty() && eval.baseline.empty()) {
        err << "evaluate: one of --policy or --baseline is required\n";
        return kExitParse;
      }
      RunManifest manifest("evaluate", arguments);
      const int code = cmd_evaluate(common, eval, manifest, out);
      manifest.emit(err);
      return code;
    }
    if (*cmp_cmd) {
      RunManifest manifest("compare", arguments);
      const int code = cmd_compare(common, cmp, manifest, out);
      manifest.emit(err);
      return code;
    }
    RunManifest manifest("trace", arguments);
    const int code = cmd_trace(common, tr, manifest, out);
    manifest.emit(err);
    return code;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
}

}  // namespace cimac
