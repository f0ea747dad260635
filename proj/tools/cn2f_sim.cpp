#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cn2f/builtin.hpp"
#include "cn2f/catalog.hpp"
#include "cn2f/errors.hpp"
#include "cn2f/manifest.hpp"
#include "cn2f/profile.hpp"
#include "cn2f/runner.hpp"

namespace {

using namespace cn2f;

// Exit codes: 0 all probes pass, 1 validation or usage error, 2 a probe
// missed its expectation, 3 a deployment never became Ready.
constexpr int kOk = 0;
constexpr int kValidationError = 1;
constexpr int kProbeMiss = 2;
constexpr int kStuck = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(Errc::io, "cannot open " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(Errc::io, "cannot write " + path);
  out << text;
}

bool is_builtin_scenario(const std::string& name) {
  for (const auto& candidate : builtin_scenario_names())
    if (candidate == name) return true;
  return false;
}

bool is_builtin_profile(const std::string& name) {
  for (const auto& candidate : profile::builtin_profile_names())
    if (candidate == name) return true;
  return false;
}

uint64_t pick_seed(const std::optional<uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("CN2F_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      raise(Errc::schema, std::string("CN2F_SEED is not an integer: ") + env);
    }
  }
  return 0;
}

struct RunOptions {
  std::string scenario;
  std::string topology_path;
  std::string profile_arg;
  std::optional<uint64_t> seed;
  std::string format = "pretty";
  std::string control_path;
  std::vector<std::string> deployment_paths;
  std::string event_log_path;
  std::string flows_path;
};

int do_run(const RunOptions& opt) {
  ScenarioDoc scenario = is_builtin_scenario(opt.scenario)
                             ? builtin_scenario(opt.scenario)
                             : parse_scenario(read_file(opt.scenario));

  TopologyDoc topology = opt.topology_path.empty()
                             ? builtin_topology()
                             : parse_topology(read_file(opt.topology_path));

  auto registry = builtin_deployments();
  for (const auto& path : opt.deployment_paths) {
    DeploymentDoc doc = parse_deployment(read_file(path));
    registry[doc.name] = std::move(doc);
  }

  std::string profile_name =
      opt.profile_arg.empty() ? scenario.calibration_profile : opt.profile_arg;
  profile::CalibrationProfile profile;
  auto known_profiles = profile::builtin_profile_names();
  if (is_builtin_profile(profile_name)) {
    profile = profile::builtin_profile(profile_name);
  } else {
    profile = profile::parse_profile(read_file(profile_name));
    known_profiles.push_back(scenario.calibration_profile);
  }

  auto report = validate(topology, registry, scenario, known_profiles);
  if (!report.ok()) {
    std::cerr << report.to_text();
    return kValidationError;
  }

  std::vector<runner::ControlCommand> control;
  if (!opt.control_path.empty())
    control = runner::parse_control_script(read_file(opt.control_path));

  runner::ScenarioResult result;
  try {
    result = runner::run_scenario(scenario, topology, profile, pick_seed(opt.seed),
                                  registry, control);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (e.code() == Errc::deployment_stuck) return kStuck;
    if (e.code() == Errc::probe_failed) return kProbeMiss;
    return kValidationError;
  }

  std::cout << emit_table(result, opt.format == "tsv" ? runner::TableFormat::tsv
                                                      : runner::TableFormat::pretty);
  for (const auto& response : result.control_responses)
    std::cout << response << "\n";

  if (!opt.event_log_path.empty()) write_file(opt.event_log_path, result.event_log);
  if (!opt.flows_path.empty()) write_file(opt.flows_path, result.flow_table);

  return result.all_pass() ? kOk : kProbeMiss;
}

int do_validate(const std::vector<std::string>& paths) {
  std::optional<TopologyDoc> topology;
  auto registry = builtin_deployments();
  std::vector<ScenarioDoc> scenarios;
  for (const auto& path : paths) {
    std::string text = read_file(path);
    switch (sniff_doc_kind(text)) {
      case DocKind::topology:
        topology = parse_topology(text);
        break;
      case DocKind::deployment: {
        DeploymentDoc doc = parse_deployment(text);
        registry[doc.name] = std::move(doc);
        break;
      }
      case DocKind::scenario:
        scenarios.push_back(parse_scenario(text));
        break;
    }
  }
  if (!topology) topology = builtin_topology();

  bool ok = true;
  auto profiles = profile::builtin_profile_names();
  for (const auto& scenario : scenarios) {
    auto report = validate(*topology, registry, scenario, profiles);
    std::cout << report.to_text();
    ok = ok && report.ok();
  }
  if (scenarios.empty()) std::cout << "parsed " << paths.size() << " document(s)\n";
  return ok ? kOk : kValidationError;
}

int do_calibrate(const std::string& table1_path, const std::string& table2_path,
                 const std::string& out_path, const std::string& name) {
  auto table1 = profile::parse_table1_tsv(read_file(table1_path));
  auto table2 = profile::parse_table2_tsv(read_file(table2_path));
  std::string text =
      profile::serialize_profile(profile::fit_calibration(table1, table2, name));
  if (out_path.empty()) {
    std::cout << text;
  } else {
    write_file(out_path, text);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deterministic desk-scale simulator of a cloud-native 4G stack"};
  app.require_subcommand(1);

  RunOptions run_opt;
  CLI::App* run = app.add_subcommand(
      "run", "Play a scenario and print its result table");
  run->add_option("--scenario", run_opt.scenario,
                  "Built-in scenario name or path to a scenario JSON file")
      ->required();
  run->add_option("--topology", run_opt.topology_path,
                  "Topology JSON file (defaults to the built-in cluster)");
  run->add_option("--profile", run_opt.profile_arg,
                  "Calibration profile name or JSON file (defaults to the "
                  "scenario's choice)");
  run->add_option("--seed", run_opt.seed,
                  "Simulation seed (falls back to CN2F_SEED, then 0)");
  run->add_option("--format", run_opt.format, "Result table format")
      ->check(CLI::IsMember({"tsv", "pretty"}));
  run->add_option("--control", run_opt.control_path,
                  "Control script: one JSON command per line with at_ms");
  run->add_option("--deployment", run_opt.deployment_paths,
                  "Extra deployment JSON files added to the registry");
  run->add_option("--event-log", run_opt.event_log_path,
                  "Write the pod event log TSV to this file");
  run->add_option("--flows", run_opt.flows_path,
                  "Write the final flow table TSV to this file");

  std::vector<std::string> validate_paths;
  CLI::App* check = app.add_subcommand(
      "validate", "Parse and cross-check topology/deployment/scenario files");
  check->add_option("docs", validate_paths, "JSON documents")->required();

  std::string table1_path, table2_path, out_path, profile_name = "custom";
  CLI::App* calibrate = app.add_subcommand(
      "calibrate", "Fit a calibration profile from measurement tables");
  calibrate->add_option("--table1", table1_path, "Placement measurements TSV")
      ->required();
  calibrate->add_option("--table2", table2_path, "Slicing measurements TSV")
      ->required();
  calibrate->add_option("-o,--out", out_path, "Output file (default stdout)");
  calibrate->add_option("--name", profile_name, "Profile name");

  CLI::App* catalog = app.add_subcommand(
      "catalog", "Print the VNF catalog as TSV");

  CLI::App* scenarios = app.add_subcommand(
      "scenarios", "List the built-in scenarios");

  std::string export_name;
  CLI::App* export_scenario = app.add_subcommand(
      "export-scenario", "Print a built-in scenario as JSON");
  export_scenario->add_option("name", export_name, "Built-in scenario name")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return do_run(run_opt);
    if (*check) return do_validate(validate_paths);
    if (*calibrate)
      return do_calibrate(table1_path, table2_path, out_path, profile_name);
    if (*catalog) {
      std::cout << catalog_tsv();
      return kOk;
    }
    if (*scenarios) {
      for (const auto& name : builtin_scenario_names()) std::cout << name << "\n";
      return kOk;
    }
    if (*export_scenario) {
      std::cout << serialize_scenario(builtin_scenario(export_name));
      return kOk;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << errc_name(e.code()) << ": " << e.what() << "\n";
    return kValidationError;
  }
  return kValidationError;
}
