#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cn2f/engine.hpp"
#include "cn2f/manifest.hpp"
#include "cn2f/profile.hpp"

namespace cn2f::runner {

struct ResultRow {
  std::string subject;  // "<src>-><dst>" as probed
  std::string metric;   // "bitrate_mbps" | "rtt_ms"
  double value = 0;
  std::optional<double> expected;
  std::optional<double> tolerance;

  bool pass() const;  // true when no expectation or within tolerance
};

struct ControlCommand {
  sim::TimeMs at_ms = 0;
  std::string line;
};

struct ScenarioResult {
  std::string scenario_name;
  uint64_t seed = 0;
  std::vector<ResultRow> rows;  // one per probe, in probe order
  std::string event_log;        // orchestrator TSV, byte-stable per seed
  std::vector<std::string> control_responses;  // one per command, in order
  // flow_id<TAB>src<TAB>dst<TAB>crosses<TAB>rate_mbps, last allocation.
  std::string flow_table;

  bool all_pass() const;
};

// Parses a control script: one JSON object per line, each with an
// integer "at_ms". Raises Errc::syntax / Errc::schema.
std::vector<ControlCommand> parse_control_script(const std::string& text);

// Plays one scenario end to end: applies the deployments at time zero,
// attaches every UE once its serving chain is up, replays the control
// script, fires the probes ten seconds after the cluster settles, and runs
// the clock out to the scenario duration. Raises Errc::deployment_stuck
// naming the blocked deployment and what it waits on, Errc::probe_failed
// for a probe that cannot finish in time, Errc::invalid_size for an empty
// download, Errc::schema for broken references. Callers are expected to
// have run validate() first.
ScenarioResult run_scenario(const ScenarioDoc& scenario,
                            const TopologyDoc& topology,
                            const profile::CalibrationProfile& profile,
                            uint64_t seed,
                            const std::map<std::string, DeploymentDoc>& registry,
                            const std::vector<ControlCommand>& control = {});

enum class TableFormat { tsv, pretty };

// tsv: header scenario/subject/metric/value/expected/pass, numbers fixed
// to two decimals, "-" for absent expectations. pretty: same data, aligned.
std::string emit_table(const ScenarioResult& result, TableFormat format);

}  // namespace cn2f::runner
