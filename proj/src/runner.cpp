#include "cn2f/runner.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "cn2f/catalog.hpp"
#include "cn2f/netmodel.hpp"
#include "cn2f/orchestrator.hpp"
#include "cn2f/slicing.hpp"
#include "json.hpp"

namespace cn2f::runner {

using nlohmann::json;

namespace {

constexpr sim::TimeMs kProbeDelayMs = 10'000;

std::string format2(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", value);
  return buf;
}

TopologyDoc effective_topology(const TopologyDoc& base, const ScenarioDoc& scenario) {
  TopologyDoc topo = base;
  for (const auto& [name, override_] : scenario.bridge_overrides) {
    BridgeDoc* bridge = nullptr;
    for (auto& b : topo.bridges) {
      if (b.name == name) bridge = &b;
    }
    if (!bridge)
      raise(Errc::schema, "bridge override targets unknown bridge \"" + name + "\"");
    if (override_.bandwidth) bridge->bandwidth = *override_.bandwidth;
    if (override_.delay) bridge->delay = *override_.delay;
    if (override_.loss) bridge->loss = *override_.loss;
  }
  return topo;
}

struct Flow {
  size_t row_index = 0;
  std::string id;  // allocation key: "p<row_index>"
  std::string src;
  std::string dst;  // deployment name or dotted quad
  double payload_bits = 0;
  double remaining_bits = 0;
  sim::TimeMs started_at = 0;
  sim::TimeMs last_update = 0;
  double rate = 0;  // Mb/s; 1 Mb/s moves 1000 bits per ms
  bool rate_set = false;
  int segments = 0;  // rate changes after the start instant add segments
  std::vector<std::string> crosses;
  sim::EventId completion = 0;
  bool done = false;
};

// One scenario execution: owns the engine, the pod controller, the slice
// state, and the in-flight probe flows.
class Run {
 public:
  Run(const ScenarioDoc& scenario, const TopologyDoc& topology,
      const profile::CalibrationProfile& profile, uint64_t seed,
      const std::map<std::string, DeploymentDoc>& registry,
      const std::vector<ControlCommand>& control)
      : scenario_(scenario),
        profile_(profile),
        control_(control),
        docs_(resolve_deployments(scenario, registry)),
        topology_(effective_topology(topology, scenario)),
        engine_(seed),
        orch_(engine_, topology_),
        slice_table_(slicing::RbPool{}, scenario.slices),
        session_(
            slice_table_, [this] { return controller_ready(); },
            [this](const std::string& ue) { return known_ues_.count(ue) > 0; }) {
    result_.scenario_name = scenario.name;
    result_.seed = seed;
    for (const auto& b : topology_.bridges) bridge_settings_[b.name] = b;
    duration_ms_ = sim::TimeMs{scenario.duration_s} * 1000;
  }

  ScenarioResult run();

 private:
  bool controller_ready() const {
    for (const auto& doc : docs_) {
      if (doc.vnf_kind != VnfKind::FlexRAN) continue;
      const orch::Pod* pod = orch_.live_pod(doc.name);
      if (pod && pod->serving()) return true;
    }
    return false;
  }

  void on_change();
  void try_attach();
  void start_probes();
  void handle_control(size_t index, const std::string& line);
  void apply_staged_slices();
  void recompute_flows();
  void set_rate(size_t flow_index, double rate);
  void complete_flow(size_t flow_index);
  std::map<std::string, net::BearerInfo> bearer_infos() const;
  [[noreturn]] void raise_stuck() const;
  std::string blocking_reason(const DeploymentDoc& doc) const;

  const ScenarioDoc& scenario_;
  const profile::CalibrationProfile& profile_;
  const std::vector<ControlCommand>& control_;
  std::vector<DeploymentDoc> docs_;
  TopologyDoc topology_;
  sim::Engine engine_;
  orch::Orchestrator orch_;
  slicing::SliceTable slice_table_;
  std::set<std::string> known_ues_;
  slicing::ControlSession session_;
  std::map<std::string, BridgeDoc> bridge_settings_;
  sim::TimeMs duration_ms_ = 0;
  std::string controller_label_ = "controller";

  ScenarioResult result_;
  std::vector<bool> filled_;
  std::vector<Flow> flows_;
  bool probes_scheduled_ = false;
  bool apply_pending_ = false;
};

ScenarioResult Run::run() {
  for (const auto& probe : scenario_.probes) {
    ResultRow row;
    row.subject = probe.subject();
    row.metric = probe.kind == ProbeKind::download ? "bitrate_mbps" : "rtt_ms";
    row.expected = probe.expected;
    if (probe.expected) row.tolerance = probe.tolerance;
    result_.rows.push_back(std::move(row));
    if (probe.kind == ProbeKind::download && probe.payload_bytes <= 0)
      raise(Errc::invalid_size,
            probe.subject() + ": download payload must be positive");
  }
  filled_.assign(result_.rows.size(), false);

  for (const auto& doc : docs_) {
    if (doc.vnf_kind == VnfKind::UE) known_ues_.insert(doc.name);
    if (doc.vnf_kind == VnfKind::FlexRAN) controller_label_ = doc.name;
  }

  result_.control_responses.resize(control_.size());
  for (size_t i = 0; i < control_.size(); ++i) {
    if (control_[i].at_ms > duration_ms_)
      raise(Errc::schema, "control command at_ms " +
                              std::to_string(control_[i].at_ms) +
                              " lies beyond the scenario duration");
    engine_.schedule(control_[i].at_ms, sim::EventKind::control_message,
                     "control[" + std::to_string(i) + "]",
                     [this, i] { handle_control(i, control_[i].line); });
  }

  orch_.set_on_change([this] { on_change(); });
  for (const auto& doc : docs_) orch_.apply(doc);

  engine_.run_until(duration_ms_);

  if (!docs_.empty() && !probes_scheduled_) raise_stuck();
  for (size_t i = 0; i < filled_.size(); ++i) {
    if (filled_[i]) continue;
    raise(Errc::probe_failed,
          scenario_.name + ": probe " + result_.rows[i].subject +
              " did not finish within " + std::to_string(scenario_.duration_s) +
              " s");
  }

  std::ostringstream table;
  table << "flow_id\tsrc\tdst\tcrosses\trate_mbps\n";
  for (const Flow& flow : flows_) {
    std::string crossed;
    for (const auto& bridge : flow.crosses) {
      if (!crossed.empty()) crossed += ",";
      crossed += bridge;
    }
    char rate[64];
    std::snprintf(rate, sizeof(rate), "%.6f", flow.rate);
    table << flow.id << '\t' << flow.src << '\t' << flow.dst << '\t' << crossed
          << '\t' << rate << '\n';
  }
  result_.flow_table = table.str();
  result_.event_log = orch_.event_log_tsv();
  return result_;
}

void Run::on_change() {
  try_attach();
  if (!probes_scheduled_ && orch_.all_desired_serving()) {
    probes_scheduled_ = true;
    engine_.schedule(engine_.now() + kProbeDelayMs,
                     sim::EventKind::probe_measurement, "probes",
                     [this] { start_probes(); });
  }
  recompute_flows();
}

void Run::try_attach() {
  for (const auto& ue : known_ues_) {
    if (orch_.bearers().count(ue)) continue;
    for (const auto& doc : docs_) {
      if (doc.vnf_kind != VnfKind::ENB && doc.vnf_kind != VnfKind::RRU) continue;
      try {
        orch_.attach_ue(ue, doc.name);
        break;
      } catch (const Error&) {
        // Not attachable yet; retried on the next state change.
      }
    }
  }
}

void Run::start_probes() {
  for (size_t i = 0; i < scenario_.probes.size(); ++i) {
    const ProbeDoc& probe = scenario_.probes[i];
    std::string dst =
        probe.external_host ? format_ipv4(*probe.external_host) : probe.dst;
    if (probe.kind == ProbeKind::rtt) {
      try {
        net::Path path =
            net::compute_path(topology_, probe.src, dst, orch_.placements(),
                              bearer_infos(), known_ues_);
        result_.rows[i].value =
            net::rtt_ms(path.crosses, profile_.rate_params, bridge_settings_);
        filled_[i] = true;
      } catch (const Error& e) {
        raise(Errc::probe_failed,
              result_.rows[i].subject + ": " + std::string(e.what()));
      }
      continue;
    }
    Flow flow;
    flow.row_index = i;
    flow.id = "p" + std::to_string(i);
    flow.src = probe.src;
    flow.dst = dst;
    flow.payload_bits = static_cast<double>(probe.payload_bytes) * 8.0;
    flow.remaining_bits = flow.payload_bits;
    flow.started_at = engine_.now();
    flow.last_update = engine_.now();
    flows_.push_back(std::move(flow));
  }
  recompute_flows();
}

std::map<std::string, net::BearerInfo> Run::bearer_infos() const {
  std::map<std::string, net::BearerInfo> out;
  for (const auto& [ue, bearer] : orch_.bearers()) {
    out[ue] = {bearer.ue_name, bearer.enb_deployment, bearer.enb_node,
               bearer.spgwu_node};
  }
  return out;
}

void Run::handle_control(size_t index, const std::string& line) {
  result_.control_responses[index] = session_.handle(line);
  if (session_.has_staged() && !apply_pending_) {
    apply_pending_ = true;
    engine_.schedule(engine_.now(), sim::EventKind::generic, "apply-slices",
                     [this] { apply_staged_slices(); });
  }
}

void Run::apply_staged_slices() {
  apply_pending_ = false;
  for (const std::string& token : session_.apply_staged())
    orch_.append_action(controller_label_, token);
  recompute_flows();
}

void Run::recompute_flows() {
  bool any_active = false;
  for (const Flow& flow : flows_)
    if (!flow.done) any_active = true;
  if (!any_active) return;

  sim::TimeMs now = engine_.now();
  for (Flow& flow : flows_) {
    if (flow.done) continue;
    flow.remaining_bits -= flow.rate * double(now - flow.last_update) * 1000.0;
    flow.last_update = now;
  }

  auto placements = orch_.placements();
  auto bearers = bearer_infos();
  std::vector<net::FlowInput> inputs;
  std::map<std::string, double> link_capacity;
  std::vector<char> routable(flows_.size(), 0);
  for (size_t i = 0; i < flows_.size(); ++i) {
    Flow& flow = flows_[i];
    if (flow.done) continue;
    net::Path path;
    try {
      path = net::compute_path(topology_, flow.src, flow.dst, placements,
                               bearers, known_ues_);
    } catch (const Error&) {
      continue;
    }
    routable[i] = 1;
    flow.crosses = path.crosses;

    net::FlowInput input;
    input.id = flow.id;
    double base_cap = net::kUnbounded;
    for (const std::string& bridge : path.crosses) {
      std::string link = "bridge/" + bridge;
      input.links.push_back(link);
      link_capacity[link] = bridge_settings_.at(bridge).bandwidth;
    }
    for (const std::string* endpoint : {&flow.src, &flow.dst}) {
      if (!known_ues_.count(*endpoint)) continue;
      if (slice_table_.slice_of(*endpoint)) {
        double efficiency =
            profile::efficiency_for(profile_, *endpoint, scenario_.name);
        base_cap = std::min(
            base_cap, slicing::slice_rate_cap(slice_table_, *endpoint, efficiency));
      } else {
        std::string link = "radio/" + bearers.at(*endpoint).enb_deployment;
        input.links.push_back(link);
        link_capacity[link] = profile_.rate_params.access_cap_mbps;
      }
    }

    std::map<std::string, double> bridge_loss;
    for (const std::string& bridge : path.crosses) {
      const BridgeDoc& settings = bridge_settings_.at(bridge);
      bridge_loss[bridge] =
          std::max(settings.loss, profile::loss_for_bridge(profile_, bridge,
                                                           settings.bandwidth,
                                                           settings.delay));
    }
    double rtt = net::rtt_ms(path.crosses, profile_.rate_params, bridge_settings_);
    double loss = net::path_loss(path.crosses, bridge_loss);
    input.cap = net::flow_cap_mbps(profile_.rate_params, base_cap, rtt, loss);
    inputs.push_back(std::move(input));
  }

  auto rates = net::allocate_rates(inputs, link_capacity);
  for (size_t i = 0; i < flows_.size(); ++i) {
    if (flows_[i].done) continue;
    set_rate(i, routable[i] ? rates.at(flows_[i].id) : 0.0);
  }
}

void Run::set_rate(size_t flow_index, double rate) {
  Flow& flow = flows_[flow_index];
  bool changed = !flow.rate_set || rate != flow.rate;
  if (changed) {
    if (!flow.rate_set || engine_.now() == flow.started_at) {
      flow.segments = 1;
    } else {
      ++flow.segments;
    }
    flow.rate_set = true;
    flow.rate = rate;
    if (flow.completion) {
      engine_.cancel(flow.completion);
      flow.completion = 0;
    }
  }
  if (flow.completion == 0 && flow.rate > 0) {
    double ms_left = flow.remaining_bits / (flow.rate * 1000.0);
    sim::TimeMs dt = static_cast<sim::TimeMs>(std::ceil(ms_left));
    if (dt < 0) dt = 0;
    flow.completion = engine_.schedule(
        engine_.now() + dt, sim::EventKind::flow_completion, "flow:" + flow.id,
        [this, flow_index] { complete_flow(flow_index); });
  }
}

void Run::complete_flow(size_t flow_index) {
  Flow& flow = flows_[flow_index];
  if (flow.done) return;
  // Exact fractional finish inside this millisecond; the single-segment
  // case reports the allocated rate itself so equal runs compare equal to
  // the last bit.
  double finish_ms = flow.last_update + flow.remaining_bits / (flow.rate * 1000.0);
  double elapsed_ms = finish_ms - double(flow.started_at);
  flow.done = true;
  flow.remaining_bits = 0;
  flow.completion = 0;
  flow.last_update = engine_.now();
  double value = flow.segments <= 1 ? flow.rate
                                    : flow.payload_bits / (elapsed_ms * 1000.0);
  result_.rows[flow.row_index].value = value;
  filled_[flow.row_index] = true;
  recompute_flows();
}

void Run::raise_stuck() const {
  for (const auto& doc : docs_) {
    const orch::Pod* pod = orch_.live_pod(doc.name);
    if (pod && pod->serving()) continue;
    raise(Errc::deployment_stuck,
          scenario_.name + ": " + doc.name + " never became Ready, " +
              blocking_reason(doc));
  }
  raise(Errc::deployment_stuck, scenario_.name + ": cluster never settled");
}

std::string Run::blocking_reason(const DeploymentDoc& doc) const {
  const orch::Pod* pod = orch_.live_pod(doc.name);
  if (!pod) return "no live pod";
  if (pod->unschedulable) return "no node matches its selector";
  if (pod->phase == orch::PodPhase::Pending) {
    for (const auto& gate : pod->gates) {
      if (gate.passed) continue;
      std::string target = format_ipv4(gate.spec.target_ip) + ":" +
                           std::to_string(gate.spec.target_port);
      for (const auto& other : docs_) {
        if (other.static_ip && *other.static_ip == gate.spec.target_ip)
          return "blocked on " + other.name + " (" + target + ")";
      }
      return "blocked on " + target;
    }
    return "waiting for a node";
  }
  if (pod->phase == orch::PodPhase::Ready)
    return "its readiness condition failed";
  switch (doc.vnf_kind) {
    case VnfKind::Cassandra:
    case VnfKind::HSS:
      return "table population in progress";
    case VnfKind::MME:
      return "blocked on a serving " + catalog_entry(VnfKind::HSS).display;
    case VnfKind::SPGWU:
      return "blocked on the user-plane heartbeat";
    case VnfKind::ENB:
    case VnfKind::RCC:
      if (doc.flexran_enabled() &&
          !controller_ready())
        return "blocked on a serving " + catalog_entry(VnfKind::FlexRAN).display;
      return "blocked on a serving " + catalog_entry(VnfKind::MME).display;
    case VnfKind::RRU:
      return "blocked on a serving " + catalog_entry(VnfKind::RCC).display;
    default:
      return "still starting";
  }
}

}  // namespace

bool ResultRow::pass() const {
  if (!expected) return true;
  double tol = tolerance.value_or(0.05);
  if (*expected == 0) return std::fabs(value) <= 1e-12;
  return std::fabs(value - *expected) / std::fabs(*expected) <= tol;
}

bool ScenarioResult::all_pass() const {
  return std::all_of(rows.begin(), rows.end(),
                     [](const ResultRow& row) { return row.pass(); });
}

std::vector<ControlCommand> parse_control_script(const std::string& text) {
  std::vector<ControlCommand> out;
  std::istringstream in(text);
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json doc = json::parse(line, nullptr, false);
    if (doc.is_discarded())
      raise(Errc::syntax,
            "control line " + std::to_string(lineno) + " is not valid JSON");
    if (!doc.is_object() || !doc.contains("at_ms") ||
        !doc["at_ms"].is_number_integer())
      raise(Errc::schema, "control line " + std::to_string(lineno) +
                              ": requires an integer \"at_ms\"");
    ControlCommand cmd;
    cmd.at_ms = doc["at_ms"].get<int64_t>();
    if (cmd.at_ms < 0)
      raise(Errc::schema, "control line " + std::to_string(lineno) +
                              ": at_ms must not be negative");
    cmd.line = line;
    out.push_back(std::move(cmd));
  }
  return out;
}

ScenarioResult run_scenario(const ScenarioDoc& scenario,
                            const TopologyDoc& topology,
                            const profile::CalibrationProfile& profile,
                            uint64_t seed,
                            const std::map<std::string, DeploymentDoc>& registry,
                            const std::vector<ControlCommand>& control) {
  Run run(scenario, topology, profile, seed, registry, control);
  return run.run();
}

std::string emit_table(const ScenarioResult& result, TableFormat format) {
  std::vector<std::array<std::string, 6>> grid;
  grid.push_back({"scenario", "subject", "metric", "value", "expected", "pass"});
  for (const ResultRow& row : result.rows) {
    grid.push_back({result.scenario_name, row.subject, row.metric,
                    format2(row.value),
                    row.expected ? format2(*row.expected) : "-",
                    row.expected ? (row.pass() ? "yes" : "no") : "-"});
  }

  std::ostringstream out;
  if (format == TableFormat::tsv) {
    for (const auto& line : grid) {
      for (size_t c = 0; c < line.size(); ++c)
        out << line[c] << (c + 1 < line.size() ? '\t' : '\n');
    }
    return out.str();
  }

  std::array<size_t, 6> width{};
  for (const auto& line : grid)
    for (size_t c = 0; c < line.size(); ++c)
      width[c] = std::max(width[c], line[c].size());
  for (const auto& line : grid) {
    for (size_t c = 0; c < line.size(); ++c) {
      out << line[c];
      if (c + 1 < line.size())
        out << std::string(width[c] - line[c].size() + 2, ' ');
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace cn2f::runner
