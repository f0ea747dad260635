#include "cn2f/manifest.hpp"

#include <algorithm>
#include <set>

#include "cn2f/netmodel.hpp"
#include "json.hpp"

namespace cn2f {

namespace {

using nlohmann::json;

json parse_json(const std::string& text) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) raise(Errc::syntax, "malformed JSON document");
  return doc;
}

void require_object(const json& value, const std::string& where) {
  if (!value.is_object()) raise(Errc::schema, where + ": expected an object");
}

void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) {
          return key == a;
        }) == allowed.end()) {
      raise(Errc::schema, where + ": unknown key \"" + key + "\"");
    }
  }
}

const json* find(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

const json& require(const json& obj, const char* key, const std::string& where) {
  const json* v = find(obj, key);
  if (!v) raise(Errc::schema, where + ": missing key \"" + key + "\"");
  return *v;
}

std::string as_string(const json& v, const std::string& where) {
  if (!v.is_string()) raise(Errc::schema, where + ": expected a string");
  return v.get<std::string>();
}

double as_number(const json& v, const std::string& where) {
  if (!v.is_number()) raise(Errc::schema, where + ": expected a number");
  return v.get<double>();
}

int64_t as_integer(const json& v, const std::string& where) {
  if (!v.is_number_integer()) raise(Errc::schema, where + ": expected an integer");
  return v.get<int64_t>();
}

std::map<std::string, std::string> as_string_map(const json& v,
                                                 const std::string& where) {
  require_object(v, where);
  std::map<std::string, std::string> out;
  for (const auto& [key, value] : v.items()) {
    out[key] = as_string(value, where + "." + key);
  }
  return out;
}

Ipv4 as_ipv4(const json& v, const std::string& where) {
  auto addr = parse_ipv4(as_string(v, where));
  if (!addr) raise(Errc::schema, where + ": not a dotted-quad address");
  return *addr;
}

uint16_t as_port(const json& v, const std::string& where) {
  int64_t n = as_integer(v, where);
  if (n < 1 || n > 65535) {
    raise(Errc::schema, where + ": port out of range [1, 65535]");
  }
  return static_cast<uint16_t>(n);
}

InitGate parse_init_gate(const json& v, const std::string& where) {
  require_object(v, where);
  check_keys(v, {"target_ip", "target_port", "retries", "interval"}, where);
  InitGate gate;
  gate.target_ip = as_ipv4(require(v, "target_ip", where), where + ".target_ip");
  gate.target_port = as_port(require(v, "target_port", where), where + ".target_port");
  if (const json* r = find(v, "retries")) {
    int64_t n = as_integer(*r, where + ".retries");
    if (n < 1) raise(Errc::schema, where + ".retries: must be >= 1");
    gate.retries = static_cast<int>(n);
  }
  if (const json* i = find(v, "interval")) {
    int64_t n = as_integer(*i, where + ".interval");
    if (n < 1) raise(Errc::schema, where + ".interval: must be >= 1 second");
    gate.interval_s = static_cast<int>(n);
  }
  return gate;
}

DeploymentDoc parse_deployment_obj(const json& doc, const std::string& where) {
  require_object(doc, where);
  check_keys(doc,
             {"name", "vnf_kind", "node_selector", "static_ip", "ports", "env",
              "config_map", "init_gates", "command"},
             where);
  DeploymentDoc out;
  out.name = as_string(require(doc, "name", where), where + ".name");
  if (out.name.empty()) raise(Errc::schema, where + ".name: must be non-empty");
  std::string kind = as_string(require(doc, "vnf_kind", where), where + ".vnf_kind");
  auto parsed = parse_vnf_kind(kind);
  if (!parsed) raise(Errc::schema, where + ".vnf_kind: unknown kind \"" + kind + "\"");
  out.vnf_kind = *parsed;
  if (const json* v = find(doc, "node_selector")) {
    out.node_selector = as_string_map(*v, where + ".node_selector");
  }
  if (const json* v = find(doc, "static_ip")) {
    out.static_ip = as_ipv4(*v, where + ".static_ip");
  }
  if (const json* v = find(doc, "ports")) {
    if (!v->is_array()) raise(Errc::schema, where + ".ports: expected an array");
    out.ports_listed = true;
    for (size_t i = 0; i < v->size(); ++i) {
      uint16_t p = as_port((*v)[i], where + ".ports[" + std::to_string(i) + "]");
      if (std::find(out.ports.begin(), out.ports.end(), p) != out.ports.end()) {
        raise(Errc::schema, where + ".ports: duplicate port " + std::to_string(p));
      }
      out.ports.push_back(p);
    }
  }
  if (const json* v = find(doc, "env")) {
    out.env = as_string_map(*v, where + ".env");
  }
  if (const json* v = find(doc, "config_map")) {
    out.config_map = as_string(*v, where + ".config_map");
  }
  if (const json* v = find(doc, "init_gates")) {
    if (!v->is_array()) raise(Errc::schema, where + ".init_gates: expected an array");
    for (size_t i = 0; i < v->size(); ++i) {
      out.init_gates.push_back(parse_init_gate(
          (*v)[i], where + ".init_gates[" + std::to_string(i) + "]"));
    }
  }
  if (const json* v = find(doc, "command")) {
    out.command = as_string(*v, where + ".command");
  }
  return out;
}

ProbeDoc parse_probe(const json& v, const std::string& where) {
  require_object(v, where);
  check_keys(v,
             {"kind", "src", "dst", "external_host", "payload_bytes",
              "expected", "tolerance"},
             where);
  ProbeDoc out;
  std::string kind = as_string(require(v, "kind", where), where + ".kind");
  if (kind == "download") {
    out.kind = ProbeKind::download;
  } else if (kind == "rtt") {
    out.kind = ProbeKind::rtt;
  } else {
    raise(Errc::schema, where + ".kind: expected \"download\" or \"rtt\"");
  }
  out.src = as_string(require(v, "src", where), where + ".src");
  const json* dst = find(v, "dst");
  const json* ext = find(v, "external_host");
  if ((dst != nullptr) == (ext != nullptr)) {
    raise(Errc::schema, where + ": exactly one of dst / external_host required");
  }
  if (dst) out.dst = as_string(*dst, where + ".dst");
  if (ext) out.external_host = as_ipv4(*ext, where + ".external_host");
  if (const json* p = find(v, "payload_bytes")) {
    if (out.kind != ProbeKind::download) {
      raise(Errc::schema, where + ".payload_bytes: only valid for download probes");
    }
    int64_t n = as_integer(*p, where + ".payload_bytes");
    if (n < 0) raise(Errc::schema, where + ".payload_bytes: must be >= 0");
    out.payload_bytes = n;
  }
  if (const json* e = find(v, "expected")) {
    out.expected = as_number(*e, where + ".expected");
  }
  if (const json* t = find(v, "tolerance")) {
    double tol = as_number(*t, where + ".tolerance");
    if (tol <= 0) raise(Errc::schema, where + ".tolerance: must be > 0");
    out.tolerance = tol;
  }
  return out;
}

Cidr as_cidr(const json& v, const std::string& where) {
  auto cidr = parse_cidr(as_string(v, where));
  if (!cidr) raise(Errc::schema, where + ": not a CIDR block");
  if (cidr->prefix > 30) raise(Errc::schema, where + ": pool too small to allocate from");
  return *cidr;
}

json ipv4_json(Ipv4 addr) { return json(format_ipv4(addr)); }

}  // namespace

const BridgeDoc* TopologyDoc::find_bridge(const std::string& name) const {
  for (const auto& b : bridges) {
    if (b.name == name) return &b;
  }
  return nullptr;
}

const NodeDoc* TopologyDoc::find_node(const std::string& name) const {
  for (const auto& n : nodes) {
    if (n.name == name) return &n;
  }
  return nullptr;
}

std::vector<uint16_t> DeploymentDoc::effective_ports() const {
  if (ports_listed) return ports;
  return catalog_entry(vnf_kind).listen_ports;
}

bool DeploymentDoc::flexran_enabled() const {
  auto it = env.find("FLEXRAN_ENABLED");
  return it != env.end() && it->second == "yes";
}

std::string ProbeDoc::subject() const {
  if (external_host) return src + "->" + format_ipv4(*external_host);
  return src + "->" + dst;
}

TopologyDoc parse_topology(const std::string& text) {
  json doc = parse_json(text);
  require_object(doc, "topology");
  check_keys(doc, {"nodes", "bridges", "links", "ip_pools"}, "topology");
  TopologyDoc out;

  const json& nodes = require(doc, "nodes", "topology");
  if (!nodes.is_array() || nodes.empty()) {
    raise(Errc::schema, "topology.nodes: expected a non-empty array");
  }
  std::set<std::string> names;
  for (size_t i = 0; i < nodes.size(); ++i) {
    std::string where = "topology.nodes[" + std::to_string(i) + "]";
    const json& n = nodes[i];
    require_object(n, where);
    check_keys(n, {"name", "role", "labels"}, where);
    NodeDoc node;
    node.name = as_string(require(n, "name", where), where + ".name");
    node.role = as_string(require(n, "role", where), where + ".role");
    if (node.role != "master" && node.role != "worker") {
      raise(Errc::schema, where + ".role: expected \"master\" or \"worker\"");
    }
    if (const json* l = find(n, "labels")) {
      node.labels = as_string_map(*l, where + ".labels");
    }
    if (!names.insert(node.name).second) {
      raise(Errc::schema, where + ": duplicate name \"" + node.name + "\"");
    }
    out.nodes.push_back(std::move(node));
  }

  if (const json* bridges = find(doc, "bridges")) {
    if (!bridges->is_array()) raise(Errc::schema, "topology.bridges: expected an array");
    for (size_t i = 0; i < bridges->size(); ++i) {
      std::string where = "topology.bridges[" + std::to_string(i) + "]";
      const json& b = (*bridges)[i];
      require_object(b, where);
      check_keys(b, {"name", "bandwidth", "delay", "loss"}, where);
      BridgeDoc bridge;
      bridge.name = as_string(require(b, "name", where), where + ".name");
      bridge.bandwidth = as_number(require(b, "bandwidth", where), where + ".bandwidth");
      if (bridge.bandwidth <= 0) raise(Errc::schema, where + ".bandwidth: must be > 0");
      bridge.delay = as_number(require(b, "delay", where), where + ".delay");
      if (bridge.delay < 0) raise(Errc::schema, where + ".delay: must be >= 0");
      if (const json* l = find(b, "loss")) {
        bridge.loss = as_number(*l, where + ".loss");
        if (bridge.loss < 0 || bridge.loss > 1) {
          raise(Errc::schema, where + ".loss: must be within [0, 1]");
        }
      }
      if (!names.insert(bridge.name).second) {
        raise(Errc::schema, where + ": duplicate name \"" + bridge.name + "\"");
      }
      out.bridges.push_back(std::move(bridge));
    }
  }

  if (const json* links = find(doc, "links")) {
    if (!links->is_array()) raise(Errc::schema, "topology.links: expected an array");
    std::set<std::pair<std::string, std::string>> seen;
    for (size_t i = 0; i < links->size(); ++i) {
      std::string where = "topology.links[" + std::to_string(i) + "]";
      const json& l = (*links)[i];
      require_object(l, where);
      check_keys(l, {"endpoint-a", "endpoint-b"}, where);
      LinkDoc link;
      link.endpoint_a = as_string(require(l, "endpoint-a", where), where + ".endpoint-a");
      link.endpoint_b = as_string(require(l, "endpoint-b", where), where + ".endpoint-b");
      for (const std::string& ep : {link.endpoint_a, link.endpoint_b}) {
        if (!names.count(ep)) {
          raise(Errc::schema, where + ": unknown endpoint \"" + ep + "\"");
        }
      }
      // A link attaches one node to one bridge; the bandwidth model has no
      // meaning for other shapes.
      bool a_node = out.find_node(link.endpoint_a) != nullptr;
      bool b_node = out.find_node(link.endpoint_b) != nullptr;
      if (a_node == b_node) {
        raise(Errc::schema, where + ": a link joins exactly one node and one bridge");
      }
      auto key = std::minmax(link.endpoint_a, link.endpoint_b);
      if (!seen.insert(key).second) {
        raise(Errc::schema, where + ": duplicate link");
      }
      out.links.push_back(std::move(link));
    }
  }

  const json& pools = require(doc, "ip_pools", "topology");
  require_object(pools, "topology.ip_pools");
  check_keys(pools, {"pod_cidr", "ue_cidr"}, "topology.ip_pools");
  out.ip_pools.pod_cidr =
      as_cidr(require(pools, "pod_cidr", "topology.ip_pools"), "topology.ip_pools.pod_cidr");
  out.ip_pools.ue_cidr =
      as_cidr(require(pools, "ue_cidr", "topology.ip_pools"), "topology.ip_pools.ue_cidr");
  return out;
}

DeploymentDoc parse_deployment(const std::string& text) {
  return parse_deployment_obj(parse_json(text), "deployment");
}

ScenarioDoc parse_scenario(const std::string& text) {
  json doc = parse_json(text);
  require_object(doc, "scenario");
  check_keys(doc,
             {"name", "deployments", "bridge_overrides", "slices", "probes",
              "calibration_profile", "duration"},
             "scenario");
  ScenarioDoc out;
  out.name = as_string(require(doc, "name", "scenario"), "scenario.name");

  const json& deps = require(doc, "deployments", "scenario");
  if (!deps.is_array()) raise(Errc::schema, "scenario.deployments: expected an array");
  for (size_t i = 0; i < deps.size(); ++i) {
    std::string where = "scenario.deployments[" + std::to_string(i) + "]";
    const json& d = deps[i];
    if (d.is_string()) {
      out.deployments.emplace_back(d.get<std::string>());
    } else {
      out.deployments.emplace_back(parse_deployment_obj(d, where));
    }
  }

  if (const json* ov = find(doc, "bridge_overrides")) {
    require_object(*ov, "scenario.bridge_overrides");
    for (const auto& [bridge, spec] : ov->items()) {
      std::string where = "scenario.bridge_overrides." + bridge;
      require_object(spec, where);
      check_keys(spec, {"bandwidth", "delay", "loss"}, where);
      BridgeOverride o;
      if (const json* v = find(spec, "bandwidth")) {
        o.bandwidth = as_number(*v, where + ".bandwidth");
        if (*o.bandwidth <= 0) raise(Errc::schema, where + ".bandwidth: must be > 0");
      }
      if (const json* v = find(spec, "delay")) {
        o.delay = as_number(*v, where + ".delay");
        if (*o.delay < 0) raise(Errc::schema, where + ".delay: must be >= 0");
      }
      if (const json* v = find(spec, "loss")) {
        o.loss = as_number(*v, where + ".loss");
        if (*o.loss < 0 || *o.loss > 1) {
          raise(Errc::schema, where + ".loss: must be within [0, 1]");
        }
      }
      out.bridge_overrides[bridge] = o;
    }
  }

  if (const json* slices = find(doc, "slices")) {
    if (!slices->is_array()) raise(Errc::schema, "scenario.slices: expected an array");
    std::set<int> ids;
    std::set<std::string> ues;
    for (size_t i = 0; i < slices->size(); ++i) {
      std::string where = "scenario.slices[" + std::to_string(i) + "]";
      const json& s = (*slices)[i];
      require_object(s, where);
      check_keys(s, {"slice_id", "rb", "ue_names"}, where);
      SliceDoc slice;
      slice.slice_id = static_cast<int>(as_integer(require(s, "slice_id", where), where + ".slice_id"));
      int64_t rb = as_integer(require(s, "rb", where), where + ".rb");
      if (rb < 0) raise(Errc::schema, where + ".rb: must be >= 0");
      slice.rb = static_cast<int>(rb);
      const json& names = require(s, "ue_names", where);
      if (!names.is_array()) raise(Errc::schema, where + ".ue_names: expected an array");
      for (size_t j = 0; j < names.size(); ++j) {
        std::string ue = as_string(names[j], where + ".ue_names[" + std::to_string(j) + "]");
        if (!ues.insert(ue).second) {
          raise(Errc::schema, where + ".ue_names: \"" + ue + "\" already sliced");
        }
        slice.ue_names.push_back(std::move(ue));
      }
      if (!ids.insert(slice.slice_id).second) {
        raise(Errc::schema, where + ".slice_id: duplicate id");
      }
      out.slices.push_back(std::move(slice));
    }
  }

  if (const json* probes = find(doc, "probes")) {
    if (!probes->is_array()) raise(Errc::schema, "scenario.probes: expected an array");
    for (size_t i = 0; i < probes->size(); ++i) {
      out.probes.push_back(
          parse_probe((*probes)[i], "scenario.probes[" + std::to_string(i) + "]"));
    }
  }

  if (const json* p = find(doc, "calibration_profile")) {
    out.calibration_profile = as_string(*p, "scenario.calibration_profile");
  }
  if (const json* d = find(doc, "duration")) {
    int64_t n = as_integer(*d, "scenario.duration");
    if (n < 1) raise(Errc::schema, "scenario.duration: must be >= 1 second");
    out.duration_s = static_cast<int>(n);
  }
  return out;
}

DocKind sniff_doc_kind(const std::string& text) {
  json doc = parse_json(text);
  require_object(doc, "document");
  if (doc.contains("nodes")) return DocKind::topology;
  if (doc.contains("vnf_kind")) return DocKind::deployment;
  if (doc.contains("deployments")) return DocKind::scenario;
  raise(Errc::schema,
        "document: none of the identifying keys (nodes, vnf_kind, deployments) present");
}

namespace {

json deployment_json(const DeploymentDoc& doc) {
  json d;
  d["name"] = doc.name;
  d["vnf_kind"] = catalog_entry(doc.vnf_kind).token;
  if (!doc.node_selector.empty()) d["node_selector"] = doc.node_selector;
  if (doc.static_ip) d["static_ip"] = ipv4_json(*doc.static_ip);
  if (doc.ports_listed) d["ports"] = doc.ports;
  if (!doc.env.empty()) d["env"] = doc.env;
  if (doc.config_map) d["config_map"] = *doc.config_map;
  if (!doc.init_gates.empty()) {
    json gates = json::array();
    for (const auto& g : doc.init_gates) {
      gates.push_back({{"target_ip", format_ipv4(g.target_ip)},
                       {"target_port", g.target_port},
                       {"retries", g.retries},
                       {"interval", g.interval_s}});
    }
    d["init_gates"] = std::move(gates);
  }
  if (doc.command) d["command"] = *doc.command;
  return d;
}

}  // namespace

std::string serialize_topology(const TopologyDoc& doc) {
  json t;
  json nodes = json::array();
  for (const auto& n : doc.nodes) {
    json node = {{"name", n.name}, {"role", n.role}};
    if (!n.labels.empty()) node["labels"] = n.labels;
    nodes.push_back(std::move(node));
  }
  t["nodes"] = std::move(nodes);
  json bridges = json::array();
  for (const auto& b : doc.bridges) {
    bridges.push_back({{"name", b.name},
                       {"bandwidth", b.bandwidth},
                       {"delay", b.delay},
                       {"loss", b.loss}});
  }
  t["bridges"] = std::move(bridges);
  json links = json::array();
  for (const auto& l : doc.links) {
    links.push_back({{"endpoint-a", l.endpoint_a}, {"endpoint-b", l.endpoint_b}});
  }
  t["links"] = std::move(links);
  t["ip_pools"] = {{"pod_cidr", format_cidr(doc.ip_pools.pod_cidr)},
                   {"ue_cidr", format_cidr(doc.ip_pools.ue_cidr)}};
  return t.dump(2) + "\n";
}

std::string serialize_deployment(const DeploymentDoc& doc) {
  return deployment_json(doc).dump(2) + "\n";
}

std::string serialize_scenario(const ScenarioDoc& doc) {
  json s;
  s["name"] = doc.name;
  json deps = json::array();
  for (const auto& entry : doc.deployments) {
    if (const auto* ref = std::get_if<std::string>(&entry)) {
      deps.push_back(*ref);
    } else {
      deps.push_back(deployment_json(std::get<DeploymentDoc>(entry)));
    }
  }
  s["deployments"] = std::move(deps);
  if (!doc.bridge_overrides.empty()) {
    json ov;
    for (const auto& [bridge, o] : doc.bridge_overrides) {
      json spec = json::object();
      if (o.bandwidth) spec["bandwidth"] = *o.bandwidth;
      if (o.delay) spec["delay"] = *o.delay;
      if (o.loss) spec["loss"] = *o.loss;
      ov[bridge] = std::move(spec);
    }
    s["bridge_overrides"] = std::move(ov);
  }
  if (!doc.slices.empty()) {
    json slices = json::array();
    for (const auto& sl : doc.slices) {
      slices.push_back({{"slice_id", sl.slice_id},
                        {"rb", sl.rb},
                        {"ue_names", sl.ue_names}});
    }
    s["slices"] = std::move(slices);
  }
  if (!doc.probes.empty()) {
    json probes = json::array();
    for (const auto& p : doc.probes) {
      json probe;
      probe["kind"] = p.kind == ProbeKind::download ? "download" : "rtt";
      probe["src"] = p.src;
      if (p.external_host) {
        probe["external_host"] = format_ipv4(*p.external_host);
      } else {
        probe["dst"] = p.dst;
      }
      if (p.kind == ProbeKind::download) probe["payload_bytes"] = p.payload_bytes;
      if (p.expected) {
        probe["expected"] = *p.expected;
        probe["tolerance"] = p.tolerance;
      }
      probes.push_back(std::move(probe));
    }
    s["probes"] = std::move(probes);
  }
  s["calibration_profile"] = doc.calibration_profile;
  s["duration"] = doc.duration_s;
  return s.dump(2) + "\n";
}

std::vector<DeploymentDoc> resolve_deployments(
    const ScenarioDoc& scenario,
    const std::map<std::string, DeploymentDoc>& registry) {
  std::vector<DeploymentDoc> out;
  for (const auto& entry : scenario.deployments) {
    if (const auto* ref = std::get_if<std::string>(&entry)) {
      auto it = registry.find(*ref);
      if (it == registry.end()) {
        raise(Errc::schema, "scenario.deployments: unknown reference \"" + *ref + "\"");
      }
      out.push_back(it->second);
    } else {
      out.push_back(std::get<DeploymentDoc>(entry));
    }
  }
  return out;
}

namespace {

bool selector_matches(const std::map<std::string, std::string>& selector,
                      const NodeDoc& node) {
  for (const auto& [key, value] : selector) {
    auto it = node.labels.find(key);
    if (it == node.labels.end() || it->second != value) return false;
  }
  return true;
}

// Deterministic stand-in for the runtime scheduler: lexicographically
// smallest matching worker.
std::optional<std::string> simulated_node(
    const TopologyDoc& topology, const std::map<std::string, std::string>& selector) {
  std::optional<std::string> best;
  for (const auto& node : topology.nodes) {
    if (node.role != "worker") continue;
    if (!selector_matches(selector, node)) continue;
    if (!best || node.name < *best) best = node.name;
  }
  return best;
}

}  // namespace

std::string ValidationReport::to_text() const {
  std::string out;
  for (const auto& f : errors) {
    out += "ERROR " + f.code + " " + f.location + ": " + f.message + "\n";
  }
  for (const auto& f : warnings) {
    out += "WARNING " + f.code + " " + f.location + ": " + f.message + "\n";
  }
  return out;
}

ValidationReport validate(const TopologyDoc& topology,
                          const std::map<std::string, DeploymentDoc>& registry,
                          const ScenarioDoc& scenario,
                          const std::vector<std::string>& profile_names) {
  ValidationReport report;
  auto error = [&](std::string code, std::string location, std::string message) {
    report.errors.push_back({std::move(code), std::move(location), std::move(message)});
  };
  auto warning = [&](std::string code, std::string location, std::string message) {
    report.warnings.push_back({std::move(code), std::move(location), std::move(message)});
  };

  // Resolve references; unresolved ones are reported and skipped.
  std::vector<DeploymentDoc> docs;
  for (size_t i = 0; i < scenario.deployments.size(); ++i) {
    const auto& entry = scenario.deployments[i];
    if (const auto* ref = std::get_if<std::string>(&entry)) {
      auto it = registry.find(*ref);
      if (it == registry.end()) {
        error("UnknownDeploymentRef",
              "scenario/" + scenario.name + "/deployments[" + std::to_string(i) + "]",
              "no deployment named \"" + *ref + "\"");
        continue;
      }
      docs.push_back(it->second);
    } else {
      docs.push_back(std::get<DeploymentDoc>(entry));
    }
  }

  std::set<std::string> seen_names;
  std::map<Ipv4, std::string> static_ips;
  std::set<std::string> ue_deployments;
  for (const auto& doc : docs) {
    std::string loc = "deployment/" + doc.name;
    if (!seen_names.insert(doc.name).second) {
      error("DuplicateDeployment", loc, "deployment name appears more than once");
      continue;
    }
    if (doc.vnf_kind == VnfKind::UE) ue_deployments.insert(doc.name);
    if (doc.static_ip) {
      if (!topology.ip_pools.pod_cidr.contains(*doc.static_ip)) {
        error("StaticIpOutsidePool", loc,
              format_ipv4(*doc.static_ip) + " not inside pod pool " +
                  format_cidr(topology.ip_pools.pod_cidr));
      }
      auto [it, fresh] = static_ips.emplace(*doc.static_ip, doc.name);
      if (!fresh) {
        error("DuplicateStaticIp", loc,
              format_ipv4(*doc.static_ip) + " also requested by \"" + it->second + "\"");
      }
    }
    if (!simulated_node(topology, doc.node_selector)) {
      std::string selector;
      for (const auto& [k, v] : doc.node_selector) {
        if (!selector.empty()) selector += ",";
        selector += k + "=" + v;
      }
      error("NoMatchingLabel", loc,
            "no worker node matches selector {" + selector + "}");
    }
  }

  // Gate targets that match no declared static address may still resolve at
  // runtime against dynamically allocated ones.
  for (const auto& doc : docs) {
    for (size_t g = 0; g < doc.init_gates.size(); ++g) {
      Ipv4 target = doc.init_gates[g].target_ip;
      if (!static_ips.count(target)) {
        warning("UnresolvedGateTarget",
                "deployment/" + doc.name + "/init_gates[" + std::to_string(g) + "]",
                "target " + format_ipv4(target) +
                    " is no declared static address; will only resolve if "
                    "dynamically allocated");
      }
    }
  }

  for (const auto& [bridge, spec] : scenario.bridge_overrides) {
    (void)spec;
    if (!topology.find_bridge(bridge)) {
      error("UnknownBridgeOverride",
            "scenario/" + scenario.name + "/bridge_overrides/" + bridge,
            "topology has no bridge \"" + bridge + "\"");
    }
  }

  int total_rb = 0;
  for (const auto& slice : scenario.slices) {
    total_rb += slice.rb;
    for (const auto& ue : slice.ue_names) {
      if (!ue_deployments.count(ue)) {
        error("UnknownSliceUe",
              "scenario/" + scenario.name + "/slices[" + std::to_string(slice.slice_id) + "]",
              "\"" + ue + "\" is not a deployed UE");
      }
    }
  }
  if (total_rb > 25) {
    error("SliceExceedsPool", "scenario/" + scenario.name,
          "slice quotas sum to " + std::to_string(total_rb) + " RB over a pool of 25");
  }

  for (size_t i = 0; i < scenario.probes.size(); ++i) {
    const auto& probe = scenario.probes[i];
    std::string loc = "scenario/" + scenario.name + "/probes[" + std::to_string(i) + "]";
    if (!seen_names.count(probe.src)) {
      error("UnknownProbeEndpoint", loc, "src \"" + probe.src + "\" is not deployed");
    }
    if (!probe.external_host && !seen_names.count(probe.dst)) {
      error("UnknownProbeEndpoint", loc, "dst \"" + probe.dst + "\" is not deployed");
    }
  }

  if (std::find(profile_names.begin(), profile_names.end(),
                scenario.calibration_profile) == profile_names.end()) {
    error("UnknownProfile", "scenario/" + scenario.name,
          "no calibration profile named \"" + scenario.calibration_profile + "\"");
  }

  // Fronthaul feasibility for split RAN deployments: every bridge between
  // the radio and central units must clear the split's floor.
  const DeploymentDoc* rru = nullptr;
  const DeploymentDoc* rcc = nullptr;
  for (const auto& doc : docs) {
    if (doc.vnf_kind == VnfKind::RRU && !rru) rru = &doc;
    if (doc.vnf_kind == VnfKind::RCC && !rcc) rcc = &doc;
  }
  if (rru && rcc) {
    net::SplitOption split = net::SplitOption::if4p5;
    for (const DeploymentDoc* doc : {rru, rcc}) {
      auto it = doc->env.find("SPLIT_OPTION");
      if (it == doc->env.end()) continue;
      auto parsed = net::parse_split_option(it->second);
      if (!parsed) {
        error("InvalidSplitOption", "deployment/" + doc->name,
              "SPLIT_OPTION \"" + it->second + "\" is not monolithic, IF5, or IF4p5");
      } else {
        split = *parsed;
      }
    }
    auto rru_node = simulated_node(topology, rru->node_selector);
    auto rcc_node = simulated_node(topology, rcc->node_selector);
    if (rru_node && rcc_node && *rru_node != *rcc_node) {
      try {
        for (const auto& name : net::bridges_between(topology, *rru_node, *rcc_node)) {
          BridgeDoc effective = *topology.find_bridge(name);
          auto ov = scenario.bridge_overrides.find(name);
          if (ov != scenario.bridge_overrides.end()) {
            if (ov->second.bandwidth) effective.bandwidth = *ov->second.bandwidth;
            if (ov->second.delay) effective.delay = *ov->second.delay;
            if (ov->second.loss) effective.loss = *ov->second.loss;
          }
          if (auto violation = net::check_fronthaul(split, effective)) {
            error("FronthaulTooSlow", "bridge/" + name, *violation);
          }
        }
      } catch (const Error&) {
        error("FronthaulTooSlow", "deployment/" + rru->name,
              "no fronthaul path between " + *rru_node + " and " + *rcc_node);
      }
    }
  }

  std::sort(report.errors.begin(), report.errors.end());
  std::sort(report.warnings.begin(), report.warnings.end());
  return report;
}

}  // namespace cn2f
