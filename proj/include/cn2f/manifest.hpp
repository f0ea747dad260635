#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cn2f/catalog.hpp"
#include "cn2f/errors.hpp"
#include "cn2f/ipv4.hpp"

namespace cn2f {

// ---- topology ----

struct NodeDoc {
  std::string name;
  std::string role;  // "master" | "worker"
  std::map<std::string, std::string> labels;

  friend bool operator==(const NodeDoc&, const NodeDoc&) = default;
};

struct BridgeDoc {
  std::string name;
  double bandwidth = 0;  // Mb/s, > 0
  double delay = 0;      // one-way ms, >= 0
  double loss = 0;       // probability

  friend bool operator==(const BridgeDoc&, const BridgeDoc&) = default;
};

struct LinkDoc {
  std::string endpoint_a;
  std::string endpoint_b;

  friend bool operator==(const LinkDoc&, const LinkDoc&) = default;
};

struct IpPools {
  Cidr pod_cidr;
  Cidr ue_cidr;

  friend bool operator==(const IpPools& a, const IpPools& b) {
    return a.pod_cidr.base == b.pod_cidr.base &&
           a.pod_cidr.prefix == b.pod_cidr.prefix &&
           a.ue_cidr.base == b.ue_cidr.base &&
           a.ue_cidr.prefix == b.ue_cidr.prefix;
  }
};

struct TopologyDoc {
  std::vector<NodeDoc> nodes;
  std::vector<BridgeDoc> bridges;
  std::vector<LinkDoc> links;
  IpPools ip_pools;

  const BridgeDoc* find_bridge(const std::string& name) const;
  const NodeDoc* find_node(const std::string& name) const;

  friend bool operator==(const TopologyDoc&, const TopologyDoc&) = default;
};

// ---- deployment ----

struct InitGate {
  Ipv4 target_ip;
  uint16_t target_port = 0;
  int retries = 100;
  int interval_s = 10;

  friend bool operator==(const InitGate&, const InitGate&) = default;
};

struct DeploymentDoc {
  std::string name;
  VnfKind vnf_kind = VnfKind::UE;
  std::map<std::string, std::string> node_selector;
  std::optional<Ipv4> static_ip;
  std::vector<uint16_t> ports;
  bool ports_listed = false;  // distinguishes [] from key absent
  std::map<std::string, std::string> env;
  std::optional<std::string> config_map;
  std::vector<InitGate> init_gates;
  std::optional<std::string> command;

  // Catalog defaults stand in when the doc lists no ports.
  std::vector<uint16_t> effective_ports() const;
  bool flexran_enabled() const;  // env FLEXRAN_ENABLED == "yes"

  friend bool operator==(const DeploymentDoc&, const DeploymentDoc&) = default;
};

// ---- scenario ----

struct BridgeOverride {
  std::optional<double> bandwidth;
  std::optional<double> delay;
  std::optional<double> loss;

  friend bool operator==(const BridgeOverride&, const BridgeOverride&) = default;
};

struct SliceDoc {
  int slice_id = 0;
  int rb = 0;
  std::vector<std::string> ue_names;

  friend bool operator==(const SliceDoc&, const SliceDoc&) = default;
};

enum class ProbeKind { download, rtt };

struct ProbeDoc {
  ProbeKind kind = ProbeKind::download;
  std::string src;
  std::string dst;                    // deployment name; empty for external
  std::optional<Ipv4> external_host;  // dst and external_host are exclusive
  int64_t payload_bytes = 10'000'000;
  std::optional<double> expected;
  double tolerance = 0.05;

  std::string subject() const;  // "src->dst" label used in result rows

  friend bool operator==(const ProbeDoc&, const ProbeDoc&) = default;
};

struct ScenarioDoc {
  std::string name;
  std::vector<std::variant<std::string, DeploymentDoc>> deployments;
  std::map<std::string, BridgeOverride> bridge_overrides;
  std::vector<SliceDoc> slices;
  std::vector<ProbeDoc> probes;
  std::string calibration_profile = "nominal";
  int duration_s = 300;

  friend bool operator==(const ScenarioDoc&, const ScenarioDoc&) = default;
};

// ---- parsing ----
// All parsers raise Errc::syntax for malformed JSON and Errc::schema for
// missing, duplicate, unknown, or ill-typed fields. Nothing else escapes.

TopologyDoc parse_topology(const std::string& text);
DeploymentDoc parse_deployment(const std::string& text);
ScenarioDoc parse_scenario(const std::string& text);

enum class DocKind { topology, deployment, scenario };
DocKind sniff_doc_kind(const std::string& text);

std::string serialize_topology(const TopologyDoc& doc);
std::string serialize_deployment(const DeploymentDoc& doc);
std::string serialize_scenario(const ScenarioDoc& doc);

// Replaces name references with registry entries, preserving order.
// Raises Errc::schema on an unresolvable reference.
std::vector<DeploymentDoc> resolve_deployments(
    const ScenarioDoc& scenario,
    const std::map<std::string, DeploymentDoc>& registry);

// ---- validation ----

struct Finding {
  std::string code;
  std::string location;
  std::string message;

  friend bool operator==(const Finding&, const Finding&) = default;
  friend auto operator<=>(const Finding&, const Finding&) = default;
};

struct ValidationReport {
  std::vector<Finding> errors;
  std::vector<Finding> warnings;

  bool ok() const { return errors.empty(); }
  // One finding per line: "LEVEL CODE location: message", errors first,
  // each group sorted.
  std::string to_text() const;
};

ValidationReport validate(const TopologyDoc& topology,
                          const std::map<std::string, DeploymentDoc>& registry,
                          const ScenarioDoc& scenario,
                          const std::vector<std::string>& profile_names);

}  // namespace cn2f
