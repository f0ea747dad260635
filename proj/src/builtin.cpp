#include "cn2f/builtin.hpp"

namespace cn2f {

namespace {

Ipv4 ip(const std::string& text) { return *parse_ipv4(text); }

constexpr const char* kCassandraIp = "10.233.0.170";
constexpr const char* kHssIp = "10.233.0.219";
constexpr const char* kMmeIp = "10.233.0.130";
constexpr const char* kSpgwcIp = "10.233.0.140";
constexpr const char* kRccIp = "10.233.0.160";
constexpr const char* kFlexranIp = "10.233.0.200";

DeploymentDoc base(const std::string& name, VnfKind kind, const char* zone) {
  DeploymentDoc doc;
  doc.name = name;
  doc.vnf_kind = kind;
  doc.node_selector = {{"environment", zone}};
  return doc;
}

InitGate gate(const char* target, uint16_t port) {
  InitGate g;
  g.target_ip = ip(target);
  g.target_port = port;
  return g;
}

}  // namespace

TopologyDoc builtin_topology() {
  TopologyDoc topo;
  topo.nodes = {
      {"master", "master", {}},
      {"worker1", "worker", {{"environment", "edge"}}},
      {"worker2", "worker", {{"environment", "edge"}}},
      {"worker3", "worker", {{"environment", "cloud"}}},
  };
  topo.bridges = {
      {"FH", 2500.0, 0.0, 0.0},
      {"TN", 1000.0, 0.0, 0.0},
  };
  topo.links = {
      {"worker1", "FH"}, {"worker2", "FH"},
      {"worker1", "TN"}, {"worker2", "TN"}, {"worker3", "TN"},
  };
  topo.ip_pools.pod_cidr = *parse_cidr("10.233.0.0/24");
  topo.ip_pools.ue_cidr = *parse_cidr("172.16.0.0/24");
  return topo;
}

std::map<std::string, DeploymentDoc> builtin_deployments() {
  std::map<std::string, DeploymentDoc> out;

  DeploymentDoc cassandra = base("cassandra", VnfKind::Cassandra, "cloud");
  cassandra.static_ip = ip(kCassandraIp);
  out[cassandra.name] = cassandra;

  DeploymentDoc hss = base("hss", VnfKind::HSS, "cloud");
  hss.static_ip = ip(kHssIp);
  hss.init_gates = {gate(kCassandraIp, 9042)};
  out[hss.name] = hss;

  DeploymentDoc mme = base("mme", VnfKind::MME, "cloud");
  mme.static_ip = ip(kMmeIp);
  mme.init_gates = {gate(kHssIp, 3868)};
  out[mme.name] = mme;

  DeploymentDoc spgwc = base("spgwc", VnfKind::SPGWC, "cloud");
  spgwc.static_ip = ip(kSpgwcIp);
  spgwc.init_gates = {gate(kMmeIp, 3870)};
  out[spgwc.name] = spgwc;

  DeploymentDoc spgwu = base("spgwu", VnfKind::SPGWU, "cloud");
  spgwu.init_gates = {gate(kSpgwcIp, 8805)};
  out[spgwu.name] = spgwu;

  // Edge-anchored user plane for the edge-computing placement runs.
  DeploymentDoc spgwu_edge = base("spgwu-edge", VnfKind::SPGWU, "edge");
  spgwu_edge.init_gates = {gate(kSpgwcIp, 8805)};
  out[spgwu_edge.name] = spgwu_edge;

  DeploymentDoc enb = base("enb", VnfKind::ENB, "edge");
  enb.init_gates = {gate(kMmeIp, 36412)};
  out[enb.name] = enb;

  DeploymentDoc enb_sliced = base("enb-sliced", VnfKind::ENB, "edge");
  enb_sliced.env = {{"FLEXRAN_ENABLED", "yes"}};
  enb_sliced.init_gates = {gate(kMmeIp, 36412), gate(kFlexranIp, 2210)};
  out[enb_sliced.name] = enb_sliced;

  DeploymentDoc rcc = base("rcc", VnfKind::RCC, "edge");
  rcc.static_ip = ip(kRccIp);
  rcc.init_gates = {gate(kMmeIp, 36412)};
  out[rcc.name] = rcc;

  DeploymentDoc rru = base("rru", VnfKind::RRU, "edge");
  rru.init_gates = {gate(kRccIp, 50000)};
  out[rru.name] = rru;

  DeploymentDoc flexran = base("flexran", VnfKind::FlexRAN, "edge");
  flexran.static_ip = ip(kFlexranIp);
  out[flexran.name] = flexran;

  DeploymentDoc media = base("mediaserver", VnfKind::MediaServer, "edge");
  out[media.name] = media;

  DeploymentDoc media_cloud = base("mediaserver-cloud", VnfKind::MediaServer, "cloud");
  out[media_cloud.name] = media_cloud;

  for (const char* name : {"ue1", "ue2", "ue3"}) {
    DeploymentDoc ue = base(name, VnfKind::UE, "edge");
    out[ue.name] = ue;
  }

  return out;
}

namespace {

ProbeDoc download(const std::string& src, const std::string& dst,
                  double expected, double tolerance) {
  ProbeDoc probe;
  probe.kind = ProbeKind::download;
  probe.src = src;
  probe.dst = dst;
  probe.expected = expected;
  probe.tolerance = tolerance;
  return probe;
}

ProbeDoc external_rtt(const std::string& src, double expected) {
  ProbeDoc probe;
  probe.kind = ProbeKind::rtt;
  probe.src = src;
  probe.external_host = ip("8.8.8.8");
  probe.expected = expected;
  return probe;
}

// The placement runs: EPC core pinned to the cloud worker; the user plane
// and the media server sit either beyond the transport network (cc) or
// beside the base station (ec).
ScenarioDoc placement_scenario(const std::string& name, bool edge_user_plane,
                               double tn_bandwidth, double tn_delay,
                               double expected_mbps, double bitrate_tolerance,
                               double expected_rtt) {
  ScenarioDoc doc;
  doc.name = name;
  doc.calibration_profile = "table1";
  for (const char* dep : {"cassandra", "hss", "mme", "spgwc"})
    doc.deployments.emplace_back(std::string(dep));
  doc.deployments.emplace_back(std::string(edge_user_plane ? "spgwu-edge" : "spgwu"));
  doc.deployments.emplace_back(std::string("enb"));
  std::string server = edge_user_plane ? "mediaserver" : "mediaserver-cloud";
  doc.deployments.emplace_back(server);
  doc.deployments.emplace_back(std::string("ue1"));
  doc.bridge_overrides["TN"] = {tn_bandwidth, tn_delay, std::nullopt};
  doc.probes = {download("ue1", server, expected_mbps, bitrate_tolerance),
                external_rtt("ue1", expected_rtt)};
  return doc;
}

// The slicing runs: controller-enabled base station, two UEs in one slice
// each, media server at the edge.
ScenarioDoc slicing_scenario(const std::string& name, int rb1, double expected1,
                             int rb2, double expected2) {
  ScenarioDoc doc;
  doc.name = name;
  doc.calibration_profile = "table2";
  for (const char* dep : {"cassandra", "hss", "mme", "spgwc", "spgwu",
                          "flexran", "enb-sliced", "mediaserver", "ue1", "ue2"})
    doc.deployments.emplace_back(std::string(dep));
  doc.slices = {{1, rb1, {"ue1"}}, {2, rb2, {"ue2"}}};
  doc.probes = {download("ue1", "mediaserver", expected1, 0.05),
                download("ue2", "mediaserver", expected2, 0.05)};
  return doc;
}

}  // namespace

std::vector<std::string> builtin_scenario_names() {
  return {"table1-row1-cc", "table1-row2-cc", "table1-row1-ec",
          "table1-row2-ec", "table2-scenario1", "table2-scenario2",
          "table2-scenario3"};
}

ScenarioDoc builtin_scenario(const std::string& name) {
  if (name == "table1-row1-cc")
    return placement_scenario(name, false, 10, 0, 1.9, 0.05, 200);
  if (name == "table1-row2-cc")
    return placement_scenario(name, false, 5, 50, 0.52, 0.10, 340);
  if (name == "table1-row1-ec")
    return placement_scenario(name, true, 10, 0, 1.9, 0.05, 200);
  if (name == "table1-row2-ec")
    return placement_scenario(name, true, 5, 50, 1.9, 0.05, 340);
  if (name == "table2-scenario1") return slicing_scenario(name, 5, 1.05, 20, 2.85);
  if (name == "table2-scenario2") return slicing_scenario(name, 10, 1.40, 15, 1.95);
  if (name == "table2-scenario3") return slicing_scenario(name, 15, 3.00, 10, 0.50);
  raise(Errc::schema, "no built-in scenario named \"" + name + "\"");
}

}  // namespace cn2f
