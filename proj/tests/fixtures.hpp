#pragma once

// Hand-written reference documents shared across test suites. The cluster
// mirrors the four-machine layout the scenarios run on: one master, two
// edge workers behind the fronthaul bridge, one cloud worker reachable only
// through the transport network.

#include <string>

namespace fixtures {

inline const char* kReferenceTopology = R"({
  "nodes": [
    {"name": "master", "role": "master", "labels": {}},
    {"name": "worker1", "role": "worker", "labels": {"environment": "edge"}},
    {"name": "worker2", "role": "worker", "labels": {"environment": "edge"}},
    {"name": "worker3", "role": "worker", "labels": {"environment": "cloud"}}
  ],
  "bridges": [
    {"name": "FH", "bandwidth": 2500.0, "delay": 0.0, "loss": 0.0},
    {"name": "TN", "bandwidth": 1000.0, "delay": 0.0, "loss": 0.0}
  ],
  "links": [
    {"endpoint-a": "worker1", "endpoint-b": "FH"},
    {"endpoint-a": "worker2", "endpoint-b": "FH"},
    {"endpoint-a": "worker1", "endpoint-b": "TN"},
    {"endpoint-a": "worker2", "endpoint-b": "TN"},
    {"endpoint-a": "worker3", "endpoint-b": "TN"}
  ],
  "ip_pools": {"pod_cidr": "10.233.0.0/24", "ue_cidr": "172.16.0.0/24"}
})";

// Deployment of the mobility manager as the experiments configure it:
// pinned address, cloud placement, gate on the subscriber database frontend.
inline const char* kMmeDeployment = R"({
  "name": "mme",
  "vnf_kind": "mme",
  "node_selector": {"environment": "cloud"},
  "static_ip": "10.233.0.130",
  "ports": [3870, 5870, 2123, 36412],
  "env": {
    "TZ": "Europe/Paris",
    "REALM": "openairinterface.org",
    "HSS_HOSTNAME": "hss",
    "MME_FQDN": "mme.openairinterface.org"
  },
  "config_map": "mme-config",
  "init_gates": [
    {"target_ip": "10.233.0.219", "target_port": 3868, "retries": 100, "interval": 10}
  ],
  "command": "./start_mme.sh"
})";

}  // namespace fixtures
