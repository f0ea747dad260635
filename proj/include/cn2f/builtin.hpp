#pragma once

#include <map>
#include <string>

#include "cn2f/manifest.hpp"

namespace cn2f {

// The four-machine reference cluster: master, two edge workers behind the
// fronthaul bridge, one cloud worker across the transport network.
TopologyDoc builtin_topology();

// Deployment documents for the stock stack: the EPC chain on the cloud
// worker with pinned addresses, radio and media pods at the edge, three
// UEs, and a controller-enabled base-station variant for sliced runs.
std::map<std::string, DeploymentDoc> builtin_deployments();

// Shipped scenarios: the four placement runs (cloud and edge user plane
// under two transport settings) and the three slicing runs. Expected
// values and tolerances ride along, so running them doubles as a
// regression check. builtin_scenario raises Errc::schema for an unknown
// name.
std::vector<std::string> builtin_scenario_names();
ScenarioDoc builtin_scenario(const std::string& name);

}  // namespace cn2f
