#include "cn2f/netmodel.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <deque>

namespace cn2f::net {

namespace {

std::map<std::string, std::vector<std::string>> adjacency(const TopologyDoc& topo) {
  std::map<std::string, std::vector<std::string>> adj;
  for (const auto& link : topo.links) {
    adj[link.endpoint_a].push_back(link.endpoint_b);
    adj[link.endpoint_b].push_back(link.endpoint_a);
  }
  for (auto& [name, neighbors] : adj) {
    (void)name;
    std::sort(neighbors.begin(), neighbors.end());
  }
  return adj;
}

// BFS between any two vertices (nodes or bridges). Equal-length walks break
// ties by picking the lexicographically smallest predecessor at every hop,
// which makes the result independent of link declaration order.
std::vector<std::string> walk_between(const TopologyDoc& topo,
                                      const std::string& from,
                                      const std::string& to) {
  if (from == to) return {from};
  auto adj = adjacency(topo);
  std::map<std::string, int> dist;
  std::map<std::string, std::string> parent;
  std::deque<std::string> frontier{from};
  dist[from] = 0;
  while (!frontier.empty()) {
    std::string v = frontier.front();
    frontier.pop_front();
    for (const auto& next : adj[v]) {
      auto it = dist.find(next);
      if (it == dist.end()) {
        dist[next] = dist[v] + 1;
        parent[next] = v;
        frontier.push_back(next);
      } else if (it->second == dist[v] + 1 && v < parent[next]) {
        parent[next] = v;
      }
    }
  }
  if (!dist.count(to)) {
    raise(Errc::unreachable, "no path between " + from + " and " + to);
  }
  std::vector<std::string> walk;
  for (std::string v = to; v != from; v = parent[v]) walk.push_back(v);
  walk.push_back(from);
  std::reverse(walk.begin(), walk.end());
  return walk;
}

void append_walk(Path& path, const TopologyDoc& topo,
                 const std::vector<std::string>& walk) {
  for (const auto& hop : walk) {
    if (!path.hops.empty() && path.hops.back() == hop) continue;
    path.hops.push_back(hop);
    if (topo.find_bridge(hop)) path.crosses.push_back(hop);
  }
}

struct EndpointLeg {
  std::string node;        // where the endpoint meets the wired topology
  std::string radio_link;  // non-empty for UE endpoints
  std::string tunnel_from; // eNB node for UEs: the bearer runs from here
};

EndpointLeg resolve_endpoint(const std::string& name,
                             const std::map<std::string, std::string>& placements,
                             const std::map<std::string, BearerInfo>& bearers,
                             const std::set<std::string>& ue_names) {
  if (auto it = bearers.find(name); it != bearers.end()) {
    return {it->second.spgwu_node, "radio/" + it->second.enb_deployment,
            it->second.enb_node};
  }
  if (ue_names.count(name)) {
    raise(Errc::no_bearer, "UE \"" + name + "\" has no bearer");
  }
  if (auto it = placements.find(name); it != placements.end()) {
    return {it->second, "", ""};
  }
  raise(Errc::unreachable, "\"" + name + "\" is neither placed nor attached");
}

}  // namespace

std::vector<std::string> bridges_between(const TopologyDoc& topology,
                                         const std::string& node_a,
                                         const std::string& node_b) {
  std::vector<std::string> out;
  for (const auto& hop : walk_between(topology, node_a, node_b)) {
    if (topology.find_bridge(hop)) out.push_back(hop);
  }
  return out;
}

Path compute_path(const TopologyDoc& topology, const std::string& src,
                  const std::string& dst,
                  const std::map<std::string, std::string>& placements,
                  const std::map<std::string, BearerInfo>& bearers,
                  const std::set<std::string>& ue_names) {
  Path path;
  bool dst_external = parse_ipv4(dst).has_value();

  EndpointLeg from = resolve_endpoint(src, placements, bearers, ue_names);
  path.hops.push_back(src);
  if (!from.radio_link.empty()) {
    path.radio_links.push_back(from.radio_link);
    path.hops.push_back(from.radio_link);
    // Tunnel from the serving base station to the user-plane anchor.
    append_walk(path, topology, walk_between(topology, from.tunnel_from, from.node));
  } else {
    path.hops.push_back(from.node);
  }

  if (dst_external) {
    // External hosts sit on the far side of the transport network.
    if (!topology.find_bridge("TN")) {
      raise(Errc::unreachable, "external host needs a bridge named TN");
    }
    append_walk(path, topology, walk_between(topology, from.node, "TN"));
    path.hops.push_back("external/" + dst);
  } else {
    EndpointLeg to = resolve_endpoint(dst, placements, bearers, ue_names);
    append_walk(path, topology, walk_between(topology, from.node, to.node));
    if (!to.radio_link.empty()) {
      append_walk(path, topology, walk_between(topology, to.node, to.tunnel_from));
      path.radio_links.push_back(to.radio_link);
      path.hops.push_back(to.radio_link);
    }
    path.hops.push_back(dst);
  }

  std::sort(path.crosses.begin(), path.crosses.end());
  path.crosses.erase(std::unique(path.crosses.begin(), path.crosses.end()),
                     path.crosses.end());
  return path;
}

double rtt_ms(const std::vector<std::string>& crosses, const RateParams& params,
              const std::map<std::string, BridgeDoc>& bridge_settings) {
  double delay_sum = 0;
  for (const auto& name : crosses) {
    auto it = bridge_settings.find(name);
    if (it == bridge_settings.end()) {
      raise(Errc::unreachable, "no settings for crossed bridge " + name);
    }
    delay_sum += it->second.delay;
  }
  return params.base_rtt_ms + params.delay_multiplier * delay_sum;
}

double path_loss(const std::vector<std::string>& crosses,
                 const std::map<std::string, double>& bridge_loss) {
  double survive = 1.0;
  for (const auto& name : crosses) {
    auto it = bridge_loss.find(name);
    if (it != bridge_loss.end()) survive *= 1.0 - it->second;
  }
  return 1.0 - survive;
}

double mathis_cap_mbps(const RateParams& params, double rtt_ms, double loss) {
  double rtt_s = rtt_ms / 1000.0;
  return params.mathis_c * (params.mss_bytes * 8.0) /
         (rtt_s * std::sqrt(loss)) / 1e6;
}

double flow_cap_mbps(const RateParams& params, double base_cap, double rtt_ms,
                     double loss) {
  double cap = base_cap;
  if (params.window_bytes) {
    cap = std::min(cap, (*params.window_bytes * 8.0) / (rtt_ms / 1000.0) / 1e6);
  }
  if (loss > 0) {
    cap = std::min(cap, mathis_cap_mbps(params, rtt_ms, loss));
  }
  return cap;
}

std::map<std::string, double> allocate_rates(
    const std::vector<FlowInput>& flows,
    const std::map<std::string, double>& link_capacity) {
  constexpr double kEps = 1e-12;
  std::map<std::string, double> rate;
  std::map<std::string, double> remaining = link_capacity;
  std::vector<double> r(flows.size(), 0.0);
  std::vector<bool> active(flows.size(), true);

  for (const auto& flow : flows) {
    for (const auto& link : flow.links) {
      if (!link_capacity.count(link)) {
        raise(Errc::unreachable, "flow " + flow.id + " crosses unknown link " + link);
      }
    }
  }

  size_t active_count = flows.size();
  while (active_count > 0) {
    // Uniform increment until the first cap or link saturates.
    std::map<std::string, int> users;
    for (size_t i = 0; i < flows.size(); ++i) {
      if (!active[i]) continue;
      for (const auto& link : flows[i].links) ++users[link];
    }
    double delta = kUnbounded;
    for (const auto& [link, count] : users) {
      delta = std::min(delta, remaining[link] / count);
    }
    for (size_t i = 0; i < flows.size(); ++i) {
      if (active[i] && flows[i].cap != kUnbounded) {
        delta = std::min(delta, flows[i].cap - r[i]);
      }
    }
    if (delta == kUnbounded) {
      // No finite constraint left on the remaining flows.
      for (size_t i = 0; i < flows.size(); ++i) {
        if (active[i]) {
          r[i] = kUnbounded;
          active[i] = false;
        }
      }
      break;
    }
    for (size_t i = 0; i < flows.size(); ++i) {
      if (active[i]) r[i] += delta;
    }
    for (const auto& [link, count] : users) {
      remaining[link] -= delta * count;
    }
    size_t frozen = 0;
    for (size_t i = 0; i < flows.size(); ++i) {
      if (!active[i]) continue;
      bool at_cap = flows[i].cap != kUnbounded && r[i] >= flows[i].cap - kEps;
      bool saturated = false;
      for (const auto& link : flows[i].links) {
        if (remaining[link] <= kEps) saturated = true;
      }
      if (at_cap || saturated) {
        active[i] = false;
        ++frozen;
      }
    }
    active_count -= frozen;
    if (frozen == 0) {
      // Numerical stall; freeze everything at the current level.
      for (size_t i = 0; i < flows.size(); ++i) active[i] = false;
      active_count = 0;
    }
  }

  for (size_t i = 0; i < flows.size(); ++i) rate[flows[i].id] = r[i];
  return rate;
}

std::optional<SplitOption> parse_split_option(const std::string& text) {
  std::string lower;
  for (char c : text) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (lower == "monolithic") return SplitOption::monolithic;
  if (lower == "if5") return SplitOption::if5;
  if (lower == "if4p5") return SplitOption::if4p5;
  return std::nullopt;
}

const char* split_option_name(SplitOption opt) {
  switch (opt) {
    case SplitOption::monolithic: return "monolithic";
    case SplitOption::if5: return "IF5";
    case SplitOption::if4p5: return "IF4p5";
  }
  return "?";
}

std::optional<std::string> check_fronthaul(SplitOption split,
                                           const BridgeDoc& fh_bridge) {
  double floor = 0;
  switch (split) {
    case SplitOption::monolithic:
      return std::nullopt;
    case SplitOption::if5:
      floor = 500;
      break;
    case SplitOption::if4p5:
      floor = 1000;
      break;
  }
  if (fh_bridge.bandwidth > floor) return std::nullopt;
  return std::string(split_option_name(split)) + " fronthaul needs more than " +
         std::to_string(static_cast<int>(floor)) + " Mb/s; bridge \"" +
         fh_bridge.name + "\" provides " + std::to_string(fh_bridge.bandwidth);
}

}  // namespace cn2f::net
