#pragma once

#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cn2f/manifest.hpp"

namespace cn2f::net {

inline constexpr double kUnbounded = std::numeric_limits<double>::infinity();

// Calibration knobs for the transport model. base_rtt covers everything the
// bridges don't (radio, stack); delay_multiplier scales configured one-way
// bridge delays into observed round-trip contribution.
struct RateParams {
  double base_rtt_ms = 200.0;
  double delay_multiplier = 2.0;
  double access_cap_mbps = 1.9;
  double mss_bytes = 1460.0;
  double mathis_c = 1.22;
  std::optional<double> window_bytes;
};

struct Path {
  std::vector<std::string> hops;     // display only, in traversal order
  std::vector<std::string> crosses;  // bridge names, sorted, deduplicated
  // One "radio/<enb deployment>" entry per UE endpoint on the path.
  std::vector<std::string> radio_links;
};

struct BearerInfo {
  std::string ue_name;
  std::string enb_deployment;
  std::string enb_node;
  std::string spgwu_node;
};

// Bridge names on the unique shortest node-to-bridge-to-node walk. Ties
// between equal-length walks break toward lexicographically smaller bridge
// sequences. Raises Errc::unreachable when no walk exists.
std::vector<std::string> bridges_between(const TopologyDoc& topology,
                                         const std::string& node_a,
                                         const std::string& node_b);

// Path of a probe flow. src/dst are deployment names, except that a dst
// parsing as a dotted quad is an external host reached beyond the bridge
// named "TN". UE endpoints route radio -> serving eNB -> bearer tunnel.
// Raises Errc::no_bearer for a UE without one, Errc::unreachable otherwise.
Path compute_path(const TopologyDoc& topology, const std::string& src,
                  const std::string& dst,
                  const std::map<std::string, std::string>& placements,
                  const std::map<std::string, BearerInfo>& bearers,
                  const std::set<std::string>& ue_names);

// rtt = base_rtt + k * sum of one-way delays of crossed bridges.
double rtt_ms(const std::vector<std::string>& crosses, const RateParams& params,
              const std::map<std::string, BridgeDoc>& bridge_settings);

// Independent loss events per crossed bridge.
double path_loss(const std::vector<std::string>& crosses,
                 const std::map<std::string, double>& bridge_loss);

double mathis_cap_mbps(const RateParams& params, double rtt_ms, double loss);

// min(base_cap, window term, Mathis term); window skipped when unset, Mathis
// skipped at zero loss. base_cap is the access or slice cap, kUnbounded for
// flows that have neither.
double flow_cap_mbps(const RateParams& params, double base_cap, double rtt_ms,
                     double loss);

struct FlowInput {
  std::string id;
  double cap = kUnbounded;
  std::vector<std::string> links;  // capacity-constrained resources crossed
};

// Progressive-filling max-min fairness. Flows hitting their cap freeze
// there; link-limited flows freeze when their bottleneck saturates. A flow
// with no cap and no links gets kUnbounded.
std::map<std::string, double> allocate_rates(
    const std::vector<FlowInput>& flows,
    const std::map<std::string, double>& link_capacity);

enum class SplitOption { monolithic, if5, if4p5 };

std::optional<SplitOption> parse_split_option(const std::string& text);
const char* split_option_name(SplitOption opt);

// Empty result means the bridge can carry the split's fronthaul; otherwise
// a human-readable violation. IF4p5 needs strictly more than 1000 Mb/s,
// IF5 strictly more than 500.
std::optional<std::string> check_fronthaul(SplitOption split,
                                           const BridgeDoc& fh_bridge);

}  // namespace cn2f::net
