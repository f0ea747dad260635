#include "cn2f/catalog.hpp"

#include <array>

namespace cn2f {

namespace {

// Listen ports follow the 4G interface assignments: 9042 CQL, 3868 S6a
// diameter, 3870/5870 MME management, 2123 GTP-C, 36412 S1AP, 8805 PFCP,
// 2152 GTP-U, 2210 FlexRAN agent, 50000 fronthaul.
const std::array<CatalogEntry, 11> kEntries = {{
    {VnfKind::Cassandra, "cassandra", "Cassandra", {9042}},
    {VnfKind::HSS, "hss", "HSS", {3868}},
    {VnfKind::MME, "mme", "MME", {3870, 5870, 2123, 36412}},
    {VnfKind::SPGWC, "spgwc", "SPGW-C", {8805, 2123}},
    {VnfKind::SPGWU, "spgwu", "SPGW-U", {8805, 2152}},
    {VnfKind::ENB, "enb", "eNB", {2152, 36422}},
    {VnfKind::RCC, "rcc", "RCC", {2152, 50000}},
    {VnfKind::RRU, "rru", "RRU", {50001}},
    {VnfKind::FlexRAN, "flexran", "FlexRAN", {2210}},
    {VnfKind::MediaServer, "mediaserver", "MediaServer", {80}},
    {VnfKind::UE, "ue", "UE", {}},
}};

}  // namespace

const CatalogEntry& catalog_entry(VnfKind kind) {
  return kEntries[static_cast<size_t>(kind)];
}

std::optional<VnfKind> parse_vnf_kind(const std::string& token) {
  for (const auto& e : kEntries) {
    if (e.token == token) return e.kind;
  }
  return std::nullopt;
}

std::vector<DependencyEdge> dependency_edges(VnfKind kind,
                                             bool flexran_enabled) {
  switch (kind) {
    case VnfKind::HSS:
      return {{VnfKind::Cassandra, 9042}};
    case VnfKind::MME:
      return {{VnfKind::HSS, 3868}};
    case VnfKind::SPGWC:
      return {{VnfKind::MME, 3870}};
    case VnfKind::SPGWU:
      return {{VnfKind::SPGWC, 8805}};
    case VnfKind::ENB:
    case VnfKind::RCC: {
      std::vector<DependencyEdge> edges = {{VnfKind::MME, 36412}};
      if (flexran_enabled) edges.push_back({VnfKind::FlexRAN, 2210});
      return edges;
    }
    case VnfKind::RRU:
      return {{VnfKind::RCC, 50000}};
    case VnfKind::Cassandra:
    case VnfKind::FlexRAN:
    case VnfKind::MediaServer:
    case VnfKind::UE:
      return {};
  }
  return {};
}

std::string catalog_tsv() {
  std::string out = "kind\tdisplay\tlisten_ports\tdepends_on\n";
  for (const auto& e : kEntries) {
    out += e.token;
    out += '\t';
    out += e.display;
    out += '\t';
    bool first = true;
    for (uint16_t p : e.listen_ports) {
      if (!first) out += ',';
      out += std::to_string(p);
      first = false;
    }
    if (e.listen_ports.empty()) out += '-';
    out += '\t';
    first = true;
    for (const auto& edge : dependency_edges(e.kind, true)) {
      if (!first) out += ',';
      out += catalog_entry(edge.target).token;
      out += ':';
      out += std::to_string(edge.port);
      first = false;
    }
    if (dependency_edges(e.kind, true).empty()) out += '-';
    out += '\n';
  }
  return out;
}

}  // namespace cn2f
