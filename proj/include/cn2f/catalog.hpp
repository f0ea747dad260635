#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cn2f {

enum class VnfKind {
  Cassandra,
  HSS,
  MME,
  SPGWC,
  SPGWU,
  ENB,
  RCC,
  RRU,
  FlexRAN,
  MediaServer,
  UE,
};

inline constexpr VnfKind kAllVnfKinds[] = {
    VnfKind::Cassandra, VnfKind::HSS,     VnfKind::MME,
    VnfKind::SPGWC,     VnfKind::SPGWU,   VnfKind::ENB,
    VnfKind::RCC,       VnfKind::RRU,     VnfKind::FlexRAN,
    VnfKind::MediaServer, VnfKind::UE,
};

// A startup dependency: the depending VNF blocks in its init phase until a
// ready pod answers on target kind's port.
struct DependencyEdge {
  VnfKind target;
  uint16_t port;

  friend bool operator==(const DependencyEdge&, const DependencyEdge&) = default;
};

struct CatalogEntry {
  VnfKind kind;
  std::string token;    // manifest spelling, lowercase
  std::string display;  // human-facing name used in reports
  std::vector<uint16_t> listen_ports;
};

const CatalogEntry& catalog_entry(VnfKind kind);
std::optional<VnfKind> parse_vnf_kind(const std::string& token);

// Edges depend on the RAN controller wiring: with a FlexRAN controller in
// play, base stations also wait for it.
std::vector<DependencyEdge> dependency_edges(VnfKind kind, bool flexran_enabled);

// Tab-separated dump of the whole catalog, one kind per row.
std::string catalog_tsv();

}  // namespace cn2f
