#include "doctest.h"

#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "cn2f/catalog.hpp"

using cn2f::catalog_entry;
using cn2f::dependency_edges;
using cn2f::VnfKind;

TEST_CASE("kind tokens round-trip through the parser") {
  for (VnfKind kind : cn2f::kAllVnfKinds) {
    auto parsed = cn2f::parse_vnf_kind(catalog_entry(kind).token);
    REQUIRE(parsed.has_value());
    CHECK(*parsed == kind);
  }
  CHECK_FALSE(cn2f::parse_vnf_kind("pgw").has_value());
  CHECK_FALSE(cn2f::parse_vnf_kind("MME").has_value());
}

TEST_CASE("control-plane chain matches the EPC bring-up order") {
  CHECK(dependency_edges(VnfKind::Cassandra, false).empty());
  CHECK(dependency_edges(VnfKind::HSS, false) ==
        std::vector<cn2f::DependencyEdge>{{VnfKind::Cassandra, 9042}});
  CHECK(dependency_edges(VnfKind::MME, false) ==
        std::vector<cn2f::DependencyEdge>{{VnfKind::HSS, 3868}});
  CHECK(dependency_edges(VnfKind::SPGWC, false) ==
        std::vector<cn2f::DependencyEdge>{{VnfKind::MME, 3870}});
  CHECK(dependency_edges(VnfKind::SPGWU, false) ==
        std::vector<cn2f::DependencyEdge>{{VnfKind::SPGWC, 8805}});
}

TEST_CASE("base stations gain a FlexRAN edge only when enabled") {
  for (VnfKind bs : {VnfKind::ENB, VnfKind::RCC}) {
    auto plain = dependency_edges(bs, false);
    REQUIRE(plain.size() == 1);
    CHECK(plain[0] == cn2f::DependencyEdge{VnfKind::MME, 36412});
    auto with = dependency_edges(bs, true);
    REQUIRE(with.size() == 2);
    CHECK(with[1] == cn2f::DependencyEdge{VnfKind::FlexRAN, 2210});
  }
  // The controller itself never waits on the base stations.
  CHECK(dependency_edges(VnfKind::FlexRAN, true).empty());
}

TEST_CASE("every dependency edge targets a port its target listens on") {
  for (VnfKind kind : cn2f::kAllVnfKinds) {
    for (const auto& edge : dependency_edges(kind, true)) {
      const auto& ports = catalog_entry(edge.target).listen_ports;
      bool listed = std::find(ports.begin(), ports.end(), edge.port) !=
                    ports.end();
      CHECK_MESSAGE(listed, catalog_entry(kind).token, " -> ",
                    catalog_entry(edge.target).token, ":", edge.port);
    }
  }
}

TEST_CASE("dependency graph is acyclic with the expected topological order") {
  // Kahn's algorithm over the full graph (FlexRAN edges included).
  std::map<VnfKind, std::set<VnfKind>> deps;
  for (VnfKind kind : cn2f::kAllVnfKinds) {
    for (const auto& edge : dependency_edges(kind, true)) {
      deps[kind].insert(edge.target);
    }
  }
  std::vector<VnfKind> order;
  std::set<VnfKind> placed;
  bool progress = true;
  while (progress) {
    progress = false;
    for (VnfKind kind : cn2f::kAllVnfKinds) {
      if (placed.count(kind)) continue;
      bool ready = true;
      for (VnfKind d : deps[kind]) {
        if (!placed.count(d)) ready = false;
      }
      if (ready) {
        order.push_back(kind);
        placed.insert(kind);
        progress = true;
      }
    }
  }
  REQUIRE(order.size() == std::size(cn2f::kAllVnfKinds));

  auto pos = [&](VnfKind k) {
    return std::find(order.begin(), order.end(), k) - order.begin();
  };
  CHECK(pos(VnfKind::Cassandra) < pos(VnfKind::HSS));
  CHECK(pos(VnfKind::HSS) < pos(VnfKind::MME));
  CHECK(pos(VnfKind::MME) < pos(VnfKind::SPGWC));
  CHECK(pos(VnfKind::SPGWC) < pos(VnfKind::SPGWU));
  CHECK(pos(VnfKind::MME) < pos(VnfKind::ENB));
  CHECK(pos(VnfKind::RCC) < pos(VnfKind::RRU));
}

TEST_CASE("catalog dump lists every kind once") {
  std::string tsv = cn2f::catalog_tsv();
  CHECK(tsv.find("mme\tMME\t3870,5870,2123,36412\thss:3868\n") !=
        std::string::npos);
  CHECK(tsv.find("cassandra\tCassandra\t9042\t-\n") != std::string::npos);
  // Header plus one row per kind.
  size_t rows = std::count(tsv.begin(), tsv.end(), '\n');
  CHECK(rows == 1 + std::size(cn2f::kAllVnfKinds));
}
