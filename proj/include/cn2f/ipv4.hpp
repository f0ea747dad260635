#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace cn2f {

// Dotted-quad addresses stored host-order so arithmetic and comparison
// behave naturally.
struct Ipv4 {
  uint32_t value = 0;

  friend bool operator==(Ipv4 a, Ipv4 b) { return a.value == b.value; }
  friend bool operator!=(Ipv4 a, Ipv4 b) { return a.value != b.value; }
  friend bool operator<(Ipv4 a, Ipv4 b) { return a.value < b.value; }
};

std::optional<Ipv4> parse_ipv4(const std::string& text);
std::string format_ipv4(Ipv4 addr);

struct Cidr {
  Ipv4 base;       // network address, low bits zeroed
  int prefix = 0;  // 0..32

  bool contains(Ipv4 addr) const;
  // First and last assignable host address. Excludes the network and
  // broadcast addresses for prefixes shorter than /31.
  Ipv4 first_host() const;
  Ipv4 last_host() const;
  uint64_t host_count() const;
};

std::optional<Cidr> parse_cidr(const std::string& text);
std::string format_cidr(const Cidr& cidr);

}  // namespace cn2f
