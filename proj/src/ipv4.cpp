#include "cn2f/ipv4.hpp"

#include <charconv>

namespace cn2f {

std::optional<Ipv4> parse_ipv4(const std::string& text) {
  uint32_t value = 0;
  const char* p = text.data();
  const char* end = p + text.size();
  for (int octet = 0; octet < 4; ++octet) {
    if (octet > 0) {
      if (p == end || *p != '.') return std::nullopt;
      ++p;
    }
    if (p == end || *p < '0' || *p > '9') return std::nullopt;
    unsigned part = 0;
    auto [next, ec] = std::from_chars(p, end, part);
    if (ec != std::errc{} || part > 255) return std::nullopt;
    // Reject leading zeros ("01") to keep formatting round-trippable.
    if (next - p > 1 && *p == '0') return std::nullopt;
    value = (value << 8) | part;
    p = next;
  }
  if (p != end) return std::nullopt;
  return Ipv4{value};
}

std::string format_ipv4(Ipv4 addr) {
  std::string out;
  out.reserve(15);
  for (int shift = 24; shift >= 0; shift -= 8) {
    if (!out.empty()) out.push_back('.');
    out += std::to_string((addr.value >> shift) & 0xff);
  }
  return out;
}

static uint32_t prefix_mask(int prefix) {
  if (prefix == 0) return 0;
  return ~uint32_t{0} << (32 - prefix);
}

bool Cidr::contains(Ipv4 addr) const {
  return (addr.value & prefix_mask(prefix)) == base.value;
}

Ipv4 Cidr::first_host() const {
  if (prefix >= 31) return base;
  return Ipv4{base.value + 1};
}

Ipv4 Cidr::last_host() const {
  uint32_t top = base.value | ~prefix_mask(prefix);
  if (prefix >= 31) return Ipv4{top};
  return Ipv4{top - 1};
}

uint64_t Cidr::host_count() const {
  uint64_t total = uint64_t{1} << (32 - prefix);
  if (prefix >= 31) return total;
  return total - 2;
}

std::optional<Cidr> parse_cidr(const std::string& text) {
  auto slash = text.find('/');
  if (slash == std::string::npos) return std::nullopt;
  auto addr = parse_ipv4(text.substr(0, slash));
  if (!addr) return std::nullopt;
  const std::string tail = text.substr(slash + 1);
  if (tail.empty() || tail.size() > 2) return std::nullopt;
  int prefix = 0;
  auto [next, ec] =
      std::from_chars(tail.data(), tail.data() + tail.size(), prefix);
  if (ec != std::errc{} || next != tail.data() + tail.size()) return std::nullopt;
  if (prefix < 0 || prefix > 32) return std::nullopt;
  if (tail.size() > 1 && tail[0] == '0') return std::nullopt;
  if ((addr->value & ~prefix_mask(prefix)) != 0) return std::nullopt;
  return Cidr{*addr, prefix};
}

std::string format_cidr(const Cidr& cidr) {
  return format_ipv4(cidr.base) + "/" + std::to_string(cidr.prefix);
}

}  // namespace cn2f
