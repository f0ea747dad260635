#include "doctest.h"

#include <string>
#include <vector>

#include "cn2f/engine.hpp"
#include "cn2f/ipv4.hpp"

using cn2f::sim::Engine;
using cn2f::sim::EventId;
using cn2f::sim::EventKind;
using cn2f::sim::TimeMs;

TEST_CASE("event ids start at 1 and increase") {
  Engine eng;
  EventId a = eng.schedule(5, EventKind::generic, "a", [] {});
  EventId b = eng.schedule(5, EventKind::generic, "b", [] {});
  CHECK(a == 1);
  CHECK(b == 2);
}

TEST_CASE("same-timestamp events fire in scheduling order") {
  Engine eng;
  std::vector<std::string> order;
  eng.schedule(10, EventKind::generic, "x", [&] { order.push_back("x"); });
  eng.schedule(10, EventKind::generic, "y", [&] { order.push_back("y"); });
  eng.schedule(10, EventKind::generic, "z", [&] { order.push_back("z"); });
  eng.run_until(10);
  CHECK(order == std::vector<std::string>{"x", "y", "z"});
}

TEST_CASE("scheduling in the past is rejected") {
  Engine eng;
  eng.run_until(100);
  CHECK_THROWS_AS(eng.schedule(99, EventKind::generic, "", [] {}),
                  cn2f::Error);
  try {
    eng.schedule(99, EventKind::generic, "", [] {});
  } catch (const cn2f::Error& e) {
    CHECK(e.code() == cn2f::Errc::past_time);
  }
  // Scheduling exactly at the current time is fine.
  CHECK_NOTHROW(eng.schedule(100, EventKind::generic, "", [] {}));
}

TEST_CASE("run_until on an empty queue still advances the clock") {
  Engine eng;
  size_t fired = eng.run_until(1000);
  CHECK(fired == 0);
  CHECK(eng.now() == 1000);
}

TEST_CASE("run_until fires only events at or before the horizon") {
  Engine eng;
  int count = 0;
  eng.schedule(10, EventKind::generic, "", [&] { ++count; });
  eng.schedule(20, EventKind::generic, "", [&] { ++count; });
  eng.schedule(30, EventKind::generic, "", [&] { ++count; });
  size_t fired = eng.run_until(20);
  CHECK(fired == 2);
  CHECK(count == 2);
  CHECK(eng.now() == 20);
  CHECK(eng.pending_count() == 1);
}

TEST_CASE("cancel removes a pending event exactly once") {
  Engine eng;
  int count = 0;
  EventId id = eng.schedule(50, EventKind::generic, "", [&] { ++count; });
  CHECK(eng.cancel(id));
  CHECK_FALSE(eng.cancel(id));
  eng.run_until(100);
  CHECK(count == 0);

  EventId fired_id = eng.schedule(200, EventKind::generic, "", [&] { ++count; });
  eng.run_until(200);
  CHECK(count == 1);
  CHECK_FALSE(eng.cancel(fired_id));
}

TEST_CASE("callbacks may schedule events at the current timestamp") {
  Engine eng;
  std::vector<int> order;
  eng.schedule(10, EventKind::generic, "", [&] {
    order.push_back(1);
    eng.schedule(10, EventKind::generic, "", [&] { order.push_back(3); });
  });
  eng.schedule(10, EventKind::generic, "", [&] { order.push_back(2); });
  size_t fired = eng.run_until(10);
  CHECK(fired == 3);
  CHECK(order == std::vector<int>{1, 2, 3});
}

TEST_CASE("replay with the same seed is identical") {
  auto run_once = [](uint64_t seed) {
    Engine eng(seed);
    auto& rng = eng.rng();
    // Schedule a churn of events at random times; some callbacks add more.
    for (int i = 0; i < 1000; ++i) {
      TimeMs at = static_cast<TimeMs>(rng.next_in(0, 5000));
      eng.schedule(at, EventKind::generic, "e" + std::to_string(i), [&eng, at] {
        auto& r = eng.rng();
        if (r.next_in(0, 3) == 0) {
          eng.schedule(at + static_cast<TimeMs>(r.next_in(1, 50)),
                       EventKind::generic, "child", [] {});
        }
      });
    }
    eng.run_all();
    std::string trace;
    for (const auto& rec : eng.fired_log()) {
      trace += std::to_string(rec.at) + ":" + std::to_string(rec.id) + ":" +
               rec.tag + "\n";
    }
    return trace;
  };
  CHECK(run_once(42) == run_once(42));
  CHECK(run_once(42) != run_once(43));
}

TEST_CASE("rng draw counter tracks every draw") {
  cn2f::sim::RngStream rng(7);
  CHECK(rng.draw_count() == 0);
  rng.next_u64();
  rng.next_double();
  CHECK(rng.draw_count() == 2);
  // next_in may reject and redraw, so the counter only grows.
  rng.next_in(0, 2);
  CHECK(rng.draw_count() >= 3);
}

TEST_CASE("rng bounded draws stay in range and hit all values") {
  cn2f::sim::RngStream rng(99);
  bool seen[5] = {};
  for (int i = 0; i < 200; ++i) {
    uint64_t v = rng.next_in(2, 6);
    REQUIRE(v >= 2);
    REQUIRE(v <= 6);
    seen[v - 2] = true;
  }
  for (bool s : seen) CHECK(s);
}

TEST_CASE("ipv4 parse and format round-trip") {
  auto addr = cn2f::parse_ipv4("10.233.0.130");
  REQUIRE(addr.has_value());
  CHECK(cn2f::format_ipv4(*addr) == "10.233.0.130");
  CHECK_FALSE(cn2f::parse_ipv4("10.233.0").has_value());
  CHECK_FALSE(cn2f::parse_ipv4("10.233.0.256").has_value());
  CHECK_FALSE(cn2f::parse_ipv4("10.233.0.01").has_value());
  CHECK_FALSE(cn2f::parse_ipv4("10.233.0.130 ").has_value());
}

TEST_CASE("cidr membership and host range") {
  auto cidr = cn2f::parse_cidr("10.233.0.0/24");
  REQUIRE(cidr.has_value());
  CHECK(cidr->contains(*cn2f::parse_ipv4("10.233.0.1")));
  CHECK(cidr->contains(*cn2f::parse_ipv4("10.233.0.254")));
  CHECK_FALSE(cidr->contains(*cn2f::parse_ipv4("10.233.1.1")));
  CHECK(cn2f::format_ipv4(cidr->first_host()) == "10.233.0.1");
  CHECK(cn2f::format_ipv4(cidr->last_host()) == "10.233.0.254");
  CHECK(cidr->host_count() == 254);

  // Non-zero host bits in the base are malformed.
  CHECK_FALSE(cn2f::parse_cidr("10.233.0.1/24").has_value());
  CHECK_FALSE(cn2f::parse_cidr("10.233.0.0/33").has_value());

  auto tiny = cn2f::parse_cidr("192.168.5.8/30");
  REQUIRE(tiny.has_value());
  CHECK(tiny->host_count() == 2);
  CHECK(cn2f::format_ipv4(tiny->first_host()) == "192.168.5.9");
  CHECK(cn2f::format_ipv4(tiny->last_host()) == "192.168.5.10");
}
