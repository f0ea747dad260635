#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "cn2f/errors.hpp"

namespace cn2f::sim {

using TimeMs = int64_t;
using EventId = uint64_t;

enum class EventKind {
  lifecycle_step,
  probe_retry,
  heartbeat,
  probe_measurement,
  control_message,
  flow_completion,
  generic,
};

const char* event_kind_name(EventKind kind);

// Deterministic random stream. mt19937_64 raw output is specified by the
// standard; the distribution adapters in <random> are not, so the mappings
// here are hand-rolled to keep replays byte-identical across toolchains.
class RngStream {
 public:
  explicit RngStream(uint64_t seed) : gen_(seed) {}

  uint64_t next_u64() {
    ++draws_;
    return gen_();
  }

  // Uniform in [0, 1), 53-bit resolution.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [lo, hi], rejection-sampled so every value is
  // equally likely.
  uint64_t next_in(uint64_t lo, uint64_t hi);

  uint64_t draw_count() const { return draws_; }

 private:
  std::mt19937_64 gen_;
  uint64_t draws_ = 0;
};

struct FiredRecord {
  TimeMs at = 0;
  EventId id = 0;
  EventKind kind = EventKind::generic;
  std::string tag;
};

// Event queue with an integer-millisecond clock. Events at the same
// timestamp fire in scheduling order (ascending id). Callbacks may schedule
// or cancel further events while the queue is draining.
class Engine {
 public:
  explicit Engine(uint64_t seed = 0) : rng_(seed) {}

  TimeMs now() const { return now_; }

  // Raises Errc::past_time when `at` precedes the current clock.
  EventId schedule(TimeMs at, EventKind kind, std::string tag,
                   std::function<void()> fn);

  // True when the event was pending and is now removed. False for ids that
  // already fired, were already cancelled, or never existed.
  bool cancel(EventId id);

  // Fires every event with at <= horizon, then advances the clock to the
  // horizon even if nothing fired. Returns the number fired.
  size_t run_until(TimeMs horizon);

  // Drains the queue completely.
  size_t run_all();

  size_t pending_count() const { return queue_.size(); }
  RngStream& rng() { return rng_; }
  const std::vector<FiredRecord>& fired_log() const { return fired_log_; }

 private:
  struct Pending {
    EventKind kind;
    std::string tag;
    std::function<void()> fn;
  };

  size_t drain(TimeMs horizon, bool bounded);

  TimeMs now_ = 0;
  EventId next_id_ = 1;
  std::map<std::pair<TimeMs, EventId>, Pending> queue_;
  std::vector<FiredRecord> fired_log_;
  RngStream rng_;
};

}  // namespace cn2f::sim
