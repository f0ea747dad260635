#include "cn2f/engine.hpp"

#include <limits>

namespace cn2f::sim {

const char* event_kind_name(EventKind kind) {
  switch (kind) {
    case EventKind::lifecycle_step: return "lifecycle_step";
    case EventKind::probe_retry: return "probe_retry";
    case EventKind::heartbeat: return "heartbeat";
    case EventKind::probe_measurement: return "probe_measurement";
    case EventKind::control_message: return "control_message";
    case EventKind::flow_completion: return "flow_completion";
    case EventKind::generic: return "generic";
  }
  return "?";
}

uint64_t RngStream::next_in(uint64_t lo, uint64_t hi) {
  uint64_t span = hi - lo;  // inclusive range, span+1 values
  if (span == std::numeric_limits<uint64_t>::max()) return next_u64();
  uint64_t bound = span + 1;
  uint64_t limit = std::numeric_limits<uint64_t>::max() -
                   (std::numeric_limits<uint64_t>::max() % bound + 1) % bound;
  for (;;) {
    uint64_t raw = next_u64();
    if (raw <= limit) return lo + raw % bound;
  }
}

EventId Engine::schedule(TimeMs at, EventKind kind, std::string tag,
                         std::function<void()> fn) {
  if (at < now_) {
    raise(Errc::past_time, "schedule at t=" + std::to_string(at) +
                               " before clock t=" + std::to_string(now_));
  }
  EventId id = next_id_++;
  queue_.emplace(std::make_pair(at, id),
                 Pending{kind, std::move(tag), std::move(fn)});
  return id;
}

bool Engine::cancel(EventId id) {
  for (auto it = queue_.begin(); it != queue_.end(); ++it) {
    if (it->first.second == id) {
      queue_.erase(it);
      return true;
    }
  }
  return false;
}

size_t Engine::drain(TimeMs horizon, bool bounded) {
  size_t fired = 0;
  while (!queue_.empty()) {
    auto it = queue_.begin();
    auto [at, id] = it->first;
    if (bounded && at > horizon) break;
    // Move the record out before firing: the callback may mutate the queue.
    Pending ev = std::move(it->second);
    queue_.erase(it);
    now_ = at;
    fired_log_.push_back({at, id, ev.kind, ev.tag});
    ev.fn();
    ++fired;
  }
  return fired;
}

size_t Engine::run_until(TimeMs horizon) {
  if (horizon < now_) {
    raise(Errc::past_time, "run_until t=" + std::to_string(horizon) +
                               " before clock t=" + std::to_string(now_));
  }
  size_t fired = drain(horizon, true);
  now_ = horizon;
  return fired;
}

size_t Engine::run_all() {
  return drain(0, false);
}

}  // namespace cn2f::sim
