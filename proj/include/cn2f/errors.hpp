#pragma once

#include <stdexcept>
#include <string>

namespace cn2f {

// Error codes used across the simulator. Each operation documents which
// subset it can raise.
enum class Errc {
  past_time,
  syntax,
  schema,
  no_matching_node,
  duplicate_static_ip,
  pool_exhausted,
  out_of_range,
  unknown_pod,
  no_bearer,
  unreachable,
  invalid_size,
  attach_rejected,
  exceeds_pool,
  unknown_slice,
  unknown_ue,
  insufficient_rows,
  deployment_stuck,
  probe_failed,
  unknown_profile,
  io,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, std::string message)
      : std::runtime_error(std::move(message)), code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace cn2f
