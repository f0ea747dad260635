#include "cn2f/errors.hpp"

namespace cn2f {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::past_time: return "past_time";
    case Errc::syntax: return "syntax";
    case Errc::schema: return "schema";
    case Errc::no_matching_node: return "no_matching_node";
    case Errc::duplicate_static_ip: return "duplicate_static_ip";
    case Errc::pool_exhausted: return "pool_exhausted";
    case Errc::out_of_range: return "out_of_range";
    case Errc::unknown_pod: return "unknown_pod";
    case Errc::no_bearer: return "no_bearer";
    case Errc::unreachable: return "unreachable";
    case Errc::invalid_size: return "invalid_size";
    case Errc::attach_rejected: return "attach_rejected";
    case Errc::exceeds_pool: return "exceeds_pool";
    case Errc::unknown_slice: return "unknown_slice";
    case Errc::unknown_ue: return "unknown_ue";
    case Errc::insufficient_rows: return "insufficient_rows";
    case Errc::deployment_stuck: return "deployment_stuck";
    case Errc::probe_failed: return "probe_failed";
    case Errc::unknown_profile: return "unknown_profile";
    case Errc::io: return "io";
  }
  return "?";
}

}  // namespace cn2f
