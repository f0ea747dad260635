#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cn2f/errors.hpp"
#include "cn2f/manifest.hpp"

namespace cn2f::slicing {

struct RbPool {
  int total = 25;
};

// Per-slice resource-block quotas over a fixed pool, plus UE membership.
// Pure bookkeeping; when changes take effect is the caller's concern.
class SliceTable {
 public:
  SliceTable() = default;
  // Raises Errc::exceeds_pool when the config oversubscribes the pool.
  SliceTable(RbPool pool, const std::vector<SliceDoc>& slices);

  const RbPool& pool() const { return pool_; }
  const std::map<int, SliceDoc>& slices() const { return slices_; }
  int total_rb() const;
  std::optional<int> slice_of(const std::string& ue) const;

  // Replaces one quota. Raises Errc::exceeds_pool when the new total would
  // exceed the pool and Errc::unknown_slice for an unconfigured id; a
  // raised call leaves the table untouched.
  void set_quota(int slice_id, int rb);

  // Moves a UE into a slice, out of its previous one if any. Raises
  // Errc::unknown_slice.
  void move_ue(const std::string& ue, int slice_id);

 private:
  RbPool pool_;
  std::map<int, SliceDoc> slices_;
};

// Rate cap a slice quota imposes on one of its UEs. Raises Errc::unknown_ue
// for a UE that belongs to no slice.
double slice_rate_cap(const SliceTable& table, const std::string& ue,
                      double efficiency_mbps_per_rb);

// Runtime reconfiguration endpoint: one JSON object per line in, one
// response line out. Accepted mutations collect in a staged copy so a whole
// batch can be applied between simulation steps; validation runs against
// the staged view, which keeps every accepted sequence within the pool.
class ControlSession {
 public:
  ControlSession(SliceTable& live, std::function<bool()> controller_ready,
                 std::function<bool(const std::string&)> known_ue);

  // Commands: set_slice {slice, rb}, get_slices, attach_ue {ue, slice}.
  // Error responses: {"ok":false,"error":"parse"|"rejected"|"unknown_cmd"|
  // "exceeds_pool"|"unknown_slice"|"unknown_ue"}. A rejected command leaves
  // the staged view bit-identical. An "at_ms" key is ignored so script
  // lines can be passed through whole.
  std::string handle(const std::string& line);

  bool has_staged() const { return dirty_; }

  // Writes staged changes into the live table; returns one token per
  // change for the event log ("SliceSet:<id>:<rb>", "SliceUe:<ue>:<id>").
  std::vector<std::string> apply_staged();

  // Effective view: live state plus anything staged.
  const SliceTable& staged() const { return staged_; }

 private:
  SliceTable& live_;
  SliceTable staged_;
  bool dirty_ = false;
  std::function<bool()> controller_ready_;
  std::function<bool(const std::string&)> known_ue_;
};

}  // namespace cn2f::slicing
