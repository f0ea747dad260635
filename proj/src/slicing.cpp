#include "cn2f/slicing.hpp"

#include <algorithm>

#include "json.hpp"

namespace cn2f::slicing {

using nlohmann::json;

SliceTable::SliceTable(RbPool pool, const std::vector<SliceDoc>& slices)
    : pool_(pool) {
  int total = 0;
  for (const SliceDoc& slice : slices) {
    SliceDoc stored = slice;
    std::sort(stored.ue_names.begin(), stored.ue_names.end());
    total += stored.rb;
    slices_[stored.slice_id] = std::move(stored);
  }
  if (total > pool_.total)
    raise(Errc::exceeds_pool, "slice quotas sum to " + std::to_string(total) +
                                  " over a pool of " + std::to_string(pool_.total));
}

int SliceTable::total_rb() const {
  int total = 0;
  for (const auto& [id, slice] : slices_) total += slice.rb;
  return total;
}

std::optional<int> SliceTable::slice_of(const std::string& ue) const {
  for (const auto& [id, slice] : slices_) {
    if (std::find(slice.ue_names.begin(), slice.ue_names.end(), ue) !=
        slice.ue_names.end())
      return id;
  }
  return std::nullopt;
}

void SliceTable::set_quota(int slice_id, int rb) {
  auto it = slices_.find(slice_id);
  if (it == slices_.end())
    raise(Errc::unknown_slice, "slice " + std::to_string(slice_id) + " not configured");
  int total = total_rb() - it->second.rb + rb;
  if (total > pool_.total)
    raise(Errc::exceeds_pool, "quota change brings the total to " +
                                  std::to_string(total) + " over a pool of " +
                                  std::to_string(pool_.total));
  it->second.rb = rb;
}

void SliceTable::move_ue(const std::string& ue, int slice_id) {
  auto it = slices_.find(slice_id);
  if (it == slices_.end())
    raise(Errc::unknown_slice, "slice " + std::to_string(slice_id) + " not configured");
  for (auto& [id, slice] : slices_) {
    auto pos = std::find(slice.ue_names.begin(), slice.ue_names.end(), ue);
    if (pos != slice.ue_names.end()) slice.ue_names.erase(pos);
  }
  auto& names = it->second.ue_names;
  names.insert(std::upper_bound(names.begin(), names.end(), ue), ue);
}

double slice_rate_cap(const SliceTable& table, const std::string& ue,
                      double efficiency_mbps_per_rb) {
  auto slice_id = table.slice_of(ue);
  if (!slice_id) raise(Errc::unknown_ue, ue + " belongs to no slice");
  return table.slices().at(*slice_id).rb * efficiency_mbps_per_rb;
}

ControlSession::ControlSession(SliceTable& live,
                               std::function<bool()> controller_ready,
                               std::function<bool(const std::string&)> known_ue)
    : live_(live),
      staged_(live),
      controller_ready_(std::move(controller_ready)),
      known_ue_(std::move(known_ue)) {}

namespace {

std::string error_line(const char* code) {
  json out;
  out["ok"] = false;
  out["error"] = code;
  return out.dump();
}

const char* code_for(Errc code) {
  switch (code) {
    case Errc::exceeds_pool: return "exceeds_pool";
    case Errc::unknown_slice: return "unknown_slice";
    case Errc::unknown_ue: return "unknown_ue";
    default: return "parse";
  }
}

}  // namespace

std::string ControlSession::handle(const std::string& line) {
  json msg = json::parse(line, nullptr, false);
  if (msg.is_discarded() || !msg.is_object()) return error_line("parse");
  if (!controller_ready_()) return error_line("rejected");
  if (!msg.contains("cmd") || !msg["cmd"].is_string()) return error_line("parse");
  std::string cmd = msg["cmd"].get<std::string>();

  if (cmd == "set_slice") {
    if (!msg.contains("slice") || !msg["slice"].is_number_integer() ||
        !msg.contains("rb") || !msg["rb"].is_number_integer())
      return error_line("parse");
    int slice = msg["slice"].get<int>();
    int rb = msg["rb"].get<int>();
    if (rb < 0) return error_line("parse");
    try {
      staged_.set_quota(slice, rb);
    } catch (const Error& e) {
      return error_line(code_for(e.code()));
    }
    dirty_ = true;
    json out;
    out["ok"] = true;
    out["slice"] = slice;
    out["rb"] = rb;
    return out.dump();
  }

  if (cmd == "get_slices") {
    json out;
    out["ok"] = true;
    out["slices"] = json::array();
    for (const auto& [id, slice] : staged_.slices()) {
      json row;
      row["slice"] = id;
      row["rb"] = slice.rb;
      row["ues"] = slice.ue_names;
      out["slices"].push_back(row);
    }
    return out.dump();
  }

  if (cmd == "attach_ue") {
    if (!msg.contains("ue") || !msg["ue"].is_string() ||
        !msg.contains("slice") || !msg["slice"].is_number_integer())
      return error_line("parse");
    std::string ue = msg["ue"].get<std::string>();
    int slice = msg["slice"].get<int>();
    if (!known_ue_(ue)) return error_line("unknown_ue");
    try {
      staged_.move_ue(ue, slice);
    } catch (const Error& e) {
      return error_line(code_for(e.code()));
    }
    dirty_ = true;
    json out;
    out["ok"] = true;
    out["slice"] = slice;
    out["ue"] = ue;
    return out.dump();
  }

  return error_line("unknown_cmd");
}

std::vector<std::string> ControlSession::apply_staged() {
  std::vector<std::string> tokens;
  for (const auto& [id, slice] : staged_.slices()) {
    const SliceDoc& before = live_.slices().at(id);
    if (before.rb != slice.rb)
      tokens.push_back("SliceSet:" + std::to_string(id) + ":" +
                       std::to_string(slice.rb));
    for (const std::string& ue : slice.ue_names) {
      auto pos = std::find(before.ue_names.begin(), before.ue_names.end(), ue);
      if (pos == before.ue_names.end())
        tokens.push_back("SliceUe:" + ue + ":" + std::to_string(id));
    }
  }
  live_ = staged_;
  dirty_ = false;
  return tokens;
}

}  // namespace cn2f::slicing
