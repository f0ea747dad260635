#include "cn2f/profile.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "json.hpp"

namespace cn2f::profile {

using nlohmann::json;

namespace {

const char* kTable1Header =
    "bandwidth_mbps\tdelay_ms\tcc_bitrate_mbps\tcc_rtt_ms\tec_bitrate_mbps\tec_rtt_ms";
const char* kTable2Header = "scenario\trb\tue\tbitrate_mbps";

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  for (char c : line) {
    if (c == '\t') {
      out.push_back(field);
      field.clear();
    } else {
      field += c;
    }
  }
  out.push_back(field);
  return out;
}

std::vector<std::vector<std::string>> read_tsv(const std::string& text,
                                               const char* header,
                                               size_t columns) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != header)
    raise(Errc::schema, std::string("expected header \"") + header + "\"");
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto fields = split_line(line);
    if (fields.size() != columns)
      raise(Errc::schema, "row \"" + line + "\" has " +
                              std::to_string(fields.size()) + " fields, want " +
                              std::to_string(columns));
    rows.push_back(std::move(fields));
  }
  return rows;
}

double to_number(const std::string& field) {
  size_t used = 0;
  double value = 0;
  try {
    value = std::stod(field, &used);
  } catch (const std::exception&) {
    raise(Errc::schema, "\"" + field + "\" is not a number");
  }
  if (used != field.size())
    raise(Errc::schema, "\"" + field + "\" is not a number");
  return value;
}

int to_int(const std::string& field) {
  double value = to_number(field);
  int rounded = (int)std::lround(value);
  if (value != rounded)
    raise(Errc::schema, "\"" + field + "\" is not an integer");
  return rounded;
}

std::string trailing_digits(const std::string& name) {
  size_t end = name.size();
  size_t begin = end;
  while (begin > 0 && std::isdigit((unsigned char)name[begin - 1])) --begin;
  return name.substr(begin, end - begin);
}

}  // namespace

const char* embedded_table1_tsv() {
  return "bandwidth_mbps\tdelay_ms\tcc_bitrate_mbps\tcc_rtt_ms\tec_bitrate_mbps\tec_rtt_ms\n"
         "10\t0\t1.9\t200\t1.9\t200\n"
         "5\t50\t0.52\t340\t1.9\t340\n";
}

const char* embedded_table2_tsv() {
  return "scenario\trb\tue\tbitrate_mbps\n"
         "table2-scenario1\t5\tue1\t1.05\n"
         "table2-scenario1\t20\tue2\t2.85\n"
         "table2-scenario2\t10\tue1\t1.40\n"
         "table2-scenario2\t15\tue2\t1.95\n"
         "table2-scenario3\t15\tue1\t3.00\n"
         "table2-scenario3\t10\tue2\t0.50\n";
}

std::vector<Table1Row> parse_table1_tsv(const std::string& text) {
  std::vector<Table1Row> rows;
  for (const auto& fields : read_tsv(text, kTable1Header, 6)) {
    Table1Row row;
    row.bandwidth_mbps = to_number(fields[0]);
    row.delay_ms = to_number(fields[1]);
    row.cc_bitrate_mbps = to_number(fields[2]);
    row.cc_rtt_ms = to_number(fields[3]);
    row.ec_bitrate_mbps = to_number(fields[4]);
    row.ec_rtt_ms = to_number(fields[5]);
    rows.push_back(row);
  }
  return rows;
}

std::vector<Table2Row> parse_table2_tsv(const std::string& text) {
  std::vector<Table2Row> rows;
  for (const auto& fields : read_tsv(text, kTable2Header, 4)) {
    Table2Row row;
    row.scenario = fields[0];
    row.rb = to_int(fields[1]);
    row.ue = fields[2];
    row.bitrate_mbps = to_number(fields[3]);
    if (row.rb <= 0) raise(Errc::schema, "rb must be positive");
    rows.push_back(row);
  }
  return rows;
}

CalibrationProfile fit_calibration(const std::vector<Table1Row>& table1,
                                   const std::vector<Table2Row>& table2,
                                   const std::string& name) {
  const Table1Row* flat = nullptr;     // zero configured delay
  const Table1Row* delayed = nullptr;  // nonzero delay
  for (const Table1Row& row : table1) {
    if (row.delay_ms == 0 && !flat) flat = &row;
    if (row.delay_ms > 0 && !delayed) delayed = &row;
  }
  if (!flat || !delayed)
    raise(Errc::insufficient_rows,
          "need at least one zero-delay and one nonzero-delay row");

  CalibrationProfile profile;
  profile.name = name;
  profile.rate_params.base_rtt_ms = flat->cc_rtt_ms;
  profile.rate_params.delay_multiplier =
      (delayed->cc_rtt_ms - flat->cc_rtt_ms) / delayed->delay_ms;

  double cap = 0;
  for (const Table1Row& row : table1)
    cap = std::max({cap, row.cc_bitrate_mbps, row.ec_bitrate_mbps});
  profile.rate_params.access_cap_mbps = cap;

  // Rows slower than both the access cap and the configured bandwidth hide
  // loss; invert Mathis at the observed rate to recover it.
  for (const Table1Row& row : table1) {
    if (row.cc_bitrate_mbps >= std::min(cap, row.bandwidth_mbps)) continue;
    double rtt_s = row.cc_rtt_ms / 1000.0;
    double rate_bps = row.cc_bitrate_mbps * 1e6;
    double mss_bits = profile.rate_params.mss_bytes * 8.0;
    double root = profile.rate_params.mathis_c * mss_bits / (rtt_s * rate_bps);
    profile.bridge_loss.push_back(
        {"TN", row.bandwidth_mbps, row.delay_ms, root * root});
  }

  for (const Table2Row& row : table2)
    profile.ue_efficiencies.push_back(
        {row.ue, row.scenario, row.bitrate_mbps / row.rb});

  profile.default_efficiency = cap / 25.0;
  return profile;
}

std::vector<std::string> builtin_profile_names() {
  return {"nominal", "table1", "table2"};
}

CalibrationProfile builtin_profile(const std::string& name) {
  auto names = builtin_profile_names();
  if (std::find(names.begin(), names.end(), name) == names.end())
    raise(Errc::unknown_profile, "no built-in profile named \"" + name + "\"");
  return fit_calibration(parse_table1_tsv(embedded_table1_tsv()),
                         parse_table2_tsv(embedded_table2_tsv()), name);
}

std::string serialize_profile(const CalibrationProfile& profile) {
  json doc;
  doc["name"] = profile.name;
  json params;
  params["base_rtt_ms"] = profile.rate_params.base_rtt_ms;
  params["delay_multiplier"] = profile.rate_params.delay_multiplier;
  params["access_cap_mbps"] = profile.rate_params.access_cap_mbps;
  params["mss_bytes"] = profile.rate_params.mss_bytes;
  params["mathis_c"] = profile.rate_params.mathis_c;
  if (profile.rate_params.window_bytes)
    params["window_bytes"] = *profile.rate_params.window_bytes;
  doc["rate_params"] = params;
  doc["bridge_loss"] = json::array();
  for (const BridgeLossEntry& entry : profile.bridge_loss) {
    doc["bridge_loss"].push_back({{"bridge", entry.bridge},
                                  {"bandwidth", entry.bandwidth_mbps},
                                  {"delay", entry.delay_ms},
                                  {"loss", entry.loss}});
  }
  doc["ue_efficiencies"] = json::array();
  for (const UeEfficiency& entry : profile.ue_efficiencies) {
    doc["ue_efficiencies"].push_back({{"ue", entry.ue},
                                      {"scenario", entry.scenario},
                                      {"mbps_per_rb", entry.mbps_per_rb}});
  }
  doc["default_efficiency"] = profile.default_efficiency;
  return doc.dump(2) + "\n";
}

namespace {

double need_number(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key) || !obj[key].is_number())
    raise(Errc::schema, where + ": missing numeric \"" + key + "\"");
  return obj[key].get<double>();
}

std::string need_string(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key) || !obj[key].is_string())
    raise(Errc::schema, where + ": missing string \"" + key + "\"");
  return obj[key].get<std::string>();
}

}  // namespace

CalibrationProfile parse_profile(const std::string& text) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) raise(Errc::syntax, "profile is not valid JSON");
  if (!doc.is_object()) raise(Errc::schema, "profile must be a JSON object");

  CalibrationProfile profile;
  profile.name = need_string(doc, "name", "profile");
  if (!doc.contains("rate_params") || !doc["rate_params"].is_object())
    raise(Errc::schema, "profile: missing object \"rate_params\"");
  const json& params = doc["rate_params"];
  profile.rate_params.base_rtt_ms = need_number(params, "base_rtt_ms", "rate_params");
  profile.rate_params.delay_multiplier =
      need_number(params, "delay_multiplier", "rate_params");
  profile.rate_params.access_cap_mbps =
      need_number(params, "access_cap_mbps", "rate_params");
  profile.rate_params.mss_bytes = need_number(params, "mss_bytes", "rate_params");
  profile.rate_params.mathis_c = need_number(params, "mathis_c", "rate_params");
  if (params.contains("window_bytes"))
    profile.rate_params.window_bytes = need_number(params, "window_bytes", "rate_params");

  if (doc.contains("bridge_loss")) {
    if (!doc["bridge_loss"].is_array())
      raise(Errc::schema, "profile: \"bridge_loss\" must be an array");
    for (const json& entry : doc["bridge_loss"]) {
      BridgeLossEntry parsed;
      parsed.bridge = need_string(entry, "bridge", "bridge_loss");
      parsed.bandwidth_mbps = need_number(entry, "bandwidth", "bridge_loss");
      parsed.delay_ms = need_number(entry, "delay", "bridge_loss");
      parsed.loss = need_number(entry, "loss", "bridge_loss");
      if (parsed.loss < 0 || parsed.loss > 1)
        raise(Errc::schema, "bridge_loss: loss must be a probability");
      profile.bridge_loss.push_back(std::move(parsed));
    }
  }
  if (doc.contains("ue_efficiencies")) {
    if (!doc["ue_efficiencies"].is_array())
      raise(Errc::schema, "profile: \"ue_efficiencies\" must be an array");
    for (const json& entry : doc["ue_efficiencies"]) {
      UeEfficiency parsed;
      parsed.ue = need_string(entry, "ue", "ue_efficiencies");
      parsed.scenario = need_string(entry, "scenario", "ue_efficiencies");
      parsed.mbps_per_rb = need_number(entry, "mbps_per_rb", "ue_efficiencies");
      if (parsed.mbps_per_rb <= 0)
        raise(Errc::schema, "ue_efficiencies: mbps_per_rb must be positive");
      profile.ue_efficiencies.push_back(std::move(parsed));
    }
  }
  profile.default_efficiency = need_number(doc, "default_efficiency", "profile");
  return profile;
}

double loss_for_bridge(const CalibrationProfile& profile, const std::string& bridge,
                       double bandwidth_mbps, double delay_ms) {
  double loss = 0;
  for (const BridgeLossEntry& entry : profile.bridge_loss) {
    if (entry.bridge != bridge) continue;
    if (bandwidth_mbps <= entry.bandwidth_mbps && delay_ms >= entry.delay_ms)
      loss = std::max(loss, entry.loss);
  }
  return loss;
}

double efficiency_for(const CalibrationProfile& profile, const std::string& ue,
                      const std::string& scenario) {
  for (const UeEfficiency& entry : profile.ue_efficiencies) {
    if (entry.ue == ue && entry.scenario == scenario) return entry.mbps_per_rb;
  }
  std::string digits = trailing_digits(scenario);
  if (!digits.empty()) {
    for (const UeEfficiency& entry : profile.ue_efficiencies) {
      if (entry.ue == ue && trailing_digits(entry.scenario) == digits)
        return entry.mbps_per_rb;
    }
  }
  return profile.default_efficiency;
}

}  // namespace cn2f::profile
