#pragma once

#include <string>
#include <vector>

#include "cn2f/errors.hpp"
#include "cn2f/netmodel.hpp"

namespace cn2f::profile {

// Loss fitted at one recorded bridge setting. It applies whenever the
// bridge runs at least as harsh (bandwidth at or below, delay at or above
// the recorded point), so sweeps stay monotone around the measurement.
struct BridgeLossEntry {
  std::string bridge;
  double bandwidth_mbps = 0;
  double delay_ms = 0;
  double loss = 0;

  friend bool operator==(const BridgeLossEntry&, const BridgeLossEntry&) = default;
};

struct UeEfficiency {
  std::string ue;
  std::string scenario;
  double mbps_per_rb = 0;

  friend bool operator==(const UeEfficiency&, const UeEfficiency&) = default;
};

struct CalibrationProfile {
  std::string name;
  net::RateParams rate_params;
  std::vector<BridgeLossEntry> bridge_loss;
  std::vector<UeEfficiency> ue_efficiencies;
  double default_efficiency = 0;

  friend bool operator==(const CalibrationProfile& a, const CalibrationProfile& b) {
    return a.name == b.name &&
           a.rate_params.base_rtt_ms == b.rate_params.base_rtt_ms &&
           a.rate_params.delay_multiplier == b.rate_params.delay_multiplier &&
           a.rate_params.access_cap_mbps == b.rate_params.access_cap_mbps &&
           a.rate_params.mss_bytes == b.rate_params.mss_bytes &&
           a.rate_params.mathis_c == b.rate_params.mathis_c &&
           a.rate_params.window_bytes == b.rate_params.window_bytes &&
           a.bridge_loss == b.bridge_loss &&
           a.ue_efficiencies == b.ue_efficiencies &&
           a.default_efficiency == b.default_efficiency;
  }
};

// One row of the placement measurement table: transport settings plus the
// observed bit rate and round trip for the cloud and edge placements.
struct Table1Row {
  double bandwidth_mbps = 0;
  double delay_ms = 0;
  double cc_bitrate_mbps = 0;
  double cc_rtt_ms = 0;
  double ec_bitrate_mbps = 0;
  double ec_rtt_ms = 0;
};

// One cell of the slicing measurement table.
struct Table2Row {
  std::string scenario;
  int rb = 0;
  std::string ue;
  double bitrate_mbps = 0;
};

// TSV parsers for the two measurement tables. Raise Errc::schema on a
// missing header, wrong column count, or unparsable number.
std::vector<Table1Row> parse_table1_tsv(const std::string& text);
std::vector<Table2Row> parse_table2_tsv(const std::string& text);

// The shipped measurement tables.
const char* embedded_table1_tsv();
const char* embedded_table2_tsv();

// Fits a profile: base RTT from a zero-delay row, delay multiplier from a
// nonzero-delay row, access cap as the best observed rate, inverse-Mathis
// loss for rows the cap and bandwidth cannot explain, and per-UE per-
// scenario efficiencies as bitrate over quota. Raises Errc::insufficient_rows
// without at least one zero-delay and one nonzero-delay row.
CalibrationProfile fit_calibration(const std::vector<Table1Row>& table1,
                                   const std::vector<Table2Row>& table2,
                                   const std::string& name);

// "nominal", "table1", "table2": the same fit of the shipped tables under
// the requested name. Raises Errc::unknown_profile otherwise.
CalibrationProfile builtin_profile(const std::string& name);
std::vector<std::string> builtin_profile_names();

std::string serialize_profile(const CalibrationProfile& profile);
CalibrationProfile parse_profile(const std::string& text);  // syntax/schema

// Highest applicable fitted loss for a bridge at its current settings;
// zero when no entry applies.
double loss_for_bridge(const CalibrationProfile& profile, const std::string& bridge,
                       double bandwidth_mbps, double delay_ms);

// Efficiency lookup: exact (ue, scenario) entry, then an entry for the
// same ue whose scenario shares the trailing digits, then the default.
double efficiency_for(const CalibrationProfile& profile, const std::string& ue,
                      const std::string& scenario);

}  // namespace cn2f::profile
