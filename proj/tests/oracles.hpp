#pragma once

// Independent reference implementations used to cross-check the simulator.
// Deliberately written with different algorithms than the library code.

#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <vector>

namespace oracle {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Flow {
  double cap = kInf;       // private rate bound, kInf when none
  std::vector<int> links;  // indices into the capacity vector
};

// Bottleneck-fixing max-min (Bertsekas/Gallager style): repeatedly find the
// link with the smallest fair share among unfixed flows and fix its flows
// there. Per-flow caps are modeled as private single-flow links, so the cap
// shows up as an ordinary bottleneck. The max-min allocation is unique, so
// any tie-break yields the same rates.
inline std::vector<double> waterfill(const std::vector<Flow>& flows,
                                     const std::vector<double>& capacity) {
  size_t n = flows.size();
  // Extended link set: real links, then one virtual link per capped flow.
  std::vector<double> cap = capacity;
  std::vector<std::vector<size_t>> members(capacity.size());
  for (size_t i = 0; i < n; ++i) {
    for (int l : flows[i].links) members[static_cast<size_t>(l)].push_back(i);
    if (flows[i].cap != kInf) {
      cap.push_back(flows[i].cap);
      members.push_back({i});
    }
  }

  std::vector<double> rate(n, kInf);
  std::vector<bool> fixed(n, false);
  for (;;) {
    double best_share = kInf;
    size_t best_link = members.size();
    for (size_t l = 0; l < members.size(); ++l) {
      double used = 0;
      int unfixed = 0;
      for (size_t i : members[l]) {
        if (fixed[i]) {
          used += rate[i];
        } else {
          ++unfixed;
        }
      }
      if (unfixed == 0) continue;
      double share = (cap[l] - used) / unfixed;
      if (share < best_share) {
        best_share = share;
        best_link = l;
      }
    }
    if (best_link == members.size()) break;  // everything left is unconstrained
    for (size_t i : members[best_link]) {
      if (!fixed[i]) {
        rate[i] = best_share;
        fixed[i] = true;
      }
    }
  }
  return rate;
}

// Max-min certificate: the allocation is feasible, and every flow is pinned
// either by its cap or by a saturated link on which it is a maximal flow.
inline bool is_max_min(const std::vector<Flow>& flows,
                       const std::vector<double>& capacity,
                       const std::vector<double>& rate, double tol = 1e-9) {
  std::vector<double> load(capacity.size(), 0);
  for (size_t i = 0; i < flows.size(); ++i) {
    if (rate[i] == kInf) {
      if (flows[i].cap != kInf || !flows[i].links.empty()) return false;
      continue;
    }
    if (rate[i] < -tol) return false;
    if (flows[i].cap != kInf && rate[i] > flows[i].cap + tol) return false;
    for (int l : flows[i].links) load[static_cast<size_t>(l)] += rate[i];
  }
  for (size_t l = 0; l < capacity.size(); ++l) {
    if (load[l] > capacity[l] + tol) return false;
  }
  for (size_t i = 0; i < flows.size(); ++i) {
    if (rate[i] == kInf) continue;
    if (flows[i].cap != kInf && rate[i] >= flows[i].cap - tol) continue;
    bool bottlenecked = false;
    for (int li : flows[i].links) {
      size_t l = static_cast<size_t>(li);
      if (load[l] < capacity[l] - tol) continue;  // link not saturated
      double max_on_link = 0;
      for (size_t j = 0; j < flows.size(); ++j) {
        for (int lj : flows[j].links) {
          if (static_cast<size_t>(lj) == l) max_on_link = std::max(max_on_link, rate[j]);
        }
      }
      if (rate[i] >= max_on_link - tol) bottlenecked = true;
    }
    if (!bottlenecked) return false;
  }
  return true;
}

// Mathis TCP bound, written from the closed form rather than shared code.
inline double mathis_mbps(double mss_bytes, double c, double rtt_s, double p) {
  return c * mss_bytes * 8.0 / (rtt_s * std::sqrt(p)) / 1e6;
}

}  // namespace oracle
