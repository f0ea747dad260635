#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cn2f/catalog.hpp"
#include "cn2f/engine.hpp"
#include "cn2f/manifest.hpp"

namespace cn2f::orch {

enum class PodPhase { Pending, Initialized, ContainersReady, Ready, Succeeded, Failed };

const char* phase_name(PodPhase phase);

struct GateState {
  InitGate spec;
  int attempts = 0;
  bool passed = false;
};

struct Pod {
  uint64_t uid = 0;     // unique across the whole run
  std::string pod_id;   // "<deployment>-<generation>"
  std::string deployment;
  VnfKind kind = VnfKind::UE;
  PodPhase phase = PodPhase::Pending;
  std::optional<std::string> node;
  std::optional<Ipv4> ip;
  std::vector<uint16_t> ports;
  std::vector<GateState> gates;
  int restart_count = 0;
  sim::TimeMs created_at = 0;
  sim::TimeMs phase_entered_at = 0;
  sim::TimeMs containers_ready_at = -1;
  sim::TimeMs population_started_at = -1;  // table-init kinds only
  sim::TimeMs first_ready_at = -1;
  // Readiness condition overlay; false shows as NotReady in the log while
  // the phase stays Ready.
  bool condition_ok = true;
  bool unschedulable = false;  // recorded NoMatchingNode condition

  bool live() const { return phase != PodPhase::Succeeded && phase != PodPhase::Failed; }
  bool serving() const { return phase == PodPhase::Ready && condition_ok; }
};

struct LogEntry {
  sim::TimeMs time = 0;
  std::string pod_id;
  std::string deployment;
  std::string transition;

  friend bool operator==(const LogEntry&, const LogEntry&) = default;
};

struct Bearer {
  std::string ue_name;  // UE deployment
  Ipv4 ue_ip;
  std::string enb_deployment;  // serving base station (eNB or RRU)
  std::string enb_node;
  std::string spgwu_node;
  // Pod identities of the user-plane anchors; the bearer survives only
  // while every one of them is live.
  std::vector<uint64_t> anchor_uids;
  sim::TimeMs established_at = 0;
};

struct HeartbeatSession {
  std::string spgwc_deployment;
  std::string spgwu_deployment;
  int missed = 0;
  int consecutive_ok = 0;
  sim::TimeMs created_at = -1;

  bool unhealthy() const { return missed >= 3; }
};

// Declarative pod controller over the simulated cluster: desired-state
// store, scheduler, IP allocator, init-gate prober, lifecycle state machine,
// readiness protocol, and UE attach. Driven entirely by engine events.
class Orchestrator {
 public:
  Orchestrator(sim::Engine& engine, TopologyDoc topology);

  // Desired-state write. Identical re-apply is a no-op; a changed document
  // replaces the running pod with a fresh generation.
  void apply(const DeploymentDoc& doc);

  // Fault injection. Raises Errc::unknown_pod unless pod_id names a live pod.
  void kill_pod(const std::string& pod_id);

  // Marks a Ready pod as intentionally finished; it is not replaced.
  void complete_pod(const std::string& pod_id);

  // Init-gate view: open iff some live pod owns the address, lists the
  // port, and its phase is Ready.
  bool probe(Ipv4 target_ip, uint16_t target_port) const;

  // Starts the attach procedure for a UE against a serving base station;
  // the bearer appears attach_latency later. Raises Errc::attach_rejected
  // naming the first prerequisite kind that is not serving.
  void attach_ue(const std::string& ue_name, const std::string& bs_deployment);

  void detach_ue(const std::string& ue_name);

  // ---- views ----
  const std::map<uint64_t, Pod>& pods() const { return pods_; }
  const Pod* live_pod(const std::string& deployment) const;
  const Pod* pod_by_id(const std::string& pod_id) const;
  const std::map<std::string, Bearer>& bearers() const { return bearers_; }
  const std::optional<HeartbeatSession>& heartbeat() const { return session_; }
  const std::vector<LogEntry>& log() const { return log_; }
  const TopologyDoc& topology() const { return topology_; }

  // Deployment name -> node of its live pod, for path computation.
  std::map<std::string, std::string> placements() const;
  std::set<std::string> ue_deployments() const;
  bool all_desired_serving() const;

  std::string event_log_tsv() const;

  // Extra log rows from surrounding machinery (slice changes, probes).
  void append_action(const std::string& deployment, const std::string& token);

  // Invoked after every orchestrator event once the state settled; the
  // scenario runner keys flow updates and attach retries off it.
  void set_on_change(std::function<void()> hook) { on_change_ = std::move(hook); }

  static constexpr sim::TimeMs kContainerStartLatencyMs = 1'000;
  static constexpr sim::TimeMs kTableInitLatencyMs = 5'000;
  static constexpr sim::TimeMs kHeartbeatIntervalMs = 10'000;
  static constexpr sim::TimeMs kAttachLatencyMs = 100;

 private:
  struct Desired {
    DeploymentDoc doc;
    uint64_t next_generation = 0;
    int restarts = 0;                 // self-heal count since last apply
    bool completed = false;           // pod ran to Succeeded on purpose
    sim::TimeMs last_replacement_at = -1;
  };

  Pod& create_pod(Desired& desired);
  void try_bind(Pod& pod);
  Ipv4 allocate_ip(const DeploymentDoc& doc);
  void release_ip(Pod& pod);
  void fail_pod(Pod& pod);
  void enter_phase(Pod& pod, PodPhase phase);
  void log_transition(const Pod& pod, const std::string& token);
  void schedule_gate(uint64_t uid, size_t gate_index, sim::TimeMs at);
  void gate_attempt(uint64_t uid, size_t gate_index);
  void schedule_containers_ready(uint64_t uid);
  void maybe_create_heartbeat();
  void heartbeat_tick();
  void apply_heartbeat_condition(bool ok);
  bool can_enter_ready(const Pod& pod) const;
  bool deployment_serving(VnfKind kind) const;
  bool flexran_in_play(const Pod& pod) const;
  void evaluate_conditions();
  void reconcile();
  void settle();  // reconcile to fixpoint, then notify
  void teardown_bearers_anchored_on(uint64_t uid);
  void complete_attach(const std::string& ue_name, const std::string& bs_deployment);
  const Pod* serving_pod(const std::string& deployment) const;

  sim::Engine& engine_;
  TopologyDoc topology_;
  std::map<std::string, Desired> desired_;
  std::map<uint64_t, Pod> pods_;
  uint64_t next_uid_ = 1;
  std::map<Ipv4, uint64_t> pod_ips_;  // address -> owning pod uid
  std::set<Ipv4> ue_ips_;
  std::map<std::string, Bearer> bearers_;
  std::set<std::string> pending_attach_;
  std::optional<HeartbeatSession> session_;
  std::vector<LogEntry> log_;
  std::function<void()> on_change_;
  bool in_settle_ = false;
  bool dirty_ = false;
};

}  // namespace cn2f::orch
