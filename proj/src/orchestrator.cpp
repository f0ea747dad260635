#include "cn2f/orchestrator.hpp"

#include <algorithm>
#include <sstream>

namespace cn2f::orch {

namespace {

constexpr sim::TimeMs kReplacementBackoffMs = 1'000;

bool at_least_containers_ready(const Pod& pod) {
  return pod.live() && (pod.phase == PodPhase::ContainersReady ||
                        pod.phase == PodPhase::Ready);
}

bool needs_table_init(VnfKind kind) {
  return kind == VnfKind::Cassandra || kind == VnfKind::HSS;
}

}  // namespace

const char* phase_name(PodPhase phase) {
  switch (phase) {
    case PodPhase::Pending: return "Pending";
    case PodPhase::Initialized: return "Initialized";
    case PodPhase::ContainersReady: return "ContainersReady";
    case PodPhase::Ready: return "Ready";
    case PodPhase::Succeeded: return "Succeeded";
    case PodPhase::Failed: return "Failed";
  }
  return "?";
}

Orchestrator::Orchestrator(sim::Engine& engine, TopologyDoc topology)
    : engine_(engine), topology_(std::move(topology)) {}

void Orchestrator::apply(const DeploymentDoc& doc) {
  auto it = desired_.find(doc.name);
  if (it == desired_.end()) {
    auto& desired = desired_[doc.name];
    desired.doc = doc;
    create_pod(desired);
    settle();
    return;
  }
  if (it->second.doc == doc && !it->second.completed) return;  // idempotent
  // Spec change: replace the running pod with a fresh generation whose
  // restart count starts over.
  it->second.doc = doc;
  it->second.completed = false;
  it->second.restarts = 0;
  for (auto& [uid, pod] : pods_) {
    if (pod.deployment == doc.name && pod.live()) fail_pod(pod);
  }
  it->second.last_replacement_at = engine_.now();
  create_pod(it->second);
  settle();
}

Pod& Orchestrator::create_pod(Desired& desired) {
  uint64_t uid = next_uid_++;
  Pod& pod = pods_[uid];
  pod.uid = uid;
  pod.pod_id = desired.doc.name + "-" + std::to_string(desired.next_generation++);
  pod.deployment = desired.doc.name;
  pod.kind = desired.doc.vnf_kind;
  pod.ports = desired.doc.effective_ports();
  pod.created_at = engine_.now();
  pod.phase_entered_at = engine_.now();
  for (const InitGate& gate : desired.doc.init_gates) pod.gates.push_back({gate, 0, false});
  log_transition(pod, "Pending");
  dirty_ = true;
  try_bind(pod);
  return pod;
}

void Orchestrator::try_bind(Pod& pod) {
  if (pod.node) return;
  const DeploymentDoc& doc = desired_.at(pod.deployment).doc;
  const NodeDoc* chosen = nullptr;
  for (const NodeDoc& node : topology_.nodes) {
    if (node.role == "master") continue;
    bool match = true;
    for (const auto& [key, value] : doc.node_selector) {
      auto it = node.labels.find(key);
      if (it == node.labels.end() || it->second != value) { match = false; break; }
    }
    if (!match) continue;
    if (!chosen || node.name < chosen->name) chosen = &node;
  }
  if (!chosen) {
    if (!pod.unschedulable) {
      pod.unschedulable = true;
      log_transition(pod, "NoMatchingNode");
    }
    return;  // stays Pending; nothing to retry against a static topology
  }
  pod.node = chosen->name;
  try {
    Ipv4 ip = allocate_ip(doc);
    pod.ip = ip;
    pod_ips_[ip] = pod.uid;
  } catch (const Error&) {
    fail_pod(pod);
    return;
  }
  if (pod.gates.empty()) {
    enter_phase(pod, PodPhase::Initialized);
    schedule_containers_ready(pod.uid);
    return;
  }
  for (size_t i = 0; i < pod.gates.size(); ++i) {
    schedule_gate(pod.uid, i,
                  engine_.now() + sim::TimeMs{pod.gates[i].spec.interval_s} * 1000);
  }
}

Ipv4 Orchestrator::allocate_ip(const DeploymentDoc& doc) {
  const Cidr& pool = topology_.ip_pools.pod_cidr;
  if (doc.static_ip) {
    if (!pool.contains(*doc.static_ip) || *doc.static_ip == pool.base)
      raise(Errc::out_of_range,
            doc.name + ": static ip " + format_ipv4(*doc.static_ip) +
                " outside pod pool " + format_cidr(pool));
    if (pod_ips_.count(*doc.static_ip))
      raise(Errc::duplicate_static_ip,
            doc.name + ": static ip " + format_ipv4(*doc.static_ip) +
                " already owned by a live pod");
    return *doc.static_ip;
  }
  for (Ipv4 ip = pool.first_host(); !(pool.last_host() < ip);
       ip = Ipv4{ip.value + 1}) {
    if (!pod_ips_.count(ip)) return ip;
  }
  raise(Errc::pool_exhausted, doc.name + ": pod pool " + format_cidr(pool) + " exhausted");
}

void Orchestrator::release_ip(Pod& pod) {
  if (!pod.ip) return;
  auto it = pod_ips_.find(*pod.ip);
  if (it != pod_ips_.end() && it->second == pod.uid) pod_ips_.erase(it);
}

void Orchestrator::fail_pod(Pod& pod) {
  release_ip(pod);
  teardown_bearers_anchored_on(pod.uid);
  enter_phase(pod, PodPhase::Failed);
}

void Orchestrator::enter_phase(Pod& pod, PodPhase phase) {
  pod.phase = phase;
  pod.phase_entered_at = engine_.now();
  if (phase == PodPhase::ContainersReady) pod.containers_ready_at = engine_.now();
  if (phase == PodPhase::Ready && pod.first_ready_at < 0)
    pod.first_ready_at = engine_.now();
  log_transition(pod, phase_name(phase));
  dirty_ = true;
}

void Orchestrator::log_transition(const Pod& pod, const std::string& token) {
  log_.push_back({engine_.now(), pod.pod_id, pod.deployment, token});
}

void Orchestrator::schedule_gate(uint64_t uid, size_t gate_index, sim::TimeMs at) {
  const Pod& pod = pods_.at(uid);
  engine_.schedule(at, sim::EventKind::probe_retry,
                   pod.pod_id + ":gate" + std::to_string(gate_index),
                   [this, uid, gate_index] { gate_attempt(uid, gate_index); });
}

void Orchestrator::gate_attempt(uint64_t uid, size_t gate_index) {
  auto it = pods_.find(uid);
  if (it == pods_.end()) return;
  Pod& pod = it->second;
  if (!pod.live() || pod.phase != PodPhase::Pending) return;
  GateState& gate = pod.gates[gate_index];
  if (gate.passed) return;
  if (probe(gate.spec.target_ip, gate.spec.target_port)) {
    gate.passed = true;
    bool all = std::all_of(pod.gates.begin(), pod.gates.end(),
                           [](const GateState& g) { return g.passed; });
    if (all) {
      enter_phase(pod, PodPhase::Initialized);
      schedule_containers_ready(uid);
    }
  } else {
    gate.attempts += 1;
    if (gate.attempts >= gate.spec.retries) {
      fail_pod(pod);
    } else {
      schedule_gate(uid, gate_index,
                    engine_.now() + sim::TimeMs{gate.spec.interval_s} * 1000);
    }
  }
  settle();
}

void Orchestrator::schedule_containers_ready(uint64_t uid) {
  const Pod& pod = pods_.at(uid);
  engine_.schedule(engine_.now() + kContainerStartLatencyMs,
                   sim::EventKind::lifecycle_step, pod.pod_id + ":containers",
                   [this, uid] {
                     auto it = pods_.find(uid);
                     if (it == pods_.end()) return;
                     Pod& p = it->second;
                     if (!p.live() || p.phase != PodPhase::Initialized) return;
                     enter_phase(p, PodPhase::ContainersReady);
                     settle();
                   });
}

bool Orchestrator::probe(Ipv4 target_ip, uint16_t target_port) const {
  for (const auto& [uid, pod] : pods_) {
    if (!pod.live() || pod.phase != PodPhase::Ready) continue;
    if (!pod.ip || *pod.ip != target_ip) continue;
    if (std::find(pod.ports.begin(), pod.ports.end(), target_port) != pod.ports.end())
      return true;
  }
  return false;
}

const Pod* Orchestrator::live_pod(const std::string& deployment) const {
  for (const auto& [uid, pod] : pods_) {
    if (pod.deployment == deployment && pod.live()) return &pod;
  }
  return nullptr;
}

const Pod* Orchestrator::pod_by_id(const std::string& pod_id) const {
  for (const auto& [uid, pod] : pods_) {
    if (pod.pod_id == pod_id) return &pod;
  }
  return nullptr;
}

const Pod* Orchestrator::serving_pod(const std::string& deployment) const {
  const Pod* pod = live_pod(deployment);
  return pod && pod->serving() ? pod : nullptr;
}

bool Orchestrator::deployment_serving(VnfKind kind) const {
  for (const auto& [name, desired] : desired_) {
    if (desired.doc.vnf_kind != kind) continue;
    if (serving_pod(name)) return true;
  }
  return false;
}

bool Orchestrator::flexran_in_play(const Pod& pod) const {
  return desired_.at(pod.deployment).doc.flexran_enabled();
}

bool Orchestrator::can_enter_ready(const Pod& pod) const {
  switch (pod.kind) {
    case VnfKind::Cassandra:
      return pod.population_started_at >= 0 &&
             engine_.now() >= pod.population_started_at + kTableInitLatencyMs;
    case VnfKind::HSS:
      return deployment_serving(VnfKind::Cassandra) &&
             pod.population_started_at >= 0 &&
             engine_.now() >= pod.population_started_at + kTableInitLatencyMs;
    case VnfKind::MME:
      return deployment_serving(VnfKind::HSS);
    case VnfKind::SPGWU:
      return session_ && session_->consecutive_ok >= 2;
    case VnfKind::ENB:
    case VnfKind::RCC:
      return deployment_serving(VnfKind::MME) &&
             (!flexran_in_play(pod) || deployment_serving(VnfKind::FlexRAN));
    case VnfKind::RRU:
      return deployment_serving(VnfKind::RCC);
    case VnfKind::SPGWC:
    case VnfKind::FlexRAN:
    case VnfKind::MediaServer:
    case VnfKind::UE:
      return true;
  }
  return false;
}

void Orchestrator::maybe_create_heartbeat() {
  if (session_) return;
  const Pod* spgwc = nullptr;
  const Pod* spgwu = nullptr;
  for (const auto& [name, desired] : desired_) {
    const Pod* pod = live_pod(name);
    if (!pod || !at_least_containers_ready(*pod)) continue;
    if (desired.doc.vnf_kind == VnfKind::SPGWC && !spgwc) spgwc = pod;
    if (desired.doc.vnf_kind == VnfKind::SPGWU && !spgwu) spgwu = pod;
  }
  if (!spgwc || !spgwu) return;
  session_ = HeartbeatSession{spgwc->deployment, spgwu->deployment, 0, 0, engine_.now()};
  dirty_ = true;
  heartbeat_tick();
}

void Orchestrator::heartbeat_tick() {
  if (!session_) return;
  const Pod* spgwc = live_pod(session_->spgwc_deployment);
  const Pod* spgwu = live_pod(session_->spgwu_deployment);
  bool ok = spgwc && at_least_containers_ready(*spgwc) && spgwu &&
            at_least_containers_ready(*spgwu);
  if (ok) {
    bool was_unhealthy = session_->unhealthy();
    session_->missed = 0;
    session_->consecutive_ok += 1;
    if (was_unhealthy) apply_heartbeat_condition(true);
  } else {
    session_->consecutive_ok = 0;
    session_->missed += 1;
    if (session_->missed == 3) apply_heartbeat_condition(false);
  }
  dirty_ = true;
  engine_.schedule(engine_.now() + kHeartbeatIntervalMs, sim::EventKind::heartbeat,
                   "heartbeat", [this] {
                     heartbeat_tick();
                     settle();
                   });
}

void Orchestrator::apply_heartbeat_condition(bool ok) {
  if (!session_) return;
  for (const std::string& name :
       {session_->spgwc_deployment, session_->spgwu_deployment}) {
    for (auto& [uid, pod] : pods_) {
      if (pod.deployment != name || !pod.live() || pod.phase != PodPhase::Ready)
        continue;
      if (pod.condition_ok == ok) continue;
      pod.condition_ok = ok;
      log_transition(pod, ok ? "ReadyAgain" : "NotReady");
      dirty_ = true;
    }
  }
}

void Orchestrator::evaluate_conditions() {
  for (auto& [uid, pod] : pods_) {
    if (!pod.live() || pod.phase != PodPhase::Ready) continue;
    if (pod.kind != VnfKind::HSS) continue;  // SPGW pair is heartbeat-owned
    bool ok = deployment_serving(VnfKind::Cassandra);
    if (pod.condition_ok == ok) continue;
    pod.condition_ok = ok;
    log_transition(pod, ok ? "ReadyAgain" : "NotReady");
    dirty_ = true;
  }
}

void Orchestrator::reconcile() {
  // Replace failed pods of deployments that still want one.
  for (auto& [name, desired] : desired_) {
    if (desired.completed) continue;
    bool has_live = false;
    for (const auto& [uid, pod] : pods_) {
      if (pod.deployment == name && pod.live()) { has_live = true; break; }
    }
    if (has_live) continue;
    if (desired.last_replacement_at == engine_.now()) {
      // Second replacement in the same instant would spin; back off.
      engine_.schedule(engine_.now() + kReplacementBackoffMs,
                       sim::EventKind::generic, name + ":replace",
                       [this] { settle(); });
      continue;
    }
    desired.last_replacement_at = engine_.now();
    desired.restarts += 1;
    Pod& pod = create_pod(desired);
    pod.restart_count = desired.restarts;
  }

  for (auto& [uid, pod] : pods_) {
    if (!pod.live()) continue;
    if (pod.phase == PodPhase::Pending && !pod.node) try_bind(pod);
    if (pod.phase == PodPhase::ContainersReady) {
      if (needs_table_init(pod.kind) && pod.population_started_at < 0) {
        bool precondition = pod.kind != VnfKind::HSS ||
                            deployment_serving(VnfKind::Cassandra);
        if (precondition) {
          pod.population_started_at = engine_.now();
          engine_.schedule(engine_.now() + kTableInitLatencyMs,
                           sim::EventKind::lifecycle_step, pod.pod_id + ":table",
                           [this] { settle(); });
          dirty_ = true;
        }
      }
      if (can_enter_ready(pod)) {
        enter_phase(pod, PodPhase::Ready);
        if (pod.kind == VnfKind::MME) {
          for (const auto& [name, desired] : desired_) {
            if (desired.doc.vnf_kind != VnfKind::HSS) continue;
            if (const Pod* hss = serving_pod(name)) {
              log_transition(*hss, "STATE_OPEN");
              break;
            }
          }
        }
      }
    }
  }

  maybe_create_heartbeat();
  evaluate_conditions();
}

void Orchestrator::settle() {
  if (in_settle_) { dirty_ = true; return; }
  in_settle_ = true;
  do {
    dirty_ = false;
    reconcile();
  } while (dirty_);
  in_settle_ = false;
  if (on_change_) on_change_();
}

void Orchestrator::kill_pod(const std::string& pod_id) {
  for (auto& [uid, pod] : pods_) {
    if (pod.pod_id != pod_id || !pod.live()) continue;
    fail_pod(pod);
    settle();
    return;
  }
  raise(Errc::unknown_pod, pod_id + " does not name a live pod");
}

void Orchestrator::complete_pod(const std::string& pod_id) {
  for (auto& [uid, pod] : pods_) {
    if (pod.pod_id != pod_id || !pod.live()) continue;
    if (pod.phase != PodPhase::Ready)
      raise(Errc::unknown_pod, pod_id + " is not Ready");
    release_ip(pod);
    teardown_bearers_anchored_on(pod.uid);
    enter_phase(pod, PodPhase::Succeeded);
    desired_.at(pod.deployment).completed = true;
    settle();
    return;
  }
  raise(Errc::unknown_pod, pod_id + " does not name a live pod");
}

void Orchestrator::teardown_bearers_anchored_on(uint64_t uid) {
  for (auto it = bearers_.begin(); it != bearers_.end();) {
    const Bearer& bearer = it->second;
    bool anchored = std::find(bearer.anchor_uids.begin(), bearer.anchor_uids.end(),
                              uid) != bearer.anchor_uids.end();
    if (!anchored) { ++it; continue; }
    ue_ips_.erase(bearer.ue_ip);
    if (const Pod* ue = live_pod(bearer.ue_name)) {
      log_transition(*ue, "BearerDown");
    } else {
      log_.push_back({engine_.now(), bearer.ue_name, bearer.ue_name, "BearerDown"});
    }
    it = bearers_.erase(it);
    dirty_ = true;
  }
}

void Orchestrator::attach_ue(const std::string& ue_name,
                             const std::string& bs_deployment) {
  auto reject = [&](VnfKind kind) {
    raise(Errc::attach_rejected,
          ue_name + ": attach rejected, " + catalog_entry(kind).display +
              " not Ready");
  };
  auto ue_it = desired_.find(ue_name);
  if (ue_it == desired_.end() || ue_it->second.doc.vnf_kind != VnfKind::UE)
    raise(Errc::unknown_pod, ue_name + " is not a UE deployment");
  auto bs_it = desired_.find(bs_deployment);
  if (bs_it == desired_.end())
    raise(Errc::unknown_pod, bs_deployment + " is not a deployment");
  VnfKind bs_kind = bs_it->second.doc.vnf_kind;
  if (bs_kind != VnfKind::ENB && bs_kind != VnfKind::RRU)
    raise(Errc::unknown_pod, bs_deployment + " is not a base station");
  if (bearers_.count(ue_name) || pending_attach_.count(ue_name)) return;

  if (!serving_pod(ue_name)) reject(VnfKind::UE);
  if (!serving_pod(bs_deployment)) reject(bs_kind);
  if (bs_kind == VnfKind::RRU && !deployment_serving(VnfKind::RCC))
    reject(VnfKind::RCC);
  if (!deployment_serving(VnfKind::MME)) reject(VnfKind::MME);
  if (!deployment_serving(VnfKind::SPGWC)) reject(VnfKind::SPGWC);
  if (!deployment_serving(VnfKind::SPGWU)) reject(VnfKind::SPGWU);

  pending_attach_.insert(ue_name);
  engine_.schedule(engine_.now() + kAttachLatencyMs, sim::EventKind::control_message,
                   "attach:" + ue_name, [this, ue_name, bs_deployment] {
                     pending_attach_.erase(ue_name);
                     complete_attach(ue_name, bs_deployment);
                     settle();
                   });
}

void Orchestrator::complete_attach(const std::string& ue_name,
                                   const std::string& bs_deployment) {
  // Conditions may have changed during the attach exchange; drop silently
  // and let the caller retry off the next state change.
  const Pod* ue = serving_pod(ue_name);
  const Pod* bs = serving_pod(bs_deployment);
  if (!ue || !bs) return;
  std::vector<uint64_t> anchors = {ue->uid, bs->uid};
  if (bs->kind == VnfKind::RRU) {
    const Pod* rcc = nullptr;
    for (const auto& [name, desired] : desired_) {
      if (desired.doc.vnf_kind == VnfKind::RCC && serving_pod(name)) {
        rcc = serving_pod(name);
        break;
      }
    }
    if (!rcc) return;
    anchors.push_back(rcc->uid);
  }
  if (!deployment_serving(VnfKind::MME) || !deployment_serving(VnfKind::SPGWC))
    return;
  const Pod* spgwu = nullptr;
  for (const auto& [name, desired] : desired_) {
    if (desired.doc.vnf_kind == VnfKind::SPGWU && serving_pod(name)) {
      spgwu = serving_pod(name);
      break;
    }
  }
  if (!spgwu) return;
  anchors.push_back(spgwu->uid);

  const Cidr& pool = topology_.ip_pools.ue_cidr;
  std::optional<Ipv4> assigned;
  for (Ipv4 ip = pool.first_host(); !(pool.last_host() < ip);
       ip = Ipv4{ip.value + 1}) {
    if (!ue_ips_.count(ip)) { assigned = ip; break; }
  }
  if (!assigned)
    raise(Errc::pool_exhausted, "ue pool " + format_cidr(pool) + " exhausted");
  ue_ips_.insert(*assigned);

  Bearer bearer;
  bearer.ue_name = ue_name;
  bearer.ue_ip = *assigned;
  bearer.enb_deployment = bs_deployment;
  bearer.enb_node = *bs->node;
  bearer.spgwu_node = *spgwu->node;
  bearer.anchor_uids = std::move(anchors);
  bearer.established_at = engine_.now();
  bearers_[ue_name] = std::move(bearer);
  log_transition(*ue, "BearerUp");
  dirty_ = true;
}

void Orchestrator::detach_ue(const std::string& ue_name) {
  auto it = bearers_.find(ue_name);
  if (it == bearers_.end())
    raise(Errc::no_bearer, ue_name + " has no bearer");
  ue_ips_.erase(it->second.ue_ip);
  if (const Pod* ue = live_pod(ue_name)) log_transition(*ue, "BearerDown");
  bearers_.erase(it);
  settle();
}

std::map<std::string, std::string> Orchestrator::placements() const {
  std::map<std::string, std::string> out;
  for (const auto& [name, desired] : desired_) {
    const Pod* pod = live_pod(name);
    if (pod && pod->node) out[name] = *pod->node;
  }
  return out;
}

std::set<std::string> Orchestrator::ue_deployments() const {
  std::set<std::string> out;
  for (const auto& [name, desired] : desired_) {
    if (desired.doc.vnf_kind == VnfKind::UE) out.insert(name);
  }
  return out;
}

bool Orchestrator::all_desired_serving() const {
  for (const auto& [name, desired] : desired_) {
    if (desired.completed) continue;
    if (!serving_pod(name)) return false;
  }
  return !desired_.empty();
}

void Orchestrator::append_action(const std::string& deployment,
                                 const std::string& token) {
  const Pod* pod = live_pod(deployment);
  log_.push_back({engine_.now(), pod ? pod->pod_id : deployment, deployment, token});
}

std::string Orchestrator::event_log_tsv() const {
  std::ostringstream out;
  out << "time_ms\tpod_id\tdeployment\ttransition\n";
  for (const LogEntry& entry : log_) {
    out << entry.time << '\t' << entry.pod_id << '\t' << entry.deployment << '\t'
        << entry.transition << '\n';
  }
  return out.str();
}

}  // namespace cn2f::orch
