#include <algorithm>
#include <string>
#include <vector>

#include "cn2f/builtin.hpp"
#include "cn2f/engine.hpp"
#include "cn2f/manifest.hpp"
#include "cn2f/orchestrator.hpp"
#include "doctest.h"
#include "fixtures.hpp"

using namespace cn2f;
using orch::Orchestrator;
using orch::PodPhase;

namespace {

struct Cluster {
  sim::Engine engine;
  TopologyDoc topology;
  Orchestrator orch;

  Cluster() : Cluster(parse_topology(fixtures::kReferenceTopology)) {}
  explicit Cluster(TopologyDoc topo)
      : engine(7), topology(std::move(topo)), orch(engine, topology) {}

  void apply_builtin(std::initializer_list<const char*> names) {
    auto registry = builtin_deployments();
    for (const char* name : names) orch.apply(registry.at(name));
  }
};

std::vector<sim::TimeMs> times_of(const Orchestrator& orch,
                                  const std::string& pod_id,
                                  const std::string& token) {
  std::vector<sim::TimeMs> out;
  for (const auto& entry : orch.log()) {
    if (entry.pod_id == pod_id && entry.transition == token)
      out.push_back(entry.time);
  }
  return out;
}

sim::TimeMs only_time_of(const Orchestrator& orch, const std::string& pod_id,
                         const std::string& token) {
  auto times = times_of(orch, pod_id, token);
  REQUIRE(times.size() == 1);
  return times[0];
}

const orch::Pod* pod(const Orchestrator& orch, const std::string& pod_id) {
  return orch.pod_by_id(pod_id);
}

}  // namespace

TEST_CASE("stack bring-up follows the gate and readiness cadence") {
  Cluster c;
  c.apply_builtin({"cassandra", "hss", "mme", "spgwc", "spgwu", "enb",
                   "mediaserver", "ue1"});
  c.engine.run_until(60'000);

  // Gateless pods initialize at creation; gated pods wait out their probes.
  CHECK(only_time_of(c.orch, "cassandra-0", "Initialized") == 0);
  CHECK(only_time_of(c.orch, "cassandra-0", "ContainersReady") == 1'000);
  CHECK(only_time_of(c.orch, "cassandra-0", "Ready") == 6'000);

  CHECK(only_time_of(c.orch, "hss-0", "Initialized") == 10'000);
  CHECK(only_time_of(c.orch, "hss-0", "ContainersReady") == 11'000);
  CHECK(only_time_of(c.orch, "hss-0", "Ready") == 16'000);

  CHECK(only_time_of(c.orch, "mme-0", "Initialized") == 20'000);
  CHECK(only_time_of(c.orch, "mme-0", "Ready") == 21'000);
  CHECK(only_time_of(c.orch, "hss-0", "STATE_OPEN") == 21'000);

  CHECK(only_time_of(c.orch, "spgwc-0", "Initialized") == 30'000);
  CHECK(only_time_of(c.orch, "spgwc-0", "Ready") == 31'000);

  CHECK(only_time_of(c.orch, "enb-0", "Initialized") == 30'000);
  CHECK(only_time_of(c.orch, "enb-0", "Ready") == 31'000);

  // The user plane needs two clean heartbeat exchanges after containers
  // come up, one at session creation and one a period later.
  CHECK(only_time_of(c.orch, "spgwu-0", "Initialized") == 40'000);
  CHECK(only_time_of(c.orch, "spgwu-0", "ContainersReady") == 41'000);
  CHECK(only_time_of(c.orch, "spgwu-0", "Ready") == 51'000);

  CHECK(only_time_of(c.orch, "mediaserver-0", "Ready") == 1'000);
  CHECK(only_time_of(c.orch, "ue1-0", "Ready") == 1'000);

  for (const char* id : {"cassandra-0", "hss-0", "mme-0", "spgwc-0", "spgwu-0",
                         "enb-0", "mediaserver-0", "ue1-0"}) {
    const orch::Pod* p = pod(c.orch, id);
    REQUIRE(p != nullptr);
    CHECK(p->phase == PodPhase::Ready);
    CHECK(p->condition_ok);
    CHECK(p->restart_count == 0);
  }
}

TEST_CASE("address assignment honors pins and fills lowest-free") {
  Cluster c;
  c.apply_builtin({"cassandra", "hss", "mme", "spgwc", "spgwu", "enb",
                   "mediaserver", "ue1"});
  CHECK(format_ipv4(*pod(c.orch, "cassandra-0")->ip) == "10.233.0.170");
  CHECK(format_ipv4(*pod(c.orch, "hss-0")->ip) == "10.233.0.219");
  CHECK(format_ipv4(*pod(c.orch, "mme-0")->ip) == "10.233.0.130");
  CHECK(format_ipv4(*pod(c.orch, "spgwc-0")->ip) == "10.233.0.140");
  CHECK(format_ipv4(*pod(c.orch, "spgwu-0")->ip) == "10.233.0.1");
  CHECK(format_ipv4(*pod(c.orch, "enb-0")->ip) == "10.233.0.2");
  CHECK(format_ipv4(*pod(c.orch, "mediaserver-0")->ip) == "10.233.0.3");
  CHECK(format_ipv4(*pod(c.orch, "ue1-0")->ip) == "10.233.0.4");
}

TEST_CASE("placement picks the smallest matching worker and skips the master") {
  Cluster c;
  DeploymentDoc doc;
  doc.name = "edgy";
  doc.vnf_kind = VnfKind::MediaServer;
  doc.node_selector = {{"environment", "edge"}};
  c.orch.apply(doc);
  CHECK(*pod(c.orch, "edgy-0")->node == "worker1");

  DeploymentDoc anywhere;
  anywhere.name = "anywhere";
  anywhere.vnf_kind = VnfKind::MediaServer;
  c.orch.apply(anywhere);
  CHECK(*pod(c.orch, "anywhere-0")->node == "worker1");

  DeploymentDoc nowhere;
  nowhere.name = "nowhere";
  nowhere.vnf_kind = VnfKind::MediaServer;
  nowhere.node_selector = {{"environment", "moon"}};
  c.orch.apply(nowhere);
  c.engine.run_until(5'000);
  const orch::Pod* p = pod(c.orch, "nowhere-0");
  CHECK(p->phase == PodPhase::Pending);
  CHECK_FALSE(p->node.has_value());
  CHECK(p->unschedulable);
  CHECK(only_time_of(c.orch, "nowhere-0", "NoMatchingNode") == 0);
}

TEST_CASE("a gate that never opens fails the pod at retries times interval") {
  Cluster c;
  c.apply_builtin({"mme"});
  c.engine.run_until(999'999);
  CHECK(pod(c.orch, "mme-0")->phase == PodPhase::Pending);
  c.engine.run_until(1'000'000);
  CHECK(pod(c.orch, "mme-0")->phase == PodPhase::Failed);
  CHECK(only_time_of(c.orch, "mme-0", "Failed") == 1'000'000);
  const orch::Pod* replacement = pod(c.orch, "mme-1");
  REQUIRE(replacement != nullptr);
  CHECK(replacement->restart_count == 1);
  CHECK(replacement->created_at == 1'000'000);
  CHECK(replacement->phase == PodPhase::Pending);
}

TEST_CASE("pool exhaustion fails the pod and freed addresses get reused") {
  TopologyDoc topo = parse_topology(fixtures::kReferenceTopology);
  topo.ip_pools.pod_cidr = *parse_cidr("10.233.0.0/30");
  Cluster c(topo);
  for (const char* name : {"m1", "m2", "m3"}) {
    DeploymentDoc doc;
    doc.name = name;
    doc.vnf_kind = VnfKind::MediaServer;
    c.orch.apply(doc);
  }
  CHECK(format_ipv4(*pod(c.orch, "m1-0")->ip) == "10.233.0.1");
  CHECK(format_ipv4(*pod(c.orch, "m2-0")->ip) == "10.233.0.2");
  CHECK(pod(c.orch, "m3-0")->phase == PodPhase::Failed);
  CHECK(pod(c.orch, "m3-1")->phase == PodPhase::Failed);

  c.engine.run_until(5'000);
  CHECK(pod(c.orch, "m1-0")->phase == PodPhase::Ready);
  // Retiring a pod releases its address to the next replacement in line.
  c.orch.complete_pod("m2-0");
  c.engine.run_until(8'000);
  const orch::Pod* winner = c.orch.live_pod("m3");
  REQUIRE(winner != nullptr);
  CHECK(format_ipv4(*winner->ip) == "10.233.0.2");
  CHECK(winner->phase == PodPhase::Ready);
  CHECK(c.orch.live_pod("m2") == nullptr);
}

TEST_CASE("conflicting or out-of-pool pins fail the pod") {
  Cluster c;
  DeploymentDoc a;
  a.name = "a";
  a.vnf_kind = VnfKind::MediaServer;
  a.static_ip = *parse_ipv4("10.233.0.50");
  c.orch.apply(a);
  DeploymentDoc b = a;
  b.name = "b";
  c.orch.apply(b);
  CHECK(pod(c.orch, "a-0")->phase == PodPhase::Initialized);
  CHECK(pod(c.orch, "b-0")->phase == PodPhase::Failed);

  DeploymentDoc outside;
  outside.name = "outside";
  outside.vnf_kind = VnfKind::MediaServer;
  outside.static_ip = *parse_ipv4("10.9.9.9");
  c.orch.apply(outside);
  CHECK(pod(c.orch, "outside-0")->phase == PodPhase::Failed);
}

TEST_CASE("gate probes see only live Ready pods on listed ports") {
  Cluster c;
  c.apply_builtin({"cassandra"});
  Ipv4 ip = *parse_ipv4("10.233.0.170");
  CHECK_FALSE(c.orch.probe(ip, 9042));
  c.engine.run_until(5'999);
  CHECK_FALSE(c.orch.probe(ip, 9042));
  c.engine.run_until(6'000);
  CHECK(c.orch.probe(ip, 9042));
  CHECK_FALSE(c.orch.probe(ip, 9043));
  CHECK_FALSE(c.orch.probe(*parse_ipv4("10.233.0.171"), 9042));
  c.orch.kill_pod("cassandra-0");
  CHECK_FALSE(c.orch.probe(ip, 9042));
}

TEST_CASE("re-applying an identical document is a no-op, a changed one replaces") {
  Cluster c;
  auto registry = builtin_deployments();
  c.orch.apply(registry.at("mme"));
  size_t pods_before = c.orch.pods().size();
  size_t log_before = c.orch.log().size();
  c.orch.apply(registry.at("mme"));
  CHECK(c.orch.pods().size() == pods_before);
  CHECK(c.orch.log().size() == log_before);

  c.engine.run_until(3'000);
  DeploymentDoc changed = registry.at("mme");
  changed.env["TZ"] = "UTC";
  c.orch.apply(changed);
  CHECK(pod(c.orch, "mme-0")->phase == PodPhase::Failed);
  const orch::Pod* fresh = pod(c.orch, "mme-1");
  REQUIRE(fresh != nullptr);
  CHECK(fresh->phase == PodPhase::Pending);
  CHECK(fresh->restart_count == 0);
}

TEST_CASE("attach walks the prerequisite chain and reports the first gap") {
  Cluster c;
  c.apply_builtin({"cassandra", "hss", "mme", "spgwc", "enb", "ue1", "ue2"});

  auto expect_reject = [&](const char* ue, const char* bs, const char* who) {
    try {
      c.orch.attach_ue(ue, bs);
      FAIL("attach should have been rejected");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::attach_rejected);
      CHECK(std::string(e.what()).find(who) != std::string::npos);
    }
  };

  c.engine.run_until(500);  // UE pod itself still starting
  expect_reject("ue1", "enb", "UE not Ready");

  c.engine.run_until(20'000);  // base station still waiting on its gate
  expect_reject("ue1", "enb", "eNB not Ready");

  c.engine.run_until(40'000);  // no user plane deployed at all
  expect_reject("ue1", "enb", "SPGW-U not Ready");

  c.apply_builtin({"spgwu"});
  c.engine.run_until(61'000);  // gate at 50s, containers 51s, two exchanges
  CHECK(pod(c.orch, "spgwu-0")->phase == PodPhase::Ready);

  c.orch.attach_ue("ue1", "enb");
  CHECK(c.orch.bearers().empty());  // attach exchange still in flight
  c.engine.run_until(61'100);
  REQUIRE(c.orch.bearers().count("ue1") == 1);
  const orch::Bearer& bearer = c.orch.bearers().at("ue1");
  CHECK(format_ipv4(bearer.ue_ip) == "172.16.0.1");
  CHECK(bearer.enb_node == "worker1");
  CHECK(bearer.spgwu_node == "worker3");
  CHECK(bearer.established_at == 61'100);
  CHECK(only_time_of(c.orch, "ue1-0", "BearerUp") == 61'100);

  // Second attach for the same UE is a no-op; a second UE takes the next
  // free subscriber address.
  c.orch.attach_ue("ue1", "enb");
  c.engine.run_until(61'200);
  CHECK(c.orch.bearers().size() == 1);
  c.orch.attach_ue("ue2", "enb");
  c.engine.run_until(61'300);
  CHECK(format_ipv4(c.orch.bearers().at("ue2").ue_ip) == "172.16.0.2");

  // Control-plane loss does not touch established bearers; losing the
  // user-plane anchor does.
  c.orch.kill_pod("mme-0");
  c.orch.kill_pod("spgwc-0");
  CHECK(c.orch.bearers().size() == 2);
  CHECK_NOTHROW(c.orch.attach_ue("ue1", "enb"));  // already attached: no-op
  c.orch.detach_ue("ue2");
  expect_reject("ue2", "enb", "MME not Ready");
  c.orch.kill_pod("spgwu-0");
  CHECK(c.orch.bearers().empty());
  CHECK(times_of(c.orch, "ue1-0", "BearerDown").size() == 1);
}

TEST_CASE("losing the subscriber database flips dependents until it returns") {
  Cluster c;
  c.apply_builtin({"cassandra", "hss", "mme", "spgwc", "spgwu", "enb"});
  c.engine.run_until(60'000);
  c.orch.kill_pod("cassandra-0");

  const orch::Pod* hss = pod(c.orch, "hss-0");
  CHECK(hss->phase == PodPhase::Ready);
  CHECK_FALSE(hss->condition_ok);
  CHECK(only_time_of(c.orch, "hss-0", "NotReady") == 60'000);
  CHECK(pod(c.orch, "mme-0")->phase == PodPhase::Ready);
  CHECK(pod(c.orch, "mme-0")->condition_ok);

  // Replacement database: containers at +1s, table population 5s more.
  c.engine.run_until(70'000);
  CHECK(only_time_of(c.orch, "cassandra-1", "Ready") == 66'000);
  CHECK(only_time_of(c.orch, "hss-0", "ReadyAgain") == 66'000);
  CHECK(pod(c.orch, "hss-0")->condition_ok);
  CHECK(pod(c.orch, "cassandra-1")->restart_count == 1);
}

TEST_CASE("missed heartbeats mark the user-plane pair until exchanges resume") {
  Cluster c;
  c.apply_builtin({"cassandra", "hss", "mme", "spgwc", "spgwu"});
  c.engine.run_until(60'000);
  c.orch.kill_pod("spgwc-0");
  c.orch.kill_pod("spgwu-0");

  c.engine.run_until(110'000);
  // Replacement control pod is up quickly but the session misses three
  // exchanges before the new user plane reports in.
  CHECK(only_time_of(c.orch, "spgwc-1", "Ready") == 71'000);
  CHECK(only_time_of(c.orch, "spgwc-1", "NotReady") == 81'000);
  CHECK(only_time_of(c.orch, "spgwc-1", "ReadyAgain") == 91'000);
  CHECK(only_time_of(c.orch, "spgwu-1", "ContainersReady") == 81'000);
  CHECK(only_time_of(c.orch, "spgwu-1", "Ready") == 101'000);
  CHECK(pod(c.orch, "spgwc-1")->condition_ok);
  CHECK(pod(c.orch, "spgwu-1")->phase == PodPhase::Ready);
}

TEST_CASE("a completed pod is terminal by intent and never replaced") {
  Cluster c;
  c.apply_builtin({"mediaserver"});
  c.engine.run_until(2'000);
  c.orch.complete_pod("mediaserver-0");
  CHECK(pod(c.orch, "mediaserver-0")->phase == PodPhase::Succeeded);
  c.engine.run_until(30'000);
  CHECK(c.orch.live_pod("mediaserver") == nullptr);
  CHECK(times_of(c.orch, "mediaserver-1", "Pending").empty());
  CHECK_THROWS_AS(c.orch.kill_pod("mediaserver-0"), Error);
}

TEST_CASE("the event log serializes as a tab-separated trace") {
  Cluster c;
  c.apply_builtin({"cassandra"});
  c.engine.run_until(6'000);
  std::string tsv = c.orch.event_log_tsv();
  CHECK(tsv.rfind("time_ms\tpod_id\tdeployment\ttransition\n", 0) == 0);
  CHECK(tsv.find("0\tcassandra-0\tcassandra\tPending\n") != std::string::npos);
  CHECK(tsv.find("6000\tcassandra-0\tcassandra\tReady\n") != std::string::npos);
}

TEST_CASE("the cluster reports converged only once every deployment serves") {
  Cluster c;
  c.apply_builtin({"cassandra", "hss", "mme", "spgwc", "spgwu", "enb",
                   "mediaserver", "ue1"});
  c.engine.run_until(50'999);
  CHECK_FALSE(c.orch.all_desired_serving());
  c.engine.run_until(51'000);
  CHECK(c.orch.all_desired_serving());
}
