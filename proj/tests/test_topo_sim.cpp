#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"

using namespace sana;

namespace {

Network path_graph(std::uint32_t n, std::uint32_t bandwidth = 4) {
  TopologySpec spec;
  spec.node_count = n;
  spec.default_bandwidth = bandwidth;
  for (NodeId i = 0; i + 1 < n; ++i) spec.links.push_back({i, i + 1, 0});
  return build_topology(spec);
}

std::string error_code(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return "";
}

Packet data_packet(NodeId src, NodeId dst, TrafficClass cls = TrafficClass::Data) {
  Packet p;
  p.src = src;
  p.dst = dst;
  p.cls = cls;
  p.payload = {1, 2, 3};
  return p;
}

}  // namespace

TEST_CASE("build_topology rejects malformed specs") {
  CHECK(error_code([] { build_topology({1, {}, 4}); }) == "TooFewNodes");
  CHECK(error_code([] { build_topology({3, {{0, 1, 0}, {1, 1, 0}}, 4}); }) == "SelfLoop");
  CHECK(error_code([] { build_topology({3, {{0, 1, 0}, {1, 0, 0}, {1, 2, 0}}, 4}); }) == "DuplicateLink");
  CHECK(error_code([] { build_topology({3, {{0, 1, 0}, {1, 5, 0}}, 4}); }) == "UnknownNode");
  CHECK(error_code([] { build_topology({4, {{0, 1, 0}, {2, 3, 0}}, 4}); }) == "DisconnectedGraph");
  CHECK(error_code([] { build_topology({2, {{0, 1, 0}}, 0}); }) == "InvalidBandwidth");
}

TEST_CASE("path and ring neighbor lists") {
  const Network p = path_graph(3);
  CHECK(p.neighbors(1) == std::vector<NodeId>{0, 2});
  CHECK(p.neighbors(0) == std::vector<NodeId>{1});

  TopologySpec ring{4, {{0, 1, 0}, {1, 2, 0}, {2, 3, 0}, {3, 0, 0}}, 4};
  const Network r = build_topology(ring);
  for (NodeId i = 0; i < 4; ++i) CHECK(r.neighbors(i).size() == 2);
  CHECK(r.bandwidth(0, 3) == 4);
  CHECK_FALSE(r.link_index(0, 2).has_value());
}

TEST_CASE("connectivity agrees with BFS on random specs") {
  Rng rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    TopologySpec spec;
    spec.node_count = 2 + static_cast<std::uint32_t>(uniform_index(rng, 10));
    for (NodeId a = 0; a < spec.node_count; ++a) {
      for (NodeId b = a + 1; b < spec.node_count; ++b) {
        if (bernoulli(rng, 0.25)) spec.links.push_back({a, b, 0});
      }
    }
    const bool expect = oracle::bfs_connected(spec.node_count, spec.links);
    CHECK(is_connected(spec) == expect);
    CHECK((error_code([&] { build_topology(spec); }) == "") == expect);
  }
}

TEST_CASE("erdos_renyi_spec yields connected graphs at the requested density") {
  Rng rng(11);
  double edges = 0;
  for (int i = 0; i < 20; ++i) {
    const auto spec = erdos_renyi_spec(50, 0.08, rng, 4);
    CHECK(is_connected(spec));
    edges += static_cast<double>(spec.links.size());
  }
  // Conditioning on connectivity biases upward slightly from 1225 * 0.08 = 98.
  CHECK(edges / 20 == doctest::Approx(100).epsilon(0.15));
}

TEST_CASE("routing distances match Bellman-Ford and next hops lie on shortest paths") {
  Rng rng(3);
  for (int g = 0; g < 200; ++g) {
    const Network net = oracle::random_small_graph(rng, 8);
    const RoutingTable rt(net);
    const auto bf = oracle::bellman_ford(net);
    for (NodeId s = 0; s < net.node_count(); ++s) {
      for (NodeId d = 0; d < net.node_count(); ++d) {
        REQUIRE(rt.distance(s, d) == bf[s][d]);
        if (s == d) {
          CHECK(rt.next_hop(s, d) == s);
          continue;
        }
        const NodeId nh = rt.next_hop(s, d);
        CHECK(net.link_index(s, nh).has_value());
        CHECK(bf[nh][d] + 1 == bf[s][d]);
        // Smallest neighbor among the shortest-path candidates.
        for (NodeId v : net.neighbors(s)) {
          if (v < nh) CHECK(bf[v][d] + 1 != bf[s][d]);
        }
      }
    }
  }
}

TEST_CASE("path graph routing walks along the line") {
  const Network net = path_graph(5);
  const RoutingTable rt(net);
  CHECK(rt.next_hop(0, 4) == 1);
  CHECK(rt.next_hop(4, 0) == 3);
  CHECK(rt.distance(0, 4) == 4);
  CHECK(rt.diameter() == 4);
}

TEST_CASE("betweenness of a star and a path") {
  TopologySpec star{5, {{0, 1, 0}, {0, 2, 0}, {0, 3, 0}, {0, 4, 0}}, 4};
  const auto b = betweenness(build_topology(star));
  CHECK(b[0] == doctest::Approx(6.0));
  for (NodeId i = 1; i < 5; ++i) CHECK(b[i] == doctest::Approx(0.0));

  const auto bp = betweenness(path_graph(5));
  CHECK(bp[2] == doctest::Approx(4.0));
  CHECK(bp[1] == doctest::Approx(3.0));
  CHECK(top_betweenness(path_graph(5), 2) == std::vector<NodeId>{2, 1});
}

TEST_CASE("node queue capacity, FIFO and eviction") {
  NodeQueue q(3);
  for (PacketId i = 0; i < 3; ++i) {
    Packet p = data_packet(0, 1);
    p.id = i;
    CHECK(q.enqueue(p).result == EnqueueResult::Accepted);
  }
  Packet extra = data_packet(0, 1);
  extra.id = 9;
  CHECK(q.enqueue(extra).result == EnqueueResult::Dropped);

  Packet imm = data_packet(0, 1, TrafficClass::Immune);
  imm.id = 10;
  const auto out = q.enqueue(imm);
  CHECK(out.result == EnqueueResult::Accepted);
  REQUIRE(out.evicted.has_value());
  CHECK(out.evicted->id == 2);
  CHECK(q.lane(TrafficClass::Data).front().id == 0);
  CHECK(q.size() == 3);

  // Full of immune packets: a further immune arrival is dropped.
  NodeQueue full(1);
  full.enqueue(imm);
  CHECK(full.enqueue(imm).result == EnqueueResult::Dropped);
}

TEST_CASE("queue fuzz against a reference model") {
  Rng rng(5);
  NodeQueue q(8);
  std::deque<PacketId> imm, dat;
  for (PacketId i = 0; i < 10000; ++i) {
    if (bernoulli(rng, 0.45) && q.size() > 0) {
      const auto cls = !imm.empty() ? TrafficClass::Immune : TrafficClass::Data;
      auto& lane = q.lane(cls);
      auto& ref = cls == TrafficClass::Immune ? imm : dat;
      REQUIRE(lane.front().id == ref.front());
      lane.pop_front();
      ref.pop_front();
      continue;
    }
    Packet p = data_packet(0, 1, bernoulli(rng, 0.3) ? TrafficClass::Immune : TrafficClass::Data);
    p.id = i;
    const auto out = q.enqueue(p);
    const bool full = imm.size() + dat.size() >= 8;
    auto& ref = p.cls == TrafficClass::Immune ? imm : dat;
    if (!full) {
      REQUIRE(out.result == EnqueueResult::Accepted);
      ref.push_back(i);
    } else if (p.cls == TrafficClass::Immune && !dat.empty()) {
      REQUIRE(out.evicted);
      REQUIRE(out.evicted->id == dat.back());
      dat.pop_back();
      imm.push_back(i);
    } else {
      REQUIRE(out.result == EnqueueResult::Dropped);
    }
    REQUIRE(q.size() <= 8);
    REQUIRE(q.size() == imm.size() + dat.size());
  }
}

TEST_CASE("packets advance one hop per step and are delivered") {
  SimState s(path_graph(4), 32, 1);
  StepHandlers none;
  inject(s, data_packet(0, 3));
  for (int i = 0; i < 2; ++i) step(s, none);
  CHECK(s.queues[2].size() == 1);
  step(s, none);
  CHECK(s.queues[2].size() == 0);
  const auto audit = conservation_audit(s.log, queued_by_class(s));
  CHECK(audit.data.delivered == 1);
  CHECK(audit.data.injected == 1);
}

TEST_CASE("bandwidth limits departures per link and immune lane goes first") {
  SimState s(path_graph(2, 2), 32, 1);
  StepHandlers none;
  for (int i = 0; i < 3; ++i) inject(s, data_packet(0, 1));
  inject(s, data_packet(0, 1, TrafficClass::Immune));
  step(s, none);
  std::vector<std::string> forwarded;
  for (const auto& e : s.log.events()) {
    if (e.kind == EventKind::Forward) forwarded.push_back(*e.find("class"));
  }
  CHECK(forwarded == std::vector<std::string>{"immune", "data"});
  CHECK(s.queues[0].size() == 2);
}

TEST_CASE("a blocked immune head holds back the data lane") {
  // Star with center 1: immune head wants link 1-0 (bandwidth 1, saturated
  // by the first immune packet); data bound for 2 waits behind it.
  TopologySpec spec{3, {{0, 1, 1}, {1, 2, 4}}, 4};
  SimState s(build_topology(spec), 32, 1);
  StepHandlers none;
  inject(s, data_packet(1, 0, TrafficClass::Immune));
  inject(s, data_packet(1, 0, TrafficClass::Immune));
  inject(s, data_packet(1, 2));
  step(s, none);
  CHECK(s.queues[1].lane(TrafficClass::Immune).size() == 1);
  CHECK(s.queues[1].lane(TrafficClass::Data).size() == 1);
}

TEST_CASE("inject validates endpoints") {
  SimState s(path_graph(3), 32, 1);
  CHECK(error_code([&] { inject(s, data_packet(1, 1)); }) == "InvalidPacket");
  CHECK(error_code([&] { inject(s, data_packet(0, 7)); }) == "InvalidPacket");
}

TEST_CASE("transport fuzz: replayed log obeys priority, FIFO, capacity and conservation") {
  Rng rng(99);
  TopologySpec spec = erdos_renyi_spec(12, 0.25, rng, 2);
  SimState s(build_topology(spec), 6, 4);
  struct Fuzz : StepHandlers {
    Rng rng{17};
    void inject(SimState& st) override {
      const auto n = st.network.node_count();
      const auto k = poisson(rng, 6.0);
      for (std::uint64_t i = 0; i < k; ++i) {
        Packet p;
        p.src = static_cast<NodeId>(uniform_index(rng, n));
        do p.dst = static_cast<NodeId>(uniform_index(rng, n));
        while (p.dst == p.src);
        p.cls = bernoulli(rng, 0.25) ? TrafficClass::Immune : TrafficClass::Data;
        sana::inject(st, std::move(p));
      }
    }
    CheckOutcome check(SimState&, NodeId, NodeId, const Packet&) override {
      if (bernoulli(rng, 0.02)) return {true, 1, std::nullopt};
      return CheckOutcome::pass();
    }
  } fuzz;
  for (int i = 0; i < 2000; ++i) step(s, fuzz);
  const auto v = oracle::replay_transport(s.log, s.network, 6);
  INFO(v.describe());
  CHECK(v.total() == 0);
  const auto audit = conservation_audit(s.log, queued_by_class(s));
  CHECK(audit.data.dropped > 0);
  CHECK(audit.data.destroyed > 0);
}

TEST_CASE("conservation audit flags a double terminal event") {
  EventLog log;
  log.append(Event(0, EventKind::Inject).with("packet", std::uint64_t{0}).with("class", "data"));
  log.append(Event(0, EventKind::Deliver).with("packet", std::uint64_t{0}));
  CHECK_NOTHROW(conservation_audit(log));
  log.append(Event(1, EventKind::Drop).with("packet", std::uint64_t{0}));
  CHECK(error_code([&] { conservation_audit(log); }) == "ConservationViolation");
}

TEST_CASE("event lines round-trip") {
  Event e(12, EventKind::Detect);
  e.with("packet", std::uint64_t{4}).with("node", std::uint32_t{3}).with("hint", std::int64_t{-1});
  CHECK(parse_event_line(e.to_line()) == e);
  EventLog log;
  log.append(e);
  log.append(Event(13, EventKind::Step));
  CHECK(EventLog::parse(log.to_text()) == log);
  CHECK(error_code([] { parse_event_line("step=x kind=Step"); }) == "ParseError");
  CHECK(error_code([] { Event(0, EventKind::Step).with("bad key", "v"); }) != "");
}
