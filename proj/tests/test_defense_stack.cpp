#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"

using namespace sana;

namespace {

Packet make(NodeId src, NodeId dst, Bytes payload = {1, 2, 3}, TrafficClass cls = TrafficClass::Data) {
  Packet p;
  p.src = src;
  p.dst = dst;
  p.cls = cls;
  p.payload = std::move(payload);
  return p;
}

StaticIds ids_for(const std::vector<Bytes>& sigs) {
  StaticIds ids{sigs, {}};
  for (std::size_t i = 0; i < sigs.size(); ++i) ids.ids.push_back(static_cast<AttackId>(i + 10));
  return ids;
}

const auto no_cells = [](CellId, const Packet&) -> std::optional<AttackId> { return std::nullopt; };

}  // namespace

TEST_CASE("filter rules: first match wins, default accept") {
  const std::vector<FilterRule> rules = {
      {{3}, {}, std::nullopt, FilterAction::Accept},
      {{3, 4}, {}, std::nullopt, FilterAction::Drop},
      {{}, {9}, TrafficClass::Immune, FilterAction::Drop},
  };
  CHECK(filter_check(rules, make(3, 1)) == FilterAction::Accept);
  CHECK(filter_check(rules, make(4, 1)) == FilterAction::Drop);
  CHECK(filter_check(rules, make(5, 9)) == FilterAction::Accept);
  CHECK(filter_check(rules, make(5, 9, {}, TrafficClass::Immune)) == FilterAction::Drop);
  CHECK(filter_check({}, make(4, 1)) == FilterAction::Accept);
}

TEST_CASE("exact IDS finds embedded signatures and nothing else") {
  const auto ids = ids_for({parse_hex("cafebabe"), parse_hex("0011")});
  CHECK(ids_check(ids, make(0, 1, parse_hex("99cafebabe77"))) == 10u);
  CHECK(ids_check(ids, make(0, 1, parse_hex("ff0011"))) == 11u);
  CHECK_FALSE(ids_check(ids, make(0, 1, parse_hex("cafeba"))).has_value());
  CHECK_FALSE(ids_check(ids, make(0, 1, {})).has_value());
}

TEST_CASE("exact IDS agrees with the exact oracle on a mixed corpus") {
  Rng rng(12);
  const std::vector<Bytes> sigs = {parse_hex("a1b2c3d4e5"), parse_hex("0f1e2d3c4b5a69")};
  const auto ids = ids_for(sigs);
  for (const auto& item : oracle::mixed_corpus(rng, sigs, 5000, 5000)) {
    CHECK(ids_check(ids, make(0, 1, item.payload)).has_value() == item.malicious);
  }
}

TEST_CASE("registration errors") {
  DefenseStack stack(3);
  stack.register_component(1, {5, ComponentKind::PacketFilter, std::vector<FilterRule>{}});
  CHECK_THROWS_WITH_AS(stack.register_component(7, {6, ComponentKind::PacketFilter, std::vector<FilterRule>{}}),
                       doctest::Contains("register"), Error);
  try {
    stack.register_component(2, {5, ComponentKind::PacketFilter, std::vector<FilterRule>{}});
    FAIL("expected DuplicateRegistration");
  } catch (const Error& e) {
    CHECK(e.code() == "DuplicateRegistration");
  }
  try {
    stack.deregister_component(2, 5);
    FAIL("expected UnknownComponent");
  } catch (const Error& e) {
    CHECK(e.code() == "UnknownComponent");
  }
  CHECK(stack.location(5) == 1u);
  stack.deregister_component(1, 5);
  CHECK_FALSE(stack.location(5).has_value());
  CHECK(stack.list(1).empty());
}

TEST_CASE("components are consulted in ascending id and the first verdict wins") {
  DefenseStack stack(2);
  const Bytes sig = parse_hex("deadbeef");
  stack.register_component(0, {20, ComponentKind::StaticIDS, ids_for({sig})});
  stack.register_component(0, {4, ComponentKind::PacketFilter,
                               std::vector<FilterRule>{{{1}, {}, std::nullopt, FilterAction::Drop}}});
  CHECK(stack.list(0) == std::vector<ComponentId>{4, 20});

  const auto by_filter = stack.check_all(3, 0, 1, make(1, 0, sig), no_cells);
  CHECK(by_filter.outcome.destroyed);
  CHECK(by_filter.outcome.component == 4);
  CHECK_FALSE(by_filter.detection.has_value());

  const auto by_ids = stack.check_all(3, 0, 1, make(2, 0, sig), no_cells);
  CHECK(by_ids.outcome.component == 20);
  REQUIRE(by_ids.detection.has_value());
  CHECK(by_ids.detection->arrival_edge == Edge{1, 0});
  CHECK(by_ids.detection->attack_id == 10);
  CHECK(by_ids.detection->packet_src == 2);

  CHECK_FALSE(stack.check_all(3, 0, 1, make(2, 0), no_cells).outcome.destroyed);
  CHECK_FALSE(stack.check_all(3, 1, 0, make(2, 1, sig), no_cells).outcome.destroyed);
}

TEST_CASE("immune packets skip payload inspection but not filters") {
  DefenseStack stack(2);
  const Bytes sig = parse_hex("deadbeef");
  stack.register_component(0, {1, ComponentKind::StaticIDS, ids_for({sig})});
  stack.register_component(0, {cell_component_id(3), ComponentKind::CellRef, CellId{3}});
  int cell_calls = 0;
  const auto cells = [&](CellId, const Packet&) -> std::optional<AttackId> {
    ++cell_calls;
    return 1;
  };
  CHECK_FALSE(stack.check_all(0, 0, 1, make(1, 0, sig, TrafficClass::Immune), cells).outcome.destroyed);
  CHECK(cell_calls == 0);
  const auto hit = stack.check_all(0, 0, 1, make(1, 0, {}), cells);
  CHECK(hit.outcome.component == cell_component_id(3));
  CHECK(cell_calls == 1);

  stack.register_component(0, {0, ComponentKind::PacketFilter,
                               std::vector<FilterRule>{{{}, {}, TrafficClass::Immune, FilterAction::Drop}}});
  CHECK(stack.check_all(0, 0, 1, make(1, 0, sig, TrafficClass::Immune), cells).outcome.destroyed);
}

TEST_CASE("detectors that know no signature never destroy packets") {
  Rng rng(13);
  ScenarioConfig c = oracle::small_scenario(rng, 8);
  c.cells.detector_knowledge = 0.0;
  c.cells.detectors = 6;
  c.worms.clear();
  c.attacks[0].rate = 1.0;
  c.stations.cnts_period = 0;
  World w(c, 2);
  w.advance(300);
  std::size_t destroyed = 0;
  for (const auto& e : w.state().log.events()) destroyed += e.kind == EventKind::Detect;
  CHECK(destroyed == 0);
}

TEST_CASE("a static IDS at every node destroys every attack packet on its first hop") {
  Rng rng(14);
  ScenarioConfig c = oracle::small_scenario(rng, 8);
  c.cells = {0, 0, 0, 0.0, 0.01, 0.5, 50};
  c.worms.clear();
  c.attacks[0].rate = 2.0;
  for (NodeId n = 0; n < c.topology.nodes; ++n) c.defense.static_ids.push_back(n);
  const auto r = run(c, 4, 300);
  CHECK(r.metrics.attack_injected > 100);
  CHECK(r.metrics.prevention_rate == doctest::Approx(1.0));
  CHECK(r.metrics.false_positive_detections == 0);
}

TEST_CASE("a drop-all filter on a cut vertex stops transit traffic") {
  ScenarioConfig c;
  c.topology.model = TopologyModel::Explicit;
  c.topology.nodes = 3;
  c.topology.links = {{0, 1, 0}, {1, 2, 0}};
  c.traffic.background_rate = 3;
  c.cells = {0, 0, 0, 0.0, 0.01, 0.5, 50};
  c.stations.lymph_nodes = {0};
  c.stations.cnts = {0};
  c.stations.cnts_period = 0;
  c.defense.filters = {{1, {{{}, {}, TrafficClass::Data, FilterAction::Drop}}}};
  const auto r = run(c, 1, 200);
  std::map<std::int64_t, std::int64_t> src;
  std::size_t filtered = 0;
  for (const auto& e : r.log.events()) {
    if (e.kind == EventKind::Inject) src[*e.get_int("packet")] = *e.get_int("src");
    // Only packets that start at node 1 ever leave it.
    if (e.kind == EventKind::Forward && *e.get_int("from") == 1) CHECK(src[*e.get_int("packet")] == 1);
    if (e.kind == EventKind::Deliver) CHECK(*e.get_int("node") != 1);
    if (e.kind == EventKind::Detect) {
      CHECK(*e.get_int("node") == 1);
      CHECK_FALSE(e.has("hint"));
      ++filtered;
    }
  }
  CHECK(filtered > 100);
  CHECK(r.metrics.false_positive_detections == 0);
}
