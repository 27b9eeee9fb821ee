#include "sana/sim.hpp"

#include <algorithm>
#include <string>
#include <unordered_map>

namespace sana {

namespace {

Event packet_event(TimeStep step, EventKind kind, const Packet& p) {
  Event e(step, kind);
  e.with("packet", p.id);
  return e;
}

struct Transfer {
  NodeId from;
  NodeId to;
  Packet packet;
};

}  // namespace

SimState::SimState(Network net, std::size_t queue_capacity, std::uint64_t seed)
    : network(std::move(net)), routing(network), rng(seed) {
  queues.assign(network.node_count(), NodeQueue(queue_capacity));
}

EnqueueResult enqueue(SimState& state, NodeId node, Packet packet) {
  if (!state.network.contains(node)) throw Error("UnknownNode", "enqueue at node " + std::to_string(node));
  const PacketId id = packet.id;
  const TrafficClass cls = packet.cls;
  auto out = state.queues[node].enqueue(std::move(packet));
  if (out.result == EnqueueResult::Dropped) {
    state.log.append(Event(state.clock, EventKind::Drop)
                         .with("packet", id)
                         .with("node", node)
                         .with("class", std::string(to_string(cls)))
                         .with("reason", "overflow"));
    return out.result;
  }
  if (out.evicted) {
    state.log.append(Event(state.clock, EventKind::Evict)
                         .with("packet", out.evicted->id)
                         .with("node", node)
                         .with("class", std::string(to_string(out.evicted->cls)))
                         .with("by", id));
  }
  state.log.append(Event(state.clock, EventKind::Admit).with("packet", id).with("node", node));
  return out.result;
}

PacketId inject(SimState& state, Packet packet) {
  if (!state.network.contains(packet.src) || !state.network.contains(packet.dst) || packet.src == packet.dst) {
    throw Error("InvalidPacket", "packet " + std::to_string(packet.src) + "->" + std::to_string(packet.dst));
  }
  packet.id = state.next_packet_id++;
  packet.injected_at = state.clock;
  packet.hop_count = 0;
  Event e(state.clock, EventKind::Inject);
  e.with("packet", packet.id)
      .with("src", packet.src)
      .with("dst", packet.dst)
      .with("class", std::string(to_string(packet.cls)));
  if (packet.attack) e.with("attack", *packet.attack);
  state.log.append(std::move(e));
  const PacketId id = packet.id;
  const NodeId src = packet.src;
  enqueue(state, src, std::move(packet));
  return id;
}

void step(SimState& state, StepHandlers& handlers) {
  state.log.append(Event(state.clock, EventKind::Step));

  handlers.inject(state);

  // Phase 2: dequeue. Arrivals are buffered so a packet makes one hop per step.
  std::vector<Transfer> transfers;
  std::vector<std::uint32_t> budget;
  for (NodeId u = 0; u < state.network.node_count(); ++u) {
    const auto& nbrs = state.network.neighbors(u);
    budget.assign(nbrs.size(), 0);
    for (std::size_t i = 0; i < nbrs.size(); ++i) budget[i] = state.network.bandwidth(u, nbrs[i]);
    auto slot = [&](NodeId v) {
      return static_cast<std::size_t>(std::lower_bound(nbrs.begin(), nbrs.end(), v) - nbrs.begin());
    };
    auto drain = [&](TrafficClass cls) {
      auto& lane = state.queues[u].lane(cls);
      while (!lane.empty()) {
        const NodeId next = state.routing.next_hop(u, lane.front().dst);
        const std::size_t i = slot(next);
        if (budget[i] == 0) break;  // head-of-line: FIFO is strict within a lane
        --budget[i];
        Packet p = std::move(lane.front());
        lane.pop_front();
        ++p.hop_count;
        state.log.append(packet_event(state.clock, EventKind::Forward, p)
                             .with("from", u)
                             .with("to", next)
                             .with("class", std::string(to_string(p.cls))));
        transfers.push_back({u, next, std::move(p)});
      }
    };
    drain(TrafficClass::Immune);
    if (state.queues[u].lane(TrafficClass::Immune).empty()) drain(TrafficClass::Data);
  }

  // Phase 3: every arrival is checked before it is delivered or queued.
  for (auto& t : transfers) {
    const CheckOutcome verdict = handlers.check(state, t.to, t.from, t.packet);
    if (verdict.destroyed) {
      Event e = packet_event(state.clock, EventKind::Detect, t.packet);
      e.with("node", t.to)
          .with("from", t.from)
          .with("class", std::string(to_string(t.packet.cls)))
          .with("component", verdict.component);
      if (verdict.hint) e.with("hint", *verdict.hint);
      if (t.packet.attack) e.with("attack", *t.packet.attack);
      state.log.append(std::move(e));
      continue;
    }
    if (t.packet.dst == t.to) {
      Event e = packet_event(state.clock, EventKind::Deliver, t.packet);
      e.with("node", t.to).with("class", std::string(to_string(t.packet.cls)));
      if (t.packet.attack) e.with("attack", *t.packet.attack);
      state.log.append(std::move(e));
      handlers.on_deliver(state, t.to, std::move(t.packet));
      continue;
    }
    enqueue(state, t.to, std::move(t.packet));
  }

  handlers.emit(state);
  handlers.cells(state);
  handlers.evaporate(state);
  handlers.stations(state);
  handlers.sample(state);
  ++state.clock;
}

std::map<TrafficClass, std::uint64_t> queued_by_class(const SimState& state) {
  std::map<TrafficClass, std::uint64_t> out{{TrafficClass::Immune, 0}, {TrafficClass::Data, 0}};
  for (const auto& q : state.queues) {
    out[TrafficClass::Immune] += q.lane(TrafficClass::Immune).size();
    out[TrafficClass::Data] += q.lane(TrafficClass::Data).size();
  }
  return out;
}

AuditReport conservation_audit(const EventLog& log,
                               std::optional<std::map<TrafficClass, std::uint64_t>> queued_at_end) {
  struct Track {
    TrafficClass cls;
    bool terminated = false;
  };
  std::unordered_map<std::int64_t, Track> packets;
  AuditReport report;
  auto counts = [&](TrafficClass c) -> ClassCounts& { return c == TrafficClass::Immune ? report.immune : report.data; };
  auto violation = [](std::int64_t id, const std::string& why) {
    throw Error("ConservationViolation", "packet " + std::to_string(id) + ": " + why);
  };

  for (const auto& e : log.events()) {
    const auto id = e.get_int("packet");
    if (!id) continue;
    if (e.kind == EventKind::Inject) {
      const std::string* cls = e.find("class");
      if (!cls) violation(*id, "Inject without class");
      const TrafficClass c = *cls == "immune" ? TrafficClass::Immune : TrafficClass::Data;
      if (!packets.emplace(*id, Track{c}).second) violation(*id, "injected twice");
      ++counts(c).injected;
      continue;
    }
    const auto it = packets.find(*id);
    if (it == packets.end()) violation(*id, std::string(to_string(e.kind)) + " before Inject");
    if (it->second.terminated) violation(*id, std::string(to_string(e.kind)) + " after terminal event");
    switch (e.kind) {
      case EventKind::Deliver:
        it->second.terminated = true;
        ++counts(it->second.cls).delivered;
        break;
      case EventKind::Drop:
      case EventKind::Evict:
        it->second.terminated = true;
        ++counts(it->second.cls).dropped;
        break;
      case EventKind::Detect:
        it->second.terminated = true;
        ++counts(it->second.cls).destroyed;
        break;
      default:
        break;
    }
  }
  for (ClassCounts* c : {&report.immune, &report.data}) {
    c->in_flight = c->injected - c->delivered - c->dropped - c->destroyed;
  }
  if (queued_at_end) {
    for (auto [cls, queued] : *queued_at_end) {
      if (counts(cls).in_flight != queued) {
        throw Error("ConservationViolation", std::string(to_string(cls)) + " in-flight " +
                                                 std::to_string(counts(cls).in_flight) + " but " +
                                                 std::to_string(queued) + " queued");
      }
    }
  }
  return report;
}

}  // namespace sana
