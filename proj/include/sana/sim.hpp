#pragma once

#include <map>
#include <optional>
#include <vector>

#include "sana/event_log.hpp"
#include "sana/node_queue.hpp"
#include "sana/rng.hpp"
#include "sana/topology.hpp"

namespace sana {

struct SimState {
  TimeStep clock = 0;
  Network network;
  RoutingTable routing;
  std::vector<NodeQueue> queues;
  Rng rng;
  EventLog log;
  PacketId next_packet_id = 0;

  SimState(Network net, std::size_t queue_capacity, std::uint64_t seed);
};

/// Verdict of the per-node security check on an arriving packet.
struct CheckOutcome {
  bool destroyed = false;
  ComponentId component = 0;
  std::optional<AttackId> hint;

  static CheckOutcome pass() { return {}; }
};

/// Callbacks invoked by step() in its fixed phase order. The defaults do
/// nothing, which gives a bare transport simulator.
class StepHandlers {
 public:
  virtual ~StepHandlers() = default;
  virtual void inject(SimState&) {}
  virtual CheckOutcome check(SimState&, NodeId /*node*/, NodeId /*from*/, const Packet&) {
    return CheckOutcome::pass();
  }
  virtual void on_deliver(SimState&, NodeId /*node*/, Packet&&) {}
  virtual void emit(SimState&) {}
  virtual void cells(SimState&) {}
  virtual void evaporate(SimState&) {}
  virtual void stations(SimState&) {}
  virtual void sample(SimState&) {}
};

/// Logs Admit, Drop or Evict+Admit. Throws Error("UnknownNode").
EnqueueResult enqueue(SimState& state, NodeId node, Packet packet);

/// Assigns an id, stamps injected_at, logs Inject and enqueues at src.
/// Throws Error("InvalidPacket") when src == dst or either is unknown.
PacketId inject(SimState& state, Packet packet);

/// Executes one time step:
///   1 adversary injection, 2 per-node dequeue (Immune lane first, FIFO,
///   bandwidth per outgoing link), 3 arrival checks then delivery or
///   admission, 4 infected-node emission, 5 cell actions, 6 evaporation,
///   7 station actions, 8 sampling. The clock advances by one.
void step(SimState& state, StepHandlers& handlers);

struct ClassCounts {
  std::uint64_t injected = 0;
  std::uint64_t delivered = 0;
  std::uint64_t dropped = 0;   // overflow drops and evictions
  std::uint64_t destroyed = 0;  // destroyed by a security check
  std::uint64_t in_flight = 0;
  bool operator==(const ClassCounts&) const = default;
};

struct AuditReport {
  ClassCounts immune;
  ClassCounts data;
};

/// Checks injected = delivered + dropped + destroyed + in-flight per class,
/// and that every packet has one Inject and at most one terminal event with
/// nothing after it. When `queued_at_end` is given, in-flight must match.
/// Throws Error("ConservationViolation") naming the first offending packet.
AuditReport conservation_audit(const EventLog& log,
                               std::optional<std::map<TrafficClass, std::uint64_t>> queued_at_end = std::nullopt);

std::map<TrafficClass, std::uint64_t> queued_by_class(const SimState& state);

}  // namespace sana
