#pragma once

#include <optional>
#include <vector>

#include "sana/sim.hpp"

namespace sana {

struct AttackDef {
  AttackId id = 0;
  Bytes signature;
  bool infects = true;
  std::uint32_t fanout = 2;  // packets per step per infected node
  double rate = 0.0;         // standalone attack packets per step, injected at random sources
  bool operator==(const AttackDef&) const = default;
};

struct NodeHealth {
  bool vulnerable = true;
  std::optional<AttackId> infected_by;
  std::optional<TimeStep> infected_at;
  bool infected() const noexcept { return infected_by.has_value(); }
};

enum class RateDistribution { Fixed, Poisson };

struct TrafficModel {
  double background_rate = 20.0;
  RateDistribution distribution = RateDistribution::Poisson;
  std::uint32_t payload_min = 16;
  std::uint32_t payload_max = 48;
  bool operator==(const TrafficModel&) const = default;
};

/// Random bytes of the given length that contain none of `signatures`.
Bytes benign_payload(Rng& rng, std::size_t length, const std::vector<Bytes>& signatures);

/// Random padding with the signature embedded at a random offset.
Bytes attack_payload(Rng& rng, const AttackDef& attack, std::size_t min_length);

/// Number of packets for one step under the model's distribution.
std::uint64_t draw_count(Rng& rng, double rate, RateDistribution dist);

/// Data-class packets with distinct uniform src != dst and benign payloads.
/// Packets are returned un-injected (id unassigned).
std::vector<Packet> inject_background(const SimState& state, const TrafficModel& model,
                                      const std::vector<Bytes>& signatures, Rng& rng);

/// Standalone attack packets for attacks with rate > 0.
std::vector<Packet> inject_attacks(const SimState& state, const TrafficModel& model,
                                   const std::vector<AttackDef>& attacks, Rng& rng);

/// Installs a worm at `entry` when it is vulnerable, logging Infect, or
/// logs EntryFailed. A repeat spawn on an infected node returns nullopt.
std::optional<Event> spawn_worm(SimState& state, std::vector<NodeHealth>& health, const AttackDef& attack,
                                NodeId entry);

/// `fanout` attack packets from an infected node to uniformly random other
/// nodes; empty when the node is clean.
std::vector<Packet> worm_emit(const SimState& state, const std::vector<NodeHealth>& health,
                              const AttackDef& attack, NodeId node, const TrafficModel& model, Rng& rng);

/// An attack packet reached its destination. Vulnerable clean nodes become
/// infected; everything else absorbs it.
std::optional<Event> on_attack_delivery(SimState& state, std::vector<NodeHealth>& health,
                                        const std::vector<AttackDef>& attacks, NodeId node, const Packet& packet);

}  // namespace sana
