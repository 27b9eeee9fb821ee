#pragma once

#include <deque>
#include <map>
#include <vector>

#include "sana/rng.hpp"
#include "sana/topology.hpp"

namespace sana {

struct DetectionEvent {
  TimeStep step = 0;
  NodeId node = 0;
  Edge arrival_edge;  // arrival_edge.to == node
  AttackId attack_id = 0;
  NodeId packet_src = 0;  // header claim, never used for attribution
};

struct PheromoneParams {
  double deposit = 1.0;       // Q
  double evaporation = 0.02;  // rho
  double threshold = 5.0;     // theta
  std::uint32_t quorum = 2;   // k
  double epsilon = 0.01;
  std::uint32_t memory = 4;   // m
  bool operator==(const PheromoneParams&) const = default;
};

/// Trail levels on directed edges. A deposit on (u -> v) records that
/// malicious traffic reached v from u, so mass on the edges leaving a node
/// points at that node as a source.
class PheromoneMap {
 public:
  static constexpr double kClamp = 1e-6;

  PheromoneMap() = default;
  explicit PheromoneMap(PheromoneParams params) : params_(params) {}

  void deposit(const DetectionEvent& ev);
  /// Multiplies every level by (1 - rho); levels below kClamp become 0.
  void evaporate();
  /// Zeroes every edge leaving `node`.
  void clear_outgoing(NodeId node);

  double level(Edge e) const;
  double level(NodeId from, NodeId to) const { return level(Edge{from, to}); }
  double total() const;
  /// Sum of levels over edges directed out of `node`.
  double outgoing(NodeId node) const;
  /// Attack of the heaviest outgoing edge's most recent deposit.
  std::optional<AttackId> dominant_attack(NodeId node) const;

  const std::map<Edge, double>& levels() const noexcept { return levels_; }
  const PheromoneParams& params() const noexcept { return params_; }

 private:
  PheromoneParams params_;
  std::map<Edge, double> levels_;
  std::map<Edge, AttackId> last_attack_;
};

/// Ant step weights over net.neighbors(here): (eps + level(nbr -> here)) *
/// novelty, novelty 0.1 for nodes in `memory` and 1.0 otherwise.
std::vector<double> ant_move_weights(const Network& net, const PheromoneMap& map, NodeId here,
                                     const std::deque<NodeId>& memory);

/// Samples the ant's next node from ant_move_weights.
NodeId agnosco_move(const Network& net, const PheromoneMap& map, NodeId here, const std::deque<NodeId>& memory,
                    Rng& rng);

/// Nodes with outgoing mass >= theta and at least `quorum` ants present,
/// ascending. `ants_present` is indexed by NodeId.
std::vector<NodeId> agnosco_declare(const PheromoneMap& map, const std::vector<std::uint32_t>& ants_present);

}  // namespace sana
