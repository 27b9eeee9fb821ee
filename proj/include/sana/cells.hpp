#pragma once

#include <deque>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "sana/adversary.hpp"
#include "sana/node_queue.hpp"
#include "sana/pheromone.hpp"
#include "sana/receptor.hpp"
#include "sana/signature_db.hpp"

namespace sana {

enum class CellKind { Detector, Ant, Monitor, Disinfector };

std::string_view to_string(CellKind kind);

struct StatusReport {
  TimeStep step = 0;
  NodeId node = 0;
  std::uint32_t occupancy = 0;
  double pheromone = 0.0;  // outgoing trail mass at the node
  bool operator==(const StatusReport&) const = default;
};

struct ArtificialCell {
  CellId id = 0;
  CellKind kind = CellKind::Detector;
  NodeId location = 0;
  Receptor receptor;
  TimeStep born_at = 0;

  std::optional<CompressedSignatureDb> db;  // Detector
  std::deque<NodeId> memory;                // Ant: most recent first
  NodeId target = 0;                        // Disinfector
  std::optional<AttackId> target_attack;    // Disinfector
  std::vector<StatusReport> buffer;         // Monitor
};

struct CellKnobs {
  double p_move = 0.5;
  std::uint32_t monitor_flush = 50;
  std::uint32_t ant_memory = 4;
};

/// Read-only view of the world a cell acts in.
struct CellContext {
  const Network& network;
  const RoutingTable& routing;
  const PheromoneMap& pheromone;
  const std::vector<NodeQueue>& queues;
  TimeStep clock = 0;
  CellKnobs knobs;
};

struct Action {
  enum class Type { Move, Disinfect, Flush };
  Type type = Type::Move;
  NodeId node = 0;  // Move: destination; Disinfect: target
  std::vector<StatusReport> reports;
};

/// Appends the node's status to the monitor's buffer. Monitors never see
/// infection state.
StatusReport monitor_collect(ArtificialCell& cell, const CellContext& ctx);

/// One step of behavior for `cell`, as actions for the engine to apply.
/// Detectors move to a uniform neighbor with probability p_move; ants
/// follow agnosco_move; monitors collect, move, and flush every
/// monitor_flush reports; disinfectors walk the shortest path and disinfect
/// on arrival.
std::vector<Action> cell_step(ArtificialCell& cell, const CellContext& ctx, Rng& rng);

/// Clears the target's infection (Disinfect) or logs FalseDisinfect when it
/// is clean. `patch` closes the security hole as well.
Event disinfect_apply(SimState& state, std::vector<NodeHealth>& health, const ArtificialCell& cell, NodeId node,
                      bool patch);

/// Ordered cell registry with deferred mutation: spawns made during a pass
/// join after it, retirements take effect immediately for is_alive() and
/// are erased when the pass ends.
class CellPopulation {
 public:
  CellId allocate_id() { return next_id_++; }

  void spawn(ArtificialCell cell);
  void retire(CellId id);
  bool is_alive(CellId id) const;

  void begin_pass();
  void end_pass();
  /// Ids alive at begin_pass(), ascending.
  const std::vector<CellId>& pass_ids() const noexcept { return pass_ids_; }

  ArtificialCell& at(CellId id) { return cells_.at(id); }
  const ArtificialCell& at(CellId id) const { return cells_.at(id); }
  const std::map<CellId, ArtificialCell>& cells() const noexcept { return cells_; }
  std::size_t count(CellKind kind) const;
  /// Alive cells of `kind`, oldest (born_at, then id) first.
  std::vector<CellId> oldest_first(CellKind kind) const;

 private:
  std::map<CellId, ArtificialCell> cells_;
  std::vector<ArtificialCell> pending_;
  std::set<CellId> retired_;
  std::vector<CellId> pass_ids_;
  bool in_pass_ = false;
  CellId next_id_ = 0;
};

}  // namespace sana
