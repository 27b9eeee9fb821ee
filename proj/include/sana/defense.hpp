#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <variant>
#include <vector>

#include "sana/packet.hpp"
#include "sana/pheromone.hpp"
#include "sana/signature_db.hpp"
#include "sana/sim.hpp"

namespace sana {

enum class FilterAction { Drop, Accept };

/// Header-only match. Empty sets match anything.
struct FilterRule {
  std::set<NodeId> src;
  std::set<NodeId> dst;
  std::optional<TrafficClass> cls;
  FilterAction action = FilterAction::Accept;
  bool operator==(const FilterRule&) const = default;
};

/// First matching rule wins; Accept when nothing matches.
FilterAction filter_check(const std::vector<FilterRule>& rules, const Packet& packet);

struct StaticIds {
  std::vector<Bytes> signatures;
  std::vector<AttackId> ids;  // parallel to signatures
};

/// Exact substring scan; the attack id of the first matching signature.
std::optional<AttackId> ids_check(const StaticIds& ids, const Packet& packet);

enum class ComponentKind { PacketFilter, StaticIDS, CellRef };

struct SecurityComponent {
  ComponentId id = 0;
  ComponentKind kind = ComponentKind::PacketFilter;
  std::variant<std::vector<FilterRule>, StaticIds, CellId> body;
};

/// Component ids at or above this value belong to cells.
inline constexpr ComponentId kCellComponentBase = ComponentId{1} << 32;
inline ComponentId cell_component_id(CellId cell) { return kCellComponentBase + cell; }

struct CheckResult {
  CheckOutcome outcome;
  std::optional<DetectionEvent> detection;  // signature hits only
};

/// Per-node registry of security components.
class DefenseStack {
 public:
  explicit DefenseStack(std::uint32_t node_count = 0) : nodes_(node_count) {}

  /// Throws Error("UnknownNode") or Error("DuplicateRegistration").
  void register_component(NodeId node, SecurityComponent component);
  /// Throws Error("UnknownNode") or Error("UnknownComponent").
  void deregister_component(NodeId node, ComponentId id);
  /// Ascending component ids at `node`.
  std::vector<ComponentId> list(NodeId node) const;
  std::optional<NodeId> location(ComponentId id) const;

  /// Consults the node's components in ascending id; the first Malicious
  /// verdict destroys the packet. Immune packets skip payload inspection.
  /// `cell_check` resolves CellRef components.
  CheckResult check_all(TimeStep step, NodeId node, NodeId from, const Packet& packet,
                        const std::function<std::optional<AttackId>(CellId, const Packet&)>& cell_check) const;

 private:
  std::vector<std::map<ComponentId, SecurityComponent>> nodes_;
  std::map<ComponentId, NodeId> where_;
};

}  // namespace sana
