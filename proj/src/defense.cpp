#include "sana/defense.hpp"

#include <algorithm>
#include <string>

namespace sana {

namespace {

bool rule_matches(const FilterRule& r, const Packet& p) {
  if (!r.src.empty() && !r.src.contains(p.src)) return false;
  if (!r.dst.empty() && !r.dst.contains(p.dst)) return false;
  if (r.cls && *r.cls != p.cls) return false;
  return true;
}

}  // namespace

FilterAction filter_check(const std::vector<FilterRule>& rules, const Packet& packet) {
  for (const auto& r : rules) {
    if (rule_matches(r, packet)) return r.action;
  }
  return FilterAction::Accept;
}

std::optional<AttackId> ids_check(const StaticIds& ids, const Packet& packet) {
  for (std::size_t i = 0; i < ids.signatures.size(); ++i) {
    const auto& sig = ids.signatures[i];
    if (sig.empty() || sig.size() > packet.payload.size()) continue;
    if (std::search(packet.payload.begin(), packet.payload.end(), sig.begin(), sig.end()) != packet.payload.end()) {
      return ids.ids[i];
    }
  }
  return std::nullopt;
}

void DefenseStack::register_component(NodeId node, SecurityComponent component) {
  if (node >= nodes_.size()) throw Error("UnknownNode", "register at node " + std::to_string(node));
  if (where_.contains(component.id)) {
    throw Error("DuplicateRegistration", "component " + std::to_string(component.id) + " already registered");
  }
  where_[component.id] = node;
  const ComponentId id = component.id;
  nodes_[node].emplace(id, std::move(component));
}

void DefenseStack::deregister_component(NodeId node, ComponentId id) {
  if (node >= nodes_.size()) throw Error("UnknownNode", "deregister at node " + std::to_string(node));
  if (nodes_[node].erase(id) == 0) {
    throw Error("UnknownComponent", "component " + std::to_string(id) + " not at node " + std::to_string(node));
  }
  where_.erase(id);
}

std::vector<ComponentId> DefenseStack::list(NodeId node) const {
  std::vector<ComponentId> out;
  for (const auto& [id, c] : nodes_.at(node)) out.push_back(id);
  return out;
}

std::optional<NodeId> DefenseStack::location(ComponentId id) const {
  const auto it = where_.find(id);
  if (it == where_.end()) return std::nullopt;
  return it->second;
}

CheckResult DefenseStack::check_all(
    TimeStep step, NodeId node, NodeId from, const Packet& packet,
    const std::function<std::optional<AttackId>(CellId, const Packet&)>& cell_check) const {
  CheckResult result;
  for (const auto& [id, comp] : nodes_.at(node)) {
    std::optional<AttackId> hit;
    bool drop = false;
    switch (comp.kind) {
      case ComponentKind::PacketFilter:
        drop = filter_check(std::get<std::vector<FilterRule>>(comp.body), packet) == FilterAction::Drop;
        break;
      case ComponentKind::StaticIDS:
        if (packet.cls == TrafficClass::Data) hit = ids_check(std::get<StaticIds>(comp.body), packet);
        break;
      case ComponentKind::CellRef:
        if (packet.cls == TrafficClass::Data && cell_check) hit = cell_check(std::get<CellId>(comp.body), packet);
        break;
    }
    if (!drop && !hit) continue;
    result.outcome.destroyed = true;
    result.outcome.component = id;
    result.outcome.hint = hit;
    if (hit) result.detection = DetectionEvent{step, node, Edge{from, node}, *hit, packet.src};
    break;
  }
  return result;
}

}  // namespace sana
