#include "sana/cells.hpp"

#include <algorithm>
#include <string>

namespace sana {

std::string_view to_string(CellKind kind) {
  switch (kind) {
    case CellKind::Detector:
      return "detector";
    case CellKind::Ant:
      return "ant";
    case CellKind::Monitor:
      return "monitor";
    case CellKind::Disinfector:
      return "disinfector";
  }
  return "unknown";
}

StatusReport monitor_collect(ArtificialCell& cell, const CellContext& ctx) {
  StatusReport r;
  r.step = ctx.clock;
  r.node = cell.location;
  r.occupancy = static_cast<std::uint32_t>(ctx.queues.at(cell.location).size());
  r.pheromone = ctx.pheromone.outgoing(cell.location);
  cell.buffer.push_back(r);
  return r;
}

namespace {

NodeId random_neighbor(const Network& net, NodeId here, Rng& rng) {
  const auto& nbrs = net.neighbors(here);
  return nbrs[uniform_index(rng, nbrs.size())];
}

}  // namespace

std::vector<Action> cell_step(ArtificialCell& cell, const CellContext& ctx, Rng& rng) {
  std::vector<Action> actions;
  switch (cell.kind) {
    case CellKind::Detector:
      // Checking happens on arrival through the defense stack.
      if (bernoulli(rng, ctx.knobs.p_move)) {
        actions.push_back({Action::Type::Move, random_neighbor(ctx.network, cell.location, rng), {}});
      }
      break;
    case CellKind::Ant:
      actions.push_back(
          {Action::Type::Move, agnosco_move(ctx.network, ctx.pheromone, cell.location, cell.memory, rng), {}});
      break;
    case CellKind::Monitor:
      monitor_collect(cell, ctx);
      actions.push_back({Action::Type::Move, random_neighbor(ctx.network, cell.location, rng), {}});
      if (ctx.knobs.monitor_flush > 0 && cell.buffer.size() >= ctx.knobs.monitor_flush) {
        actions.push_back({Action::Type::Flush, actions.back().node, std::move(cell.buffer)});
        cell.buffer.clear();
      }
      break;
    case CellKind::Disinfector:
      if (cell.location != cell.target) {
        const NodeId next = ctx.routing.next_hop(cell.location, cell.target);
        actions.push_back({Action::Type::Move, next, {}});
        if (next != cell.target) break;
      }
      actions.push_back({Action::Type::Disinfect, cell.target, {}});
      break;
  }
  return actions;
}

Event disinfect_apply(SimState& state, std::vector<NodeHealth>& health, const ArtificialCell& cell, NodeId node,
                      bool patch) {
  NodeHealth& h = health.at(node);
  if (!h.infected()) {
    Event e(state.clock, EventKind::FalseDisinfect);
    e.with("node", node).with("cell", cell.id);
    state.log.append(e);
    return e;
  }
  Event e(state.clock, EventKind::Disinfect);
  e.with("node", node).with("cell", cell.id).with("attack", *h.infected_by);
  h.infected_by.reset();
  h.infected_at.reset();
  if (patch) h.vulnerable = false;
  state.log.append(e);
  return e;
}

void CellPopulation::spawn(ArtificialCell cell) {
  if (in_pass_) {
    pending_.push_back(std::move(cell));
    return;
  }
  const CellId id = cell.id;
  cells_.emplace(id, std::move(cell));
}

void CellPopulation::retire(CellId id) {
  if (!cells_.contains(id)) throw Error("UnknownCell", "retire of cell " + std::to_string(id));
  if (in_pass_) {
    retired_.insert(id);
    return;
  }
  cells_.erase(id);
}

bool CellPopulation::is_alive(CellId id) const { return cells_.contains(id) && !retired_.contains(id); }

void CellPopulation::begin_pass() {
  in_pass_ = true;
  pass_ids_.clear();
  for (const auto& [id, c] : cells_) pass_ids_.push_back(id);
}

void CellPopulation::end_pass() {
  in_pass_ = false;
  for (CellId id : retired_) cells_.erase(id);
  retired_.clear();
  for (auto& c : pending_) {
    const CellId id = c.id;
    cells_.emplace(id, std::move(c));
  }
  pending_.clear();
  pass_ids_.clear();
}

std::size_t CellPopulation::count(CellKind kind) const {
  std::size_t n = 0;
  for (const auto& [id, c] : cells_) {
    if (c.kind == kind && !retired_.contains(id)) ++n;
  }
  for (const auto& c : pending_) {
    if (c.kind == kind) ++n;
  }
  return n;
}

std::vector<CellId> CellPopulation::oldest_first(CellKind kind) const {
  std::vector<const ArtificialCell*> alive;
  for (const auto& [id, c] : cells_) {
    if (c.kind == kind && !retired_.contains(id)) alive.push_back(&c);
  }
  std::sort(alive.begin(), alive.end(), [](const ArtificialCell* a, const ArtificialCell* b) {
    return std::tie(a->born_at, a->id) < std::tie(b->born_at, b->id);
  });
  std::vector<CellId> out;
  for (const auto* c : alive) out.push_back(c->id);
  return out;
}

}  // namespace sana
