#include "sana/pheromone.hpp"

#include <algorithm>

namespace sana {

void PheromoneMap::deposit(const DetectionEvent& ev) {
  levels_[ev.arrival_edge] += params_.deposit;
  last_attack_[ev.arrival_edge] = ev.attack_id;
}

void PheromoneMap::evaporate() {
  const double keep = 1.0 - params_.evaporation;
  for (auto it = levels_.begin(); it != levels_.end();) {
    it->second *= keep;
    if (it->second < kClamp) {
      last_attack_.erase(it->first);
      it = levels_.erase(it);
    } else {
      ++it;
    }
  }
}

void PheromoneMap::clear_outgoing(NodeId node) {
  auto it = levels_.lower_bound(Edge{node, 0});
  while (it != levels_.end() && it->first.from == node) {
    last_attack_.erase(it->first);
    it = levels_.erase(it);
  }
}

double PheromoneMap::level(Edge e) const {
  const auto it = levels_.find(e);
  return it == levels_.end() ? 0.0 : it->second;
}

double PheromoneMap::total() const {
  double sum = 0.0;
  for (const auto& [e, v] : levels_) sum += v;
  return sum;
}

double PheromoneMap::outgoing(NodeId node) const {
  double sum = 0.0;
  for (auto it = levels_.lower_bound(Edge{node, 0}); it != levels_.end() && it->first.from == node; ++it) {
    sum += it->second;
  }
  return sum;
}

std::optional<AttackId> PheromoneMap::dominant_attack(NodeId node) const {
  std::optional<Edge> best;
  double best_level = 0.0;
  for (auto it = levels_.lower_bound(Edge{node, 0}); it != levels_.end() && it->first.from == node; ++it) {
    if (it->second > best_level) {
      best_level = it->second;
      best = it->first;
    }
  }
  if (!best) return std::nullopt;
  const auto a = last_attack_.find(*best);
  if (a == last_attack_.end()) return std::nullopt;
  return a->second;
}

std::vector<double> ant_move_weights(const Network& net, const PheromoneMap& map, NodeId here,
                                     const std::deque<NodeId>& memory) {
  const auto& nbrs = net.neighbors(here);
  std::vector<double> w(nbrs.size());
  for (std::size_t i = 0; i < nbrs.size(); ++i) {
    const bool recent = std::find(memory.begin(), memory.end(), nbrs[i]) != memory.end();
    w[i] = (map.params().epsilon + map.level(nbrs[i], here)) * (recent ? 0.1 : 1.0);
  }
  return w;
}

NodeId agnosco_move(const Network& net, const PheromoneMap& map, NodeId here, const std::deque<NodeId>& memory,
                    Rng& rng) {
  const auto& nbrs = net.neighbors(here);
  if (nbrs.size() == 1) return nbrs.front();
  const auto w = ant_move_weights(net, map, here, memory);
  return nbrs[weighted_index(rng, w)];
}

std::vector<NodeId> agnosco_declare(const PheromoneMap& map, const std::vector<std::uint32_t>& ants_present) {
  std::vector<NodeId> out;
  for (NodeId n = 0; n < ants_present.size(); ++n) {
    if (ants_present[n] >= map.params().quorum && map.outgoing(n) >= map.params().threshold) out.push_back(n);
  }
  return out;
}

}  // namespace sana
