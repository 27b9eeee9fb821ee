#include "sana/adversary.hpp"

#include <algorithm>
#include <string>

namespace sana {

namespace {

bool contains_any(const Bytes& haystack, const std::vector<Bytes>& needles) {
  for (const auto& n : needles) {
    if (n.empty() || n.size() > haystack.size()) continue;
    if (std::search(haystack.begin(), haystack.end(), n.begin(), n.end()) != haystack.end()) return true;
  }
  return false;
}

std::size_t draw_length(Rng& rng, const TrafficModel& model) {
  return model.payload_min + uniform_index(rng, model.payload_max - model.payload_min + 1);
}

NodeId other_node(Rng& rng, std::uint32_t n, NodeId self) {
  auto pick = static_cast<NodeId>(uniform_index(rng, n - 1));
  return pick >= self ? pick + 1 : pick;
}

}  // namespace

Bytes benign_payload(Rng& rng, std::size_t length, const std::vector<Bytes>& signatures) {
  Bytes out(length);
  do {
    for (auto& b : out) b = static_cast<std::uint8_t>(rng() & 0xff);
  } while (contains_any(out, signatures));
  return out;
}

Bytes attack_payload(Rng& rng, const AttackDef& attack, std::size_t min_length) {
  const std::size_t length = std::max(min_length, attack.signature.size());
  Bytes out(length);
  for (auto& b : out) b = static_cast<std::uint8_t>(rng() & 0xff);
  const std::size_t offset = uniform_index(rng, length - attack.signature.size() + 1);
  std::copy(attack.signature.begin(), attack.signature.end(), out.begin() + static_cast<std::ptrdiff_t>(offset));
  return out;
}

std::uint64_t draw_count(Rng& rng, double rate, RateDistribution dist) {
  if (rate <= 0.0) return 0;
  if (dist == RateDistribution::Poisson) return poisson(rng, rate);
  // Fixed: integer part every step, fractional part as a Bernoulli draw.
  const auto whole = static_cast<std::uint64_t>(rate);
  const double frac = rate - static_cast<double>(whole);
  return whole + (frac > 0.0 && bernoulli(rng, frac) ? 1 : 0);
}

std::vector<Packet> inject_background(const SimState& state, const TrafficModel& model,
                                      const std::vector<Bytes>& signatures, Rng& rng) {
  const std::uint32_t n = state.network.node_count();
  const std::uint64_t count = draw_count(rng, model.background_rate, model.distribution);
  std::vector<Packet> out;
  out.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    Packet p;
    p.src = static_cast<NodeId>(uniform_index(rng, n));
    p.dst = other_node(rng, n, p.src);
    p.cls = TrafficClass::Data;
    p.payload = benign_payload(rng, draw_length(rng, model), signatures);
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<Packet> inject_attacks(const SimState& state, const TrafficModel& model,
                                   const std::vector<AttackDef>& attacks, Rng& rng) {
  const std::uint32_t n = state.network.node_count();
  std::vector<Packet> out;
  for (const auto& a : attacks) {
    const std::uint64_t count = draw_count(rng, a.rate, model.distribution);
    for (std::uint64_t i = 0; i < count; ++i) {
      Packet p;
      p.src = static_cast<NodeId>(uniform_index(rng, n));
      p.dst = other_node(rng, n, p.src);
      p.payload = attack_payload(rng, a, draw_length(rng, model));
      p.attack = a.id;
      out.push_back(std::move(p));
    }
  }
  return out;
}

std::optional<Event> spawn_worm(SimState& state, std::vector<NodeHealth>& health, const AttackDef& attack,
                                NodeId entry) {
  if (!state.network.contains(entry)) throw Error("UnknownNode", "worm entry " + std::to_string(entry));
  if (!attack.infects) throw Error("InvalidAttack", "attack " + std::to_string(attack.id) + " does not infect");
  NodeHealth& h = health.at(entry);
  if (h.infected()) return std::nullopt;
  Event e(state.clock, h.vulnerable ? EventKind::Infect : EventKind::EntryFailed);
  e.with("node", entry).with("attack", attack.id);
  if (h.vulnerable) {
    h.infected_by = attack.id;
    h.infected_at = state.clock;
    e.with("cause", "entry");
  }
  state.log.append(e);
  return e;
}

std::vector<Packet> worm_emit(const SimState& state, const std::vector<NodeHealth>& health,
                              const AttackDef& attack, NodeId node, const TrafficModel& model, Rng& rng) {
  std::vector<Packet> out;
  if (!health.at(node).infected() || *health[node].infected_by != attack.id) return out;
  const std::uint32_t n = state.network.node_count();
  for (std::uint32_t i = 0; i < attack.fanout; ++i) {
    Packet p;
    p.src = node;
    p.dst = other_node(rng, n, node);
    p.payload = attack_payload(rng, attack, draw_length(rng, model));
    p.attack = attack.id;
    out.push_back(std::move(p));
  }
  return out;
}

std::optional<Event> on_attack_delivery(SimState& state, std::vector<NodeHealth>& health,
                                        const std::vector<AttackDef>& attacks, NodeId node, const Packet& packet) {
  if (!packet.attack) return std::nullopt;
  NodeHealth& h = health.at(node);
  if (!h.vulnerable || h.infected()) return std::nullopt;
  const auto it = std::find_if(attacks.begin(), attacks.end(), [&](const AttackDef& a) { return a.id == *packet.attack; });
  if (it == attacks.end() || !it->infects) return std::nullopt;
  h.infected_by = it->id;
  h.infected_at = state.clock;
  Event e(state.clock, EventKind::Infect);
  e.with("node", node).with("attack", it->id).with("cause", "delivery").with("via", packet.id);
  state.log.append(e);
  return e;
}

}  // namespace sana
