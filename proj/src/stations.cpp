#include "sana/stations.hpp"

#include <algorithm>
#include <bit>
#include <limits>

namespace sana {

namespace {

enum Tag : std::uint8_t { kReport = 'R', kPush = 'I', kStatus = 'M' };

void put(Bytes& out, std::uint64_t v, int width) {
  for (int i = 0; i < width; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

struct Cursor {
  const Bytes& b;
  std::size_t pos = 0;
  std::uint64_t get(int width) {
    if (b.size() - pos < static_cast<std::size_t>(width)) throw Error("MalformedMessage", "truncated message");
    std::uint64_t v = 0;
    for (int i = 0; i < width; ++i) v |= static_cast<std::uint64_t>(b[pos++]) << (8 * i);
    return v;
  }
};

}  // namespace

Bytes encode_message(const Message& msg) {
  Bytes out;
  if (const auto* r = std::get_if<InfectionReport>(&msg)) {
    out.push_back(kReport);
    put(out, r->node, 4);
    put(out, r->attack, 4);
    put(out, r->declared_at, 8);
  } else if (const auto* p = std::get_if<SignaturePush>(&msg)) {
    out.push_back(kPush);
    put(out, p->attack, 4);
    put(out, p->signature.size(), 4);
    out.insert(out.end(), p->signature.begin(), p->signature.end());
  } else {
    const auto& s = std::get<StatusBatch>(msg);
    out.push_back(kStatus);
    put(out, s.reports.size(), 4);
    for (const auto& r : s.reports) {
      put(out, r.step, 8);
      put(out, r.node, 4);
      put(out, r.occupancy, 4);
      put(out, std::bit_cast<std::uint64_t>(r.pheromone), 8);
    }
  }
  return out;
}

Message decode_message(const Bytes& bytes) {
  if (bytes.empty()) throw Error("MalformedMessage", "empty message");
  Cursor c{bytes, 1};
  Message out;
  switch (bytes[0]) {
    case kReport: {
      InfectionReport r;
      r.node = static_cast<NodeId>(c.get(4));
      r.attack = static_cast<AttackId>(c.get(4));
      r.declared_at = c.get(8);
      out = r;
      break;
    }
    case kPush: {
      SignaturePush p;
      p.attack = static_cast<AttackId>(c.get(4));
      const auto n = c.get(4);
      if (bytes.size() - c.pos < n) throw Error("MalformedMessage", "truncated signature");
      p.signature.assign(bytes.begin() + static_cast<std::ptrdiff_t>(c.pos),
                         bytes.begin() + static_cast<std::ptrdiff_t>(c.pos + n));
      c.pos += n;
      out = p;
      break;
    }
    case kStatus: {
      StatusBatch s;
      const auto n = c.get(4);
      if (n > bytes.size()) throw Error("MalformedMessage", "report count out of range");
      for (std::uint64_t i = 0; i < n; ++i) {
        StatusReport r;
        r.step = c.get(8);
        r.node = static_cast<NodeId>(c.get(4));
        r.occupancy = static_cast<std::uint32_t>(c.get(4));
        r.pheromone = std::bit_cast<double>(c.get(8));
        s.reports.push_back(r);
      }
      out = s;
      break;
    }
    default:
      throw Error("MalformedMessage", "unknown message tag");
  }
  if (c.pos != bytes.size()) throw Error("MalformedMessage", "trailing bytes");
  return out;
}

RouteDecision lymph_route(const LymphNode& station, const Substance& sub, const std::vector<StationSite>& sites,
                          const RoutingTable& routing) {
  RouteDecision d;
  if (auto payload = try_open(sub, station.held)) {
    d.type = RouteDecision::Type::Consume;
    d.payload = std::move(*payload);
    return d;
  }
  if (sub.hop_ttl == 0) return d;
  std::optional<StationSite> best;
  std::uint32_t best_dist = std::numeric_limits<std::uint32_t>::max();
  for (const auto& s : sites) {
    if (s.id == station.id) continue;
    if (std::find(sub.visited.begin(), sub.visited.end(), s.id) != sub.visited.end()) continue;
    const std::uint32_t dist = routing.distance(station.location, s.location);
    if (dist < best_dist || (dist == best_dist && s.id < best->id)) {
      best = s;
      best_dist = dist;
    }
  }
  if (!best) return d;
  d.type = RouteDecision::Type::Forward;
  d.next = *best;
  d.forwarded = sub;
  d.forwarded.hop_ttl = sub.hop_ttl - 1;
  d.forwarded.visited.push_back(station.id);
  return d;
}

ReportResponse lymph_on_report(LymphNode& station, const InfectionReport& report, TimeStep clock,
                               std::uint32_t dedup_window) {
  ReportResponse r;
  const auto key = std::make_pair(report.node, report.attack);
  const auto it = station.last_spawn.find(key);
  if (it == station.last_spawn.end() || clock >= it->second + dedup_window) {
    r.spawn_disinfector = true;
    station.last_spawn[key] = clock;
  }
  if (const auto sig = station.feed.find(report.attack); sig != station.feed.end()) r.signature = sig->second;
  return r;
}

bool cnts_due(const Cnts& station, TimeStep clock) { return station.period > 0 && (clock + 1) % station.period == 0; }

ArtificialCell make_cell(CellId id, CellKind kind, NodeId location, TimeStep born_at, Rng& rng,
                         const std::map<AttackId, Bytes>& signatures, std::size_t capacity, double target_fpr) {
  ArtificialCell c;
  c.id = id;
  c.kind = kind;
  c.location = location;
  c.born_at = born_at;
  c.receptor = gen_receptor(rng);
  if (kind == CellKind::Detector) {
    c.db.emplace(std::max<std::size_t>(capacity, 1), target_fpr);
    for (const auto& [attack, sig] : signatures) c.db->insert(sig, attack);
  }
  return c;
}

std::vector<ArtificialCell> cnts_release(const Cnts& station, TimeStep clock, CellPopulation& population, Rng& rng,
                                         std::size_t capacity, double target_fpr) {
  std::vector<ArtificialCell> out;
  if (!cnts_due(station, clock)) return out;
  auto emit = [&](CellKind kind, std::uint32_t n) {
    for (std::uint32_t i = 0; i < n; ++i) {
      out.push_back(make_cell(population.allocate_id(), kind, station.location, clock, rng, station.trained,
                              capacity, target_fpr));
    }
  };
  emit(CellKind::Detector, station.mix.detectors);
  emit(CellKind::Ant, station.mix.ants);
  emit(CellKind::Monitor, station.mix.monitors);
  return out;
}

}  // namespace sana
