#include "sana/engine.hpp"

#include <algorithm>
#include <string>

namespace sana {

namespace {

enum Stream : std::uint64_t { kTopology = 0, kSetup, kTraffic, kWorm, kCells, kKeys };

Network make_network(const ScenarioConfig& config, std::uint64_t seed) {
  const auto& t = config.topology;
  if (t.model == TopologyModel::Explicit) {
    TopologySpec spec;
    spec.node_count = t.nodes;
    spec.links = t.links;
    spec.default_bandwidth = t.bandwidth;
    return build_topology(spec);
  }
  Rng rng(t.seed ? *t.seed : derive_seed(seed, kTopology));
  return build_topology(erdos_renyi_spec(t.nodes, t.edge_probability, rng, t.bandwidth));
}

}  // namespace

World::World(const ScenarioConfig& config, std::uint64_t seed, std::size_t min_stations)
    : config_((validate_scenario(config, min_stations), config)),
      state_(make_network(config, seed), config.queue_capacity, seed),
      traffic_rng_(derive_seed(seed, kTraffic)),
      worm_rng_(derive_seed(seed, kWorm)),
      cell_rng_(derive_seed(seed, kCells)),
      key_rng_(derive_seed(seed, kKeys)),
      pheromone_(config.agnosco),
      defense_(state_.network.node_count()) {
  const std::uint32_t n = state_.network.node_count();
  Rng setup(derive_seed(seed, kSetup));

  health_.resize(n);
  for (auto& h : health_) h.vulnerable = bernoulli(setup, config_.vulnerability);

  for (const auto& a : config_.attacks) {
    signature_list_.push_back(a.signature);
    signatures_[a.id] = a.signature;
  }

  ComponentId next_component = 1;
  for (const auto& f : config_.defense.filters) {
    defense_.register_component(f.node, {next_component++, ComponentKind::PacketFilter, f.rules});
  }
  ids_nodes_ = config_.defense.static_ids;
  for (NodeId hub : top_betweenness(state_.network, config_.defense.ids_top_betweenness)) {
    if (std::find(ids_nodes_.begin(), ids_nodes_.end(), hub) == ids_nodes_.end()) ids_nodes_.push_back(hub);
  }
  StaticIds ids;
  for (const auto& a : config_.attacks) {
    ids.signatures.push_back(a.signature);
    ids.ids.push_back(a.id);
  }
  for (NodeId node : ids_nodes_) defense_.register_component(node, {next_component++, ComponentKind::StaticIDS, ids});

  lymph_shared_ = gen_receptor(key_rng_);
  admin_ = gen_receptor(key_rng_);
  StationId sid = 0;
  for (NodeId loc : config_.stations.lymph_nodes) {
    LymphNode l;
    l.id = sid++;
    l.location = loc;
    l.held = {lymph_shared_.private_part, gen_receptor(key_rng_).private_part};
    l.feed = signatures_;
    lymph_sites_.push_back({l.id, l.location});
    lymph_.push_back(std::move(l));
  }
  for (NodeId loc : config_.stations.cnts) {
    Cnts c;
    c.id = sid++;
    c.location = loc;
    c.period = config_.stations.cnts_period;
    c.mix = config_.stations.release;
    cnts_.push_back(std::move(c));
  }
  substance_ttl_ = config_.stations.substance_ttl != 0 ? config_.stations.substance_ttl
                                                       : 4 * std::max<std::uint32_t>(state_.routing.diameter(), 1);

  place_initial_cells(setup);
}

void World::place_initial_cells(Rng& rng) {
  const std::uint32_t n = state_.network.node_count();
  auto place = [&](CellKind kind, std::uint32_t count) {
    for (std::uint32_t i = 0; i < count; ++i) {
      std::map<AttackId, Bytes> known;
      const auto location = static_cast<NodeId>(uniform_index(rng, n));
      if (kind == CellKind::Detector) {
        for (const auto& [id, sig] : signatures_) {
          if (bernoulli(rng, config_.cells.detector_knowledge)) known[id] = sig;
        }
      }
      add_cell(make_cell(population_.allocate_id(), kind, location, 0, rng, known, signatures_.size(),
                         config_.cells.target_fpr),
               "initial");
    }
  };
  place(CellKind::Detector, config_.cells.detectors);
  place(CellKind::Ant, config_.cells.ants);
  place(CellKind::Monitor, config_.cells.monitors);
}

void World::advance(TimeStep steps) {
  for (TimeStep i = 0; i < steps; ++i) step(state_, *this);
}

const AttackDef* World::attack(AttackId id) const {
  for (const auto& a : config_.attacks) {
    if (a.id == id) return &a;
  }
  return nullptr;
}

void World::add_cell(ArtificialCell cell, std::string_view cause) {
  Event e(state_.clock, EventKind::Spawn);
  e.with("cell", cell.id)
      .with("kind", std::string(to_string(cell.kind)))
      .with("node", cell.location)
      .with("cause", std::string(cause));
  if (cell.kind == CellKind::Disinfector) e.with("target", cell.target);
  state_.log.append(std::move(e));
  if (cell.kind == CellKind::Detector) {
    defense_.register_component(cell.location, {cell_component_id(cell.id), ComponentKind::CellRef, cell.id});
  }
  population_.spawn(std::move(cell));
}

void World::retire_cell(CellId id, std::string_view reason) {
  const ArtificialCell& c = population_.at(id);
  if (c.kind == CellKind::Detector) defense_.deregister_component(c.location, cell_component_id(id));
  state_.log.append(Event(state_.clock, EventKind::Retire).with("cell", id).with("reason", std::string(reason)));
  population_.retire(id);
}

void World::move_cell(ArtificialCell& cell, NodeId to) {
  if (to == cell.location) return;
  state_.log.append(Event(state_.clock, EventKind::CellMove)
                        .with("cell", cell.id)
                        .with("kind", std::string(to_string(cell.kind)))
                        .with("from", cell.location)
                        .with("to", to));
  if (cell.kind == CellKind::Detector) {
    defense_.deregister_component(cell.location, cell_component_id(cell.id));
    defense_.register_component(to, {cell_component_id(cell.id), ComponentKind::CellRef, cell.id});
  }
  if (cell.kind == CellKind::Ant) {
    cell.memory.push_front(cell.location);
    while (cell.memory.size() > config_.agnosco.memory) cell.memory.pop_back();
  }
  cell.location = to;
}

void World::send_substance(NodeId from, NodeId to, const Message& msg, std::vector<PublicToken> required,
                           std::string_view label) {
  Substance sub = seal(encode_message(msg), std::move(required), substance_ttl_, from);
  Event e(state_.clock, EventKind::SubstanceSend);
  e.with("from", from).with("to", to).with("message", std::string(label));
  if (from == to) {
    state_.log.append(std::move(e));
    deliver_substance(to, std::move(sub));
    return;
  }
  Packet p;
  p.src = from;
  p.dst = to;
  p.cls = TrafficClass::Immune;
  p.payload = encode_substance(sub);
  e.with("carrier", state_.next_packet_id);
  state_.log.append(std::move(e));
  sana::inject(state_, std::move(p));
}

void World::inject(SimState& state) {
  for (const auto& w : config_.worms) {
    if (w.at != state.clock) continue;
    NodeId entry = 0;
    if (w.entry) {
      entry = *w.entry;
    } else {
      std::vector<NodeId> candidates;
      for (NodeId i = 0; i < health_.size(); ++i) {
        if (health_[i].vulnerable && !health_[i].infected()) candidates.push_back(i);
      }
      entry = candidates.empty() ? static_cast<NodeId>(uniform_index(worm_rng_, health_.size()))
                                 : candidates[uniform_index(worm_rng_, candidates.size())];
    }
    spawn_worm(state, health_, *attack(w.attack), entry);
  }
  for (auto& p : inject_background(state, config_.traffic, signature_list_, traffic_rng_)) {
    sana::inject(state, std::move(p));
  }
  for (auto& p : inject_attacks(state, config_.traffic, config_.attacks, traffic_rng_)) {
    sana::inject(state, std::move(p));
  }
}

CheckOutcome World::check(SimState& state, NodeId node, NodeId from, const Packet& packet) {
  const auto result = defense_.check_all(state.clock, node, from, packet,
                                         [this](CellId id, const Packet& p) -> std::optional<AttackId> {
                                           const auto& cell = population_.at(id);
                                           if (!cell.db || cell.db->signature_count() == 0) return std::nullopt;
                                           return cell.db->scan(p.payload);
                                         });
  if (result.detection) pheromone_.deposit(*result.detection);
  return result.outcome;
}

void World::on_deliver(SimState& state, NodeId node, Packet&& packet) {
  if (packet.cls == TrafficClass::Data) {
    on_attack_delivery(state, health_, config_.attacks, node, packet);
    return;
  }
  Substance sub;
  try {
    sub = decode_substance(packet.payload);
  } catch (const Error&) {
    state.log.append(Event(state.clock, EventKind::SubstanceExpire).with("node", node).with("reason", "malformed"));
    return;
  }
  deliver_substance(node, std::move(sub));
}

void World::deliver_substance(NodeId node, Substance sub) {
  if (node == config_.stations.administrator) {
    if (auto payload = try_open(sub, {admin_.private_part})) {
      state_.log.append(Event(state_.clock, EventKind::SubstanceOpen).with("node", node).with("by", "admin"));
      const Message msg = decode_message(*payload);
      if (const auto* batch = std::get_if<StatusBatch>(&msg)) {
        admin_reports_.insert(admin_reports_.end(), batch->reports.begin(), batch->reports.end());
      }
      return;
    }
  }
  for (auto& l : lymph_) {
    if (l.location == node) {
      l.inbox.push_back(std::move(sub));
      return;
    }
  }
  state_.log.append(Event(state_.clock, EventKind::SubstanceExpire).with("node", node).with("reason", "no_station"));
}

void World::emit(SimState& state) {
  for (NodeId n = 0; n < health_.size(); ++n) {
    if (!health_[n].infected()) continue;
    const AttackDef* a = attack(*health_[n].infected_by);
    if (!a) continue;
    for (auto& p : worm_emit(state, health_, *a, n, config_.traffic, worm_rng_)) sana::inject(state, std::move(p));
  }
}

void World::apply_actions(ArtificialCell& cell, std::vector<Action> actions) {
  for (auto& a : actions) {
    switch (a.type) {
      case Action::Type::Move:
        move_cell(cell, a.node);
        break;
      case Action::Type::Flush:
        send_substance(cell.location, config_.stations.administrator, StatusBatch{std::move(a.reports)},
                       {admin_.public_part}, "status");
        break;
      case Action::Type::Disinfect: {
        disinfect_apply(state_, health_, cell, a.node, config_.patch_on_disinfect);
        pheromone_.clear_outgoing(a.node);
        outstanding_.erase(a.node);
        retire_cell(cell.id, "done");
        return;
      }
    }
  }
}

void World::cells(SimState& state) {
  CellContext ctx{state.network, state.routing, pheromone_, state.queues, state.clock,
                  CellKnobs{config_.cells.p_move, config_.cells.monitor_flush, config_.agnosco.memory}};
  population_.begin_pass();
  for (CellId id : population_.pass_ids()) {
    if (!population_.is_alive(id)) continue;
    ArtificialCell& cell = population_.at(id);
    apply_actions(cell, cell_step(cell, ctx, cell_rng_));
  }
  declare_infections();
  population_.end_pass();
}

void World::declare_infections() {
  std::vector<std::uint32_t> ants(state_.network.node_count(), 0);
  for (CellId id : population_.pass_ids()) {
    if (!population_.is_alive(id)) continue;
    const auto& c = population_.at(id);
    if (c.kind == CellKind::Ant) ++ants[c.location];
  }
  for (NodeId node : agnosco_declare(pheromone_, ants)) {
    if (const auto it = outstanding_.find(node);
        it != outstanding_.end() && state_.clock < it->second + config_.stations.dedup_window) {
      continue;
    }
    const auto attack_id = pheromone_.dominant_attack(node);
    if (!attack_id) continue;
    outstanding_[node] = state_.clock;
    state_.log.append(Event(state_.clock, EventKind::Identify)
                          .with("node", node)
                          .with("attack", *attack_id)
                          .with("ants", ants[node]));
    const StationSite* nearest = nullptr;
    for (const auto& s : lymph_sites_) {
      if (!nearest || state_.routing.distance(node, s.location) < state_.routing.distance(node, nearest->location)) {
        nearest = &s;
      }
    }
    send_substance(node, nearest->location, InfectionReport{node, *attack_id, state_.clock},
                   {lymph_shared_.public_part}, "report");
  }
}

void World::evaporate(SimState&) { pheromone_.evaporate(); }

void World::handle_report(LymphNode& station, const InfectionReport& report) {
  const ReportResponse r = lymph_on_report(station, report, state_.clock, config_.stations.dedup_window);
  if (r.spawn_disinfector) {
    ArtificialCell d = make_cell(population_.allocate_id(), CellKind::Disinfector, station.location, state_.clock,
                                 key_rng_, {}, 0, config_.cells.target_fpr);
    d.target = report.node;
    d.target_attack = report.attack;
    station.known_cells.insert(d.id);
    add_cell(std::move(d), "lymph");
  }
  if (!r.signature) return;
  // Local immunization around the reported node.
  for (const auto& [id, cell] : population_.cells()) {
    if (cell.kind != CellKind::Detector || !population_.is_alive(id)) continue;
    if (state_.routing.distance(cell.location, report.node) > config_.stations.immunization_radius) continue;
    if (cell.db->has_tag(report.attack)) continue;
    const Substance sub = seal(encode_message(SignaturePush{report.attack, *r.signature}), {cell.receptor.public_part},
                               substance_ttl_, station.location);
    const auto opened = try_open(sub, {cell.receptor.private_part});
    if (!opened) continue;
    const auto push = std::get<SignaturePush>(decode_message(*opened));
    population_.at(id).db->insert(push.signature, push.attack);
    state_.log.append(Event(state_.clock, EventKind::Immunize)
                          .with("cell", id)
                          .with("attack", push.attack)
                          .with("station", station.id));
  }
  for (auto& c : cnts_) c.trained[report.attack] = *r.signature;
}

void World::run_lymph(LymphNode& station) {
  while (!station.inbox.empty()) {
    Substance sub = std::move(station.inbox.front());
    station.inbox.pop_front();
    RouteDecision d = lymph_route(station, sub, lymph_sites_, state_.routing);
    switch (d.type) {
      case RouteDecision::Type::Consume: {
        state_.log.append(
            Event(state_.clock, EventKind::SubstanceOpen).with("node", station.location).with("by", station.id));
        Message msg;
        try {
          msg = decode_message(d.payload);
        } catch (const Error&) {
          break;
        }
        if (const auto* report = std::get_if<InfectionReport>(&msg)) handle_report(station, *report);
        break;
      }
      case RouteDecision::Type::Forward: {
        Event e(state_.clock, EventKind::SubstanceSend);
        e.with("from", station.location).with("to", d.next.location).with("message", "forward");
        if (station.location == d.next.location) {
          state_.log.append(std::move(e));
          deliver_substance(d.next.location, std::move(d.forwarded));
          break;
        }
        Packet p;
        p.src = station.location;
        p.dst = d.next.location;
        p.cls = TrafficClass::Immune;
        p.payload = encode_substance(d.forwarded);
        e.with("carrier", state_.next_packet_id);
        state_.log.append(std::move(e));
        sana::inject(state_, std::move(p));
        break;
      }
      case RouteDecision::Type::Expire:
        state_.log.append(
            Event(state_.clock, EventKind::SubstanceExpire).with("node", station.location).with("reason", "ttl"));
        break;
    }
  }
}

void World::run_cnts(Cnts& station) {
  for (auto& cell : cnts_release(station, state_.clock, population_, key_rng_, signatures_.size(),
                                 config_.cells.target_fpr)) {
    add_cell(std::move(cell), "cnts");
  }
}

void World::enforce_caps() {
  const std::pair<CellKind, std::uint32_t> caps[] = {{CellKind::Detector, config_.cells.detectors},
                                                      {CellKind::Ant, config_.cells.ants},
                                                      {CellKind::Monitor, config_.cells.monitors}};
  for (const auto& [kind, cap] : caps) {
    const auto ids = population_.oldest_first(kind);
    for (std::size_t i = 0; i + cap < ids.size(); ++i) retire_cell(ids[i], "cap");
  }
}

void World::stations(SimState&) {
  // Lymph nodes hold ids [0, L), CNTS [L, L + C).
  for (auto& l : lymph_) run_lymph(l);
  bool released = false;
  for (auto& c : cnts_) {
    if (cnts_due(c, state_.clock)) released = true;
    run_cnts(c);
  }
  if (released) enforce_caps();
}

RunResult run(const ScenarioConfig& config, std::uint64_t seed, std::optional<TimeStep> steps) {
  World world(config, seed);
  world.advance(steps.value_or(config.horizon));
  RunResult out;
  out.audit = conservation_audit(world.state().log, queued_by_class(world.state()));
  out.metrics = compute_metrics(world.state().log);
  out.log = std::move(world.state().log);
  return out;
}

}  // namespace sana
