#include "sana/scenario.hpp"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <set>
#include <sstream>

namespace sana {

namespace {

[[noreturn]] void invalid(const std::string& field, const std::string& why) {
  throw Error("ValidationError", field + ": " + why);
}

std::string line_of(const YAML::Node& n) { return "line " + std::to_string(n.Mark().line + 1); }

void require_map(const YAML::Node& n, const std::string& field) {
  if (!n.IsMap()) invalid(field, "expected a mapping (" + line_of(n) + ")");
}

void check_keys(const YAML::Node& n, const std::string& field, const std::set<std::string>& allowed) {
  require_map(n, field);
  for (const auto& kv : n) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.contains(key)) {
      invalid(field.empty() ? key : field + "." + key, "unknown key (" + line_of(kv.first) + ")");
    }
  }
}

template <typename T>
T scalar(const YAML::Node& n, const std::string& field) {
  try {
    return n.as<T>();
  } catch (const YAML::Exception&) {
    invalid(field, "bad value (" + line_of(n) + ")");
  }
}

template <typename T>
void read(const YAML::Node& parent, const char* key, T& out, const std::string& field) {
  if (const auto n = parent[key]) out = scalar<T>(n, field.empty() ? key : field + "." + key);
}

std::vector<NodeId> node_list(const YAML::Node& n, const std::string& field) {
  if (!n.IsSequence()) invalid(field, "expected a list (" + line_of(n) + ")");
  std::vector<NodeId> out;
  for (std::size_t i = 0; i < n.size(); ++i) out.push_back(scalar<NodeId>(n[i], field + "." + std::to_string(i)));
  return out;
}

TopologyConfig parse_topology(const YAML::Node& n) {
  check_keys(n, "topology", {"model", "nodes", "edge_probability", "bandwidth", "seed", "links"});
  TopologyConfig t;
  if (const auto m = n["model"]) {
    const auto s = scalar<std::string>(m, "topology.model");
    if (s == "erdos_renyi") t.model = TopologyModel::ErdosRenyi;
    else if (s == "explicit") t.model = TopologyModel::Explicit;
    else invalid("topology.model", "expected erdos_renyi or explicit");
  }
  read(n, "nodes", t.nodes, "topology");
  read(n, "edge_probability", t.edge_probability, "topology");
  read(n, "bandwidth", t.bandwidth, "topology");
  if (const auto s = n["seed"]; s && !s.IsNull()) t.seed = scalar<std::uint64_t>(s, "topology.seed");
  if (const auto links = n["links"]) {
    if (!links.IsSequence()) invalid("topology.links", "expected a list");
    for (std::size_t i = 0; i < links.size(); ++i) {
      const auto field = "topology.links." + std::to_string(i);
      const auto l = links[i];
      if (!l.IsSequence() || (l.size() != 2 && l.size() != 3)) invalid(field, "expected [a, b] or [a, b, bandwidth]");
      LinkSpec spec{scalar<NodeId>(l[0], field), scalar<NodeId>(l[1], field), 0};
      if (l.size() == 3) spec.bandwidth = scalar<std::uint32_t>(l[2], field);
      t.links.push_back(spec);
    }
  }
  return t;
}

TrafficModel parse_traffic(const YAML::Node& n) {
  check_keys(n, "traffic", {"background_rate", "distribution", "payload_min", "payload_max"});
  TrafficModel m;
  read(n, "background_rate", m.background_rate, "traffic");
  if (const auto d = n["distribution"]) {
    const auto s = scalar<std::string>(d, "traffic.distribution");
    if (s == "poisson") m.distribution = RateDistribution::Poisson;
    else if (s == "fixed") m.distribution = RateDistribution::Fixed;
    else invalid("traffic.distribution", "expected poisson or fixed");
  }
  read(n, "payload_min", m.payload_min, "traffic");
  read(n, "payload_max", m.payload_max, "traffic");
  return m;
}

std::vector<AttackDef> parse_attacks(const YAML::Node& n) {
  if (!n.IsSequence()) invalid("attacks", "expected a list");
  std::vector<AttackDef> out;
  for (std::size_t i = 0; i < n.size(); ++i) {
    const auto field = "attacks." + std::to_string(i);
    check_keys(n[i], field, {"id", "signature", "infects", "fanout", "rate"});
    AttackDef a;
    read(n[i], "id", a.id, field);
    std::string hex;
    read(n[i], "signature", hex, field);
    try {
      a.signature = parse_hex(hex);
    } catch (const Error&) {
      invalid(field + ".signature", "not a hex string");
    }
    read(n[i], "infects", a.infects, field);
    read(n[i], "fanout", a.fanout, field);
    read(n[i], "rate", a.rate, field);
    out.push_back(std::move(a));
  }
  return out;
}

std::vector<WormConfig> parse_worms(const YAML::Node& n) {
  if (!n.IsSequence()) invalid("worms", "expected a list");
  std::vector<WormConfig> out;
  for (std::size_t i = 0; i < n.size(); ++i) {
    const auto field = "worms." + std::to_string(i);
    check_keys(n[i], field, {"attack", "at", "entry"});
    WormConfig w;
    read(n[i], "attack", w.attack, field);
    read(n[i], "at", w.at, field);
    if (const auto e = n[i]["entry"]) {
      if (e.IsScalar() && e.Scalar() == "random") w.entry.reset();
      else w.entry = scalar<NodeId>(e, field + ".entry");
    }
    out.push_back(w);
  }
  return out;
}

CellConfig parse_cells(const YAML::Node& n) {
  check_keys(n, "cells",
             {"detectors", "ants", "monitors", "detector_knowledge", "target_fpr", "p_move", "monitor_flush"});
  CellConfig c;
  read(n, "detectors", c.detectors, "cells");
  read(n, "ants", c.ants, "cells");
  read(n, "monitors", c.monitors, "cells");
  read(n, "detector_knowledge", c.detector_knowledge, "cells");
  read(n, "target_fpr", c.target_fpr, "cells");
  read(n, "p_move", c.p_move, "cells");
  read(n, "monitor_flush", c.monitor_flush, "cells");
  return c;
}

PheromoneParams parse_agnosco(const YAML::Node& n) {
  check_keys(n, "agnosco", {"deposit", "evaporation", "threshold", "quorum", "epsilon", "memory"});
  PheromoneParams p;
  read(n, "deposit", p.deposit, "agnosco");
  read(n, "evaporation", p.evaporation, "agnosco");
  read(n, "threshold", p.threshold, "agnosco");
  read(n, "quorum", p.quorum, "agnosco");
  read(n, "epsilon", p.epsilon, "agnosco");
  read(n, "memory", p.memory, "agnosco");
  return p;
}

StationConfig parse_stations(const YAML::Node& n) {
  check_keys(n, "stations",
             {"lymph_nodes", "cnts", "administrator", "cnts_period", "release", "immunization_radius",
              "dedup_window", "substance_ttl"});
  StationConfig s;
  if (const auto l = n["lymph_nodes"]) s.lymph_nodes = node_list(l, "stations.lymph_nodes");
  if (const auto c = n["cnts"]) s.cnts = node_list(c, "stations.cnts");
  read(n, "administrator", s.administrator, "stations");
  read(n, "cnts_period", s.cnts_period, "stations");
  if (const auto r = n["release"]) {
    check_keys(r, "stations.release", {"detectors", "ants", "monitors"});
    read(r, "detectors", s.release.detectors, "stations.release");
    read(r, "ants", s.release.ants, "stations.release");
    read(r, "monitors", s.release.monitors, "stations.release");
  }
  read(n, "immunization_radius", s.immunization_radius, "stations");
  read(n, "dedup_window", s.dedup_window, "stations");
  read(n, "substance_ttl", s.substance_ttl, "stations");
  return s;
}

std::set<NodeId> node_set(const YAML::Node& n, const std::string& field) {
  const auto v = node_list(n, field);
  return {v.begin(), v.end()};
}

DefenseConfig parse_defense(const YAML::Node& n) {
  check_keys(n, "defense", {"static_ids", "ids_top_betweenness", "filters"});
  DefenseConfig d;
  if (const auto s = n["static_ids"]) d.static_ids = node_list(s, "defense.static_ids");
  read(n, "ids_top_betweenness", d.ids_top_betweenness, "defense");
  if (const auto f = n["filters"]) {
    if (!f.IsSequence()) invalid("defense.filters", "expected a list");
    for (std::size_t i = 0; i < f.size(); ++i) {
      const auto field = "defense.filters." + std::to_string(i);
      check_keys(f[i], field, {"node", "rules"});
      FilterPlacement p;
      read(f[i], "node", p.node, field);
      if (const auto rules = f[i]["rules"]) {
        if (!rules.IsSequence()) invalid(field + ".rules", "expected a list");
        for (std::size_t j = 0; j < rules.size(); ++j) {
          const auto rf = field + ".rules." + std::to_string(j);
          check_keys(rules[j], rf, {"src", "dst", "class", "action"});
          FilterRule r;
          if (const auto s = rules[j]["src"]) r.src = node_set(s, rf + ".src");
          if (const auto s = rules[j]["dst"]) r.dst = node_set(s, rf + ".dst");
          if (const auto c = rules[j]["class"]) {
            const auto v = scalar<std::string>(c, rf + ".class");
            if (v == "immune") r.cls = TrafficClass::Immune;
            else if (v == "data") r.cls = TrafficClass::Data;
            else invalid(rf + ".class", "expected immune or data");
          }
          const auto a = scalar<std::string>(rules[j]["action"], rf + ".action");
          if (a == "drop") r.action = FilterAction::Drop;
          else if (a == "accept") r.action = FilterAction::Accept;
          else invalid(rf + ".action", "expected drop or accept");
          p.rules.push_back(std::move(r));
        }
      }
      d.filters.push_back(std::move(p));
    }
  }
  return d;
}

ScenarioConfig from_yaml(const YAML::Node& root) {
  check_keys(root, "",
             {"name", "horizon", "seed", "queue_capacity", "topology", "traffic", "attacks", "worms", "vulnerability",
              "patch_on_disinfect", "cells", "agnosco", "stations", "defense"});
  ScenarioConfig c;
  read(root, "name", c.name, "");
  read(root, "horizon", c.horizon, "");
  read(root, "seed", c.seed, "");
  read(root, "queue_capacity", c.queue_capacity, "");
  if (const auto n = root["topology"]) c.topology = parse_topology(n);
  if (const auto n = root["traffic"]) c.traffic = parse_traffic(n);
  if (const auto n = root["attacks"]) c.attacks = parse_attacks(n);
  if (const auto n = root["worms"]) c.worms = parse_worms(n);
  read(root, "vulnerability", c.vulnerability, "");
  read(root, "patch_on_disinfect", c.patch_on_disinfect, "");
  if (const auto n = root["cells"]) c.cells = parse_cells(n);
  if (const auto n = root["agnosco"]) c.agnosco = parse_agnosco(n);
  if (const auto n = root["stations"]) c.stations = parse_stations(n);
  if (const auto n = root["defense"]) c.defense = parse_defense(n);
  return c;
}

YAML::Node flow_list(const std::vector<NodeId>& v) {
  YAML::Node n(YAML::NodeType::Sequence);
  n.SetStyle(YAML::EmitterStyle::Flow);
  for (auto x : v) n.push_back(x);
  return n;
}

YAML::Node to_yaml(const ScenarioConfig& c) {
  YAML::Node root;
  root["name"] = c.name;
  root["horizon"] = c.horizon;
  root["seed"] = c.seed;
  root["queue_capacity"] = c.queue_capacity;

  YAML::Node t;
  t["model"] = c.topology.model == TopologyModel::ErdosRenyi ? "erdos_renyi" : "explicit";
  t["nodes"] = c.topology.nodes;
  t["edge_probability"] = c.topology.edge_probability;
  t["bandwidth"] = c.topology.bandwidth;
  if (c.topology.seed) t["seed"] = *c.topology.seed;
  else t["seed"] = YAML::Node(YAML::NodeType::Null);
  YAML::Node links(YAML::NodeType::Sequence);
  for (const auto& l : c.topology.links) {
    YAML::Node e(YAML::NodeType::Sequence);
    e.SetStyle(YAML::EmitterStyle::Flow);
    e.push_back(l.a);
    e.push_back(l.b);
    if (l.bandwidth != 0) e.push_back(l.bandwidth);
    links.push_back(e);
  }
  t["links"] = links;
  root["topology"] = t;

  YAML::Node tr;
  tr["background_rate"] = c.traffic.background_rate;
  tr["distribution"] = c.traffic.distribution == RateDistribution::Poisson ? "poisson" : "fixed";
  tr["payload_min"] = c.traffic.payload_min;
  tr["payload_max"] = c.traffic.payload_max;
  root["traffic"] = tr;

  YAML::Node attacks(YAML::NodeType::Sequence);
  for (const auto& a : c.attacks) {
    YAML::Node n;
    n["id"] = a.id;
    n["signature"] = to_hex(a.signature);
    n["infects"] = a.infects;
    n["fanout"] = a.fanout;
    n["rate"] = a.rate;
    attacks.push_back(n);
  }
  root["attacks"] = attacks;

  YAML::Node worms(YAML::NodeType::Sequence);
  for (const auto& w : c.worms) {
    YAML::Node n;
    n["attack"] = w.attack;
    n["at"] = w.at;
    if (w.entry) n["entry"] = *w.entry;
    else n["entry"] = "random";
    worms.push_back(n);
  }
  root["worms"] = worms;
  root["vulnerability"] = c.vulnerability;
  root["patch_on_disinfect"] = c.patch_on_disinfect;

  YAML::Node cells;
  cells["detectors"] = c.cells.detectors;
  cells["ants"] = c.cells.ants;
  cells["monitors"] = c.cells.monitors;
  cells["detector_knowledge"] = c.cells.detector_knowledge;
  cells["target_fpr"] = c.cells.target_fpr;
  cells["p_move"] = c.cells.p_move;
  cells["monitor_flush"] = c.cells.monitor_flush;
  root["cells"] = cells;

  YAML::Node ag;
  ag["deposit"] = c.agnosco.deposit;
  ag["evaporation"] = c.agnosco.evaporation;
  ag["threshold"] = c.agnosco.threshold;
  ag["quorum"] = c.agnosco.quorum;
  ag["epsilon"] = c.agnosco.epsilon;
  ag["memory"] = c.agnosco.memory;
  root["agnosco"] = ag;

  YAML::Node st;
  st["lymph_nodes"] = flow_list(c.stations.lymph_nodes);
  st["cnts"] = flow_list(c.stations.cnts);
  st["administrator"] = c.stations.administrator;
  st["cnts_period"] = c.stations.cnts_period;
  YAML::Node rel;
  rel["detectors"] = c.stations.release.detectors;
  rel["ants"] = c.stations.release.ants;
  rel["monitors"] = c.stations.release.monitors;
  root["stations"] = st;
  root["stations"]["release"] = rel;
  root["stations"]["immunization_radius"] = c.stations.immunization_radius;
  root["stations"]["dedup_window"] = c.stations.dedup_window;
  root["stations"]["substance_ttl"] = c.stations.substance_ttl;

  YAML::Node d;
  d["static_ids"] = flow_list(c.defense.static_ids);
  d["ids_top_betweenness"] = c.defense.ids_top_betweenness;
  YAML::Node filters(YAML::NodeType::Sequence);
  for (const auto& f : c.defense.filters) {
    YAML::Node fn;
    fn["node"] = f.node;
    YAML::Node rules(YAML::NodeType::Sequence);
    for (const auto& r : f.rules) {
      YAML::Node rn;
      rn["src"] = flow_list({r.src.begin(), r.src.end()});
      rn["dst"] = flow_list({r.dst.begin(), r.dst.end()});
      if (r.cls) rn["class"] = *r.cls == TrafficClass::Immune ? "immune" : "data";
      rn["action"] = r.action == FilterAction::Drop ? "drop" : "accept";
      rules.push_back(rn);
    }
    fn["rules"] = rules;
    filters.push_back(fn);
  }
  d["filters"] = filters;
  root["defense"] = d;
  return root;
}

}  // namespace

Bytes parse_hex(const std::string& hex) {
  if (hex.size() % 2 != 0) throw Error("InvalidHex", "odd-length hex string");
  auto nibble = [](char ch) -> int {
    if (ch >= '0' && ch <= '9') return ch - '0';
    if (ch >= 'a' && ch <= 'f') return ch - 'a' + 10;
    if (ch >= 'A' && ch <= 'F') return ch - 'A' + 10;
    throw Error("InvalidHex", std::string("bad hex digit '") + ch + "'");
  };
  Bytes out;
  for (std::size_t i = 0; i < hex.size(); i += 2) {
    out.push_back(static_cast<std::uint8_t>(nibble(hex[i]) << 4 | nibble(hex[i + 1])));
  }
  return out;
}

std::string to_hex(const Bytes& bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  for (auto b : bytes) {
    out += kDigits[b >> 4];
    out += kDigits[b & 0xf];
  }
  return out;
}

void validate_scenario(const ScenarioConfig& c, std::size_t min_stations) {
  if (c.queue_capacity < 1) invalid("queue_capacity", "must be >= 1");
  const auto& t = c.topology;
  if (t.nodes < 2) invalid("topology.nodes", "need at least 2 nodes");
  if (t.bandwidth < 1) invalid("topology.bandwidth", "must be >= 1");
  if (t.model == TopologyModel::ErdosRenyi && !(t.edge_probability > 0.0 && t.edge_probability <= 1.0)) {
    invalid("topology.edge_probability", "must lie in (0, 1]");
  }
  if (t.model == TopologyModel::Explicit && t.links.empty()) invalid("topology.links", "explicit topology needs links");
  auto check_node = [&](NodeId n, const std::string& field) {
    if (n >= t.nodes) invalid(field, "node " + std::to_string(n) + " out of range");
  };
  if (!(c.traffic.background_rate >= 0.0)) invalid("traffic.background_rate", "must be >= 0");
  if (c.traffic.payload_min < 1 || c.traffic.payload_max < c.traffic.payload_min) {
    invalid("traffic.payload_min", "need 1 <= payload_min <= payload_max");
  }
  std::set<AttackId> ids;
  for (std::size_t i = 0; i < c.attacks.size(); ++i) {
    const auto& a = c.attacks[i];
    const auto field = "attacks." + std::to_string(i);
    if (a.signature.empty()) invalid(field + ".signature", "must be non-empty");
    if (!ids.insert(a.id).second) invalid(field + ".id", "duplicate attack id");
    if (!(a.rate >= 0.0)) invalid(field + ".rate", "must be >= 0");
    if (a.signature.size() > c.traffic.payload_max) invalid(field + ".signature", "longer than payload_max");
  }
  for (std::size_t i = 0; i < c.worms.size(); ++i) {
    const auto field = "worms." + std::to_string(i);
    const auto& w = c.worms[i];
    const auto it = std::find_if(c.attacks.begin(), c.attacks.end(), [&](const AttackDef& a) { return a.id == w.attack; });
    if (it == c.attacks.end()) invalid(field + ".attack", "unknown attack id");
    if (!it->infects) invalid(field + ".attack", "worm attacks must infect");
    if (w.entry) check_node(*w.entry, field + ".entry");
  }
  if (!(c.vulnerability >= 0.0 && c.vulnerability <= 1.0)) invalid("vulnerability", "must lie in [0, 1]");
  if (!(c.cells.detector_knowledge >= 0.0 && c.cells.detector_knowledge <= 1.0)) {
    invalid("cells.detector_knowledge", "must lie in [0, 1]");
  }
  if (!(c.cells.target_fpr > 0.0 && c.cells.target_fpr < 1.0)) invalid("cells.target_fpr", "must lie in (0, 1)");
  if (!(c.cells.p_move >= 0.0 && c.cells.p_move <= 1.0)) invalid("cells.p_move", "must lie in [0, 1]");
  const auto& ag = c.agnosco;
  if (!(ag.deposit > 0.0)) invalid("agnosco.deposit", "must be > 0");
  if (!(ag.evaporation > 0.0 && ag.evaporation < 1.0)) invalid("agnosco.evaporation", "must lie in (0, 1)");
  if (!(ag.threshold > 0.0)) invalid("agnosco.threshold", "must be > 0");
  if (!(ag.epsilon > 0.0)) invalid("agnosco.epsilon", "must be > 0");
  const auto& s = c.stations;
  if (s.lymph_nodes.size() < std::max<std::size_t>(min_stations, 1)) {
    invalid("stations.lymph_nodes", "need at least " + std::to_string(std::max<std::size_t>(min_stations, 1)));
  }
  if (s.cnts.size() < std::max<std::size_t>(min_stations, 1)) {
    invalid("stations.cnts", "need at least " + std::to_string(std::max<std::size_t>(min_stations, 1)));
  }
  for (std::size_t i = 0; i < s.lymph_nodes.size(); ++i) check_node(s.lymph_nodes[i], "stations.lymph_nodes." + std::to_string(i));
  for (std::size_t i = 0; i < s.cnts.size(); ++i) check_node(s.cnts[i], "stations.cnts." + std::to_string(i));
  check_node(s.administrator, "stations.administrator");
  for (std::size_t i = 0; i < c.defense.static_ids.size(); ++i) {
    check_node(c.defense.static_ids[i], "defense.static_ids." + std::to_string(i));
  }
  for (std::size_t i = 0; i < c.defense.filters.size(); ++i) {
    check_node(c.defense.filters[i].node, "defense.filters." + std::to_string(i) + ".node");
  }
}

ScenarioConfig parse_scenario(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw Error("ParseError", "line " + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  if (!root.IsMap()) throw Error("ParseError", "line 1: scenario must be a mapping");
  ScenarioConfig c = from_yaml(root);
  validate_scenario(c, 1);
  return c;
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("IoError", "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string serialize_scenario(const ScenarioConfig& config) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << to_yaml(config);
  return std::string(out.c_str()) + "\n";
}

ScenarioConfig with_knob(const ScenarioConfig& config, const std::string& path, const std::string& value) {
  YAML::Node root = to_yaml(config);
  std::vector<std::string> parts;
  std::stringstream ss(path);
  for (std::string part; std::getline(ss, part, '.');) parts.push_back(part);
  if (parts.empty()) throw Error("UnknownKnob", "empty knob path");
  YAML::Node cur = root;
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    YAML::Node next;
    if (cur.IsSequence()) {
      std::size_t idx = 0;
      try {
        idx = std::stoul(parts[i]);
      } catch (const std::exception&) {
        throw Error("UnknownKnob", path);
      }
      if (idx >= cur.size()) throw Error("UnknownKnob", path);
      next = cur[idx];
    } else if (cur.IsMap() && cur[parts[i]]) {
      next = cur[parts[i]];
    } else {
      throw Error("UnknownKnob", path);
    }
    cur.reset(next);
  }
  const std::string& leaf = parts.back();
  if (cur.IsSequence()) {
    std::size_t idx = 0;
    try {
      idx = std::stoul(leaf);
    } catch (const std::exception&) {
      throw Error("UnknownKnob", path);
    }
    if (idx >= cur.size()) throw Error("UnknownKnob", path);
    cur[idx] = YAML::Load(value);
  } else {
    if (!cur.IsMap() || !cur[leaf]) throw Error("UnknownKnob", path);
    cur[leaf] = YAML::Load(value);
  }
  ScenarioConfig out = from_yaml(root);
  validate_scenario(out, 1);
  return out;
}

}  // namespace sana
