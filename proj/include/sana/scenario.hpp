#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sana/adversary.hpp"
#include "sana/defense.hpp"
#include "sana/pheromone.hpp"
#include "sana/stations.hpp"
#include "sana/topology.hpp"

namespace sana {

enum class TopologyModel { ErdosRenyi, Explicit };

struct TopologyConfig {
  TopologyModel model = TopologyModel::ErdosRenyi;
  std::uint32_t nodes = 50;
  double edge_probability = 0.08;
  std::uint32_t bandwidth = 4;
  std::optional<std::uint64_t> seed;  // unset: derived from the run seed
  std::vector<LinkSpec> links;        // Explicit only
  bool operator==(const TopologyConfig&) const = default;
};

struct WormConfig {
  AttackId attack = 1;
  TimeStep at = 100;
  std::optional<NodeId> entry;  // unset: uniform over vulnerable nodes
  bool operator==(const WormConfig&) const = default;
};

struct CellConfig {
  std::uint32_t detectors = 30;
  std::uint32_t ants = 20;
  std::uint32_t monitors = 2;
  double detector_knowledge = 0.5;
  double target_fpr = 0.01;
  double p_move = 0.5;
  std::uint32_t monitor_flush = 50;
  bool operator==(const CellConfig&) const = default;
};

struct StationConfig {
  std::vector<NodeId> lymph_nodes{0, 25};
  std::vector<NodeId> cnts{12, 37};
  NodeId administrator = 0;
  std::uint32_t cnts_period = 100;
  ReleaseMix release;
  std::uint32_t immunization_radius = 2;
  std::uint32_t dedup_window = 200;
  std::uint32_t substance_ttl = 0;  // 0: 4 x network diameter
  bool operator==(const StationConfig&) const = default;
};

struct FilterPlacement {
  NodeId node = 0;
  std::vector<FilterRule> rules;
  bool operator==(const FilterPlacement&) const = default;
};

struct DefenseConfig {
  std::vector<NodeId> static_ids;
  std::uint32_t ids_top_betweenness = 0;
  std::vector<FilterPlacement> filters;
  bool operator==(const DefenseConfig&) const = default;
};

struct ScenarioConfig {
  std::string name = "scenario";
  TimeStep horizon = 2000;
  std::uint64_t seed = 1;
  std::uint32_t queue_capacity = 32;
  TopologyConfig topology;
  TrafficModel traffic;
  std::vector<AttackDef> attacks;
  std::vector<WormConfig> worms;
  double vulnerability = 1.0;
  bool patch_on_disinfect = true;
  CellConfig cells;
  PheromoneParams agnosco;
  StationConfig stations;
  DefenseConfig defense;
  bool operator==(const ScenarioConfig&) const = default;
};

/// Parses and validates a scenario document (one station of each kind
/// suffices). Unknown keys are rejected.
/// Throws Error("ParseError") with the line, or Error("ValidationError")
/// naming the field.
ScenarioConfig parse_scenario(const std::string& text);
ScenarioConfig load_scenario(const std::string& path);
std::string serialize_scenario(const ScenarioConfig& config);

/// Field-level checks that do not need the topology. `min_stations` is the
/// redundancy floor for lymph nodes and CNTS.
void validate_scenario(const ScenarioConfig& config, std::size_t min_stations = 2);

/// Sets a dotted knob path (e.g. "cells.detectors", "attacks.0.fanout") to
/// a YAML scalar and re-validates. Throws Error("UnknownKnob").
ScenarioConfig with_knob(const ScenarioConfig& config, const std::string& path, const std::string& value);

Bytes parse_hex(const std::string& hex);
std::string to_hex(const Bytes& bytes);

}  // namespace sana
