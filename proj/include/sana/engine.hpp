#pragma once

#include <map>
#include <optional>
#include <vector>

#include "sana/adversary.hpp"
#include "sana/cells.hpp"
#include "sana/defense.hpp"
#include "sana/metrics.hpp"
#include "sana/pheromone.hpp"
#include "sana/scenario.hpp"
#include "sana/sim.hpp"
#include "sana/stations.hpp"

namespace sana {

/// A configured scenario instance: the transport core plus the adversary,
/// the cell population, the stations and the per-node defense stacks.
class World final : public StepHandlers {
 public:
  /// Builds the topology and the initial population. `min_stations` is the
  /// lymph-node/CNTS floor checked at setup.
  World(const ScenarioConfig& config, std::uint64_t seed, std::size_t min_stations = 1);

  void advance(TimeStep steps);

  SimState& state() noexcept { return state_; }
  const SimState& state() const noexcept { return state_; }
  const ScenarioConfig& config() const noexcept { return config_; }
  const std::vector<NodeHealth>& health() const noexcept { return health_; }
  std::vector<NodeHealth>& health() noexcept { return health_; }
  const CellPopulation& population() const noexcept { return population_; }
  CellPopulation& population() noexcept { return population_; }
  const PheromoneMap& pheromone() const noexcept { return pheromone_; }
  const DefenseStack& defense() const noexcept { return defense_; }
  const std::vector<LymphNode>& lymph_nodes() const noexcept { return lymph_; }
  const std::vector<Cnts>& cnts() const noexcept { return cnts_; }
  const std::vector<NodeId>& ids_nodes() const noexcept { return ids_nodes_; }
  /// Status reports the administrator has opened so far.
  const std::vector<StatusReport>& admin_reports() const noexcept { return admin_reports_; }
  std::uint32_t substance_ttl() const noexcept { return substance_ttl_; }
  PublicToken lymph_receptor() const noexcept { return lymph_shared_.public_part; }

  /// Seals `msg` to `required` and sends it from `from` to `to` as an
  /// Immune packet (or hands it over directly when from == to).
  void send_substance(NodeId from, NodeId to, const Message& msg, std::vector<PublicToken> required,
                      std::string_view label);

  // StepHandlers
  void inject(SimState&) override;
  CheckOutcome check(SimState&, NodeId node, NodeId from, const Packet& packet) override;
  void on_deliver(SimState&, NodeId node, Packet&& packet) override;
  void emit(SimState&) override;
  void cells(SimState&) override;
  void evaporate(SimState&) override;
  void stations(SimState&) override;

 private:
  void place_initial_cells(Rng& rng);
  void add_cell(ArtificialCell cell, std::string_view cause);
  void retire_cell(CellId id, std::string_view reason);
  void move_cell(ArtificialCell& cell, NodeId to);
  void apply_actions(ArtificialCell& cell, std::vector<Action> actions);
  void declare_infections();
  void deliver_substance(NodeId node, Substance sub);
  void run_lymph(LymphNode& station);
  void run_cnts(Cnts& station);
  void handle_report(LymphNode& station, const InfectionReport& report);
  void enforce_caps();
  const AttackDef* attack(AttackId id) const;

  ScenarioConfig config_;
  SimState state_;
  Rng traffic_rng_;
  Rng worm_rng_;
  Rng cell_rng_;
  Rng key_rng_;
  std::vector<NodeHealth> health_;
  std::vector<Bytes> signature_list_;
  std::map<AttackId, Bytes> signatures_;
  CellPopulation population_;
  PheromoneMap pheromone_;
  DefenseStack defense_;
  std::vector<NodeId> ids_nodes_;
  std::vector<LymphNode> lymph_;
  std::vector<Cnts> cnts_;
  std::vector<StationSite> lymph_sites_;
  Receptor lymph_shared_;
  Receptor admin_;
  std::vector<StatusReport> admin_reports_;
  std::map<NodeId, TimeStep> outstanding_;  // declared, awaiting disinfection
  std::uint32_t substance_ttl_ = 0;
};

struct RunResult {
  EventLog log;
  Metrics metrics;
  AuditReport audit;
};

/// Executes `steps` (default: the scenario horizon) and derives metrics
/// from the log. The conservation audit runs on every call.
RunResult run(const ScenarioConfig& config, std::uint64_t seed, std::optional<TimeStep> steps = std::nullopt);

}  // namespace sana
