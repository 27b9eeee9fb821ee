#pragma once

#include <deque>
#include <map>
#include <optional>
#include <set>
#include <variant>
#include <vector>

#include "sana/cells.hpp"
#include "sana/receptor.hpp"
#include "sana/topology.hpp"

namespace sana {

// Plaintext messages carried inside substances.
struct InfectionReport {
  NodeId node = 0;
  AttackId attack = 0;
  TimeStep declared_at = 0;
  bool operator==(const InfectionReport&) const = default;
};

struct SignaturePush {
  AttackId attack = 0;
  Bytes signature;
  bool operator==(const SignaturePush&) const = default;
};

struct StatusBatch {
  std::vector<StatusReport> reports;
  bool operator==(const StatusBatch&) const = default;
};

using Message = std::variant<InfectionReport, SignaturePush, StatusBatch>;

Bytes encode_message(const Message& msg);
/// Throws Error("MalformedMessage").
Message decode_message(const Bytes& bytes);

struct LymphNode {
  StationId id = 0;
  NodeId location = 0;
  std::vector<PrivateToken> held;
  std::set<CellId> known_cells;
  std::map<AttackId, Bytes> feed;
  std::deque<Substance> inbox;
  std::map<std::pair<NodeId, AttackId>, TimeStep> last_spawn;
};

struct ReleaseMix {
  std::uint32_t detectors = 1;
  std::uint32_t ants = 1;
  std::uint32_t monitors = 0;
  bool operator==(const ReleaseMix&) const = default;
};

struct Cnts {
  StationId id = 0;
  NodeId location = 0;
  std::uint32_t period = 100;
  ReleaseMix mix;
  std::map<AttackId, Bytes> trained;
};

/// Where a lymph node can forward to.
struct StationSite {
  StationId id = 0;
  NodeId location = 0;
};

struct RouteDecision {
  enum class Type { Consume, Forward, Expire };
  Type type = Type::Expire;
  Bytes payload;          // Consume
  StationSite next;       // Forward
  Substance forwarded;    // Forward: ttl decremented, station appended to visited
};

/// Opens the substance when the station's receptors cover it; otherwise
/// forwards it to the nearest unvisited other station (ties to the smaller
/// station id) with ttl decremented. A substance arriving with ttl 0, or
/// with no station left to try, expires.
RouteDecision lymph_route(const LymphNode& station, const Substance& sub, const std::vector<StationSite>& sites,
                          const RoutingTable& routing);

struct ReportResponse {
  bool spawn_disinfector = false;
  std::optional<Bytes> signature;  // for local immunization
};

/// Decides the response to an infection report and records the spawn in
/// the dedup table: one Disinfector per (node, attack) per `dedup_window`.
ReportResponse lymph_on_report(LymphNode& station, const InfectionReport& report, TimeStep clock,
                               std::uint32_t dedup_window);

/// True on the last step of every `period` (clock + 1 divisible by period).
bool cnts_due(const Cnts& station, TimeStep clock);

/// Builds a fresh cell at `location`. Detectors carry `signatures` in a
/// store sized for `capacity` signatures.
ArtificialCell make_cell(CellId id, CellKind kind, NodeId location, TimeStep born_at, Rng& rng,
                         const std::map<AttackId, Bytes>& signatures, std::size_t capacity, double target_fpr);

/// The batch due this step (empty otherwise); detectors carry the
/// station's current trained set.
std::vector<ArtificialCell> cnts_release(const Cnts& station, TimeStep clock, CellPopulation& population, Rng& rng,
                                         std::size_t capacity, double target_fpr);

}  // namespace sana
