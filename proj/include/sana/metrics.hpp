#pragma once

#include <optional>
#include <vector>

#include "sana/event_log.hpp"

namespace sana {

/// Run summary derived solely from the event log. Ratios with a zero
/// denominator are absent rather than 0.
struct Metrics {
  std::uint64_t attack_injected = 0;
  std::uint64_t attack_destroyed = 0;
  std::uint64_t attack_delivered = 0;
  std::optional<double> prevention_rate;

  std::uint64_t worm_entries = 0;
  std::uint64_t additional_infections = 0;
  std::optional<double> infections_per_event;

  std::vector<std::uint64_t> identification_latencies;  // one per identified infection
  std::optional<double> identification_latency;         // median
  std::vector<std::uint64_t> disinfection_latencies;
  std::optional<double> disinfection_latency;  // median

  std::uint64_t immune_hops = 0;
  std::uint64_t total_hops = 0;
  std::optional<double> overhead;

  std::uint64_t false_positive_detections = 0;
  std::uint64_t false_disinfections = 0;
  std::uint64_t identifications = 0;
  std::uint64_t false_identifications = 0;
  /// True-positive identifications never followed by a disinfection.
  std::uint64_t orphaned_identifications = 0;

  bool operator==(const Metrics&) const = default;
};

Metrics compute_metrics(const EventLog& log);

std::optional<double> median(std::vector<std::uint64_t> values);
std::optional<double> median(std::vector<double> values);

}  // namespace sana
