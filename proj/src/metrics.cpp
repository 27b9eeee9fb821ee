#include "sana/metrics.hpp"

#include <algorithm>
#include <map>

namespace sana {

std::optional<double> median(std::vector<double> values) {
  if (values.empty()) return std::nullopt;
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  if (values.size() % 2 == 1) return values[mid];
  return (values[mid - 1] + values[mid]) / 2.0;
}

std::optional<double> median(std::vector<std::uint64_t> values) {
  return median(std::vector<double>(values.begin(), values.end()));
}

Metrics compute_metrics(const EventLog& log) {
  struct Episode {
    TimeStep infected_at = 0;
    std::optional<TimeStep> identified_at;
  };
  Metrics m;
  std::map<std::int64_t, Episode> infected;  // node -> open infection episode

  for (const auto& e : log.events()) {
    switch (e.kind) {
      case EventKind::Inject:
        if (e.has("attack")) ++m.attack_injected;
        break;
      case EventKind::Detect:
        if (e.has("attack")) ++m.attack_destroyed;
        else if (e.has("hint")) ++m.false_positive_detections;
        break;
      case EventKind::Deliver:
        if (e.has("attack")) ++m.attack_delivered;
        break;
      case EventKind::Forward:
        ++m.total_hops;
        if (const auto* c = e.find("class"); c && *c == "immune") ++m.immune_hops;
        break;
      case EventKind::CellMove:
        ++m.total_hops;
        ++m.immune_hops;
        break;
      case EventKind::Infect: {
        const auto* cause = e.find("cause");
        if (cause && *cause == "entry") ++m.worm_entries;
        else ++m.additional_infections;
        infected[*e.get_int("node")] = Episode{e.step, std::nullopt};
        break;
      }
      case EventKind::Identify: {
        ++m.identifications;
        const auto it = infected.find(*e.get_int("node"));
        if (it == infected.end()) {
          ++m.false_identifications;
        } else if (!it->second.identified_at) {
          it->second.identified_at = e.step;
          m.identification_latencies.push_back(e.step - it->second.infected_at);
        }
        break;
      }
      case EventKind::Disinfect: {
        const auto it = infected.find(*e.get_int("node"));
        if (it != infected.end()) {
          if (it->second.identified_at) m.disinfection_latencies.push_back(e.step - *it->second.identified_at);
          infected.erase(it);
        }
        break;
      }
      case EventKind::FalseDisinfect:
        ++m.false_disinfections;
        break;
      default:
        break;
    }
  }
  for (const auto& [node, ep] : infected) {
    if (ep.identified_at) ++m.orphaned_identifications;
  }
  if (m.attack_injected > 0) {
    m.prevention_rate = static_cast<double>(m.attack_destroyed) / static_cast<double>(m.attack_injected);
  }
  if (m.worm_entries > 0) {
    m.infections_per_event = static_cast<double>(m.additional_infections) / static_cast<double>(m.worm_entries);
  }
  m.identification_latency = median(m.identification_latencies);
  m.disinfection_latency = median(m.disinfection_latencies);
  if (m.total_hops > 0) m.overhead = static_cast<double>(m.immune_hops) / static_cast<double>(m.total_hops);
  return m;
}

}  // namespace sana
