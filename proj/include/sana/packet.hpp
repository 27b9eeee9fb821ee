#pragma once

#include <optional>
#include <string_view>

#include "sana/types.hpp"

namespace sana {

enum class TrafficClass : std::uint8_t { Immune, Data };

inline std::string_view to_string(TrafficClass c) { return c == TrafficClass::Immune ? "immune" : "data"; }

struct Packet {
  PacketId id = 0;
  NodeId src = 0;
  NodeId dst = 0;
  TrafficClass cls = TrafficClass::Data;
  Bytes payload;
  std::optional<AttackId> attack;  // ground truth; never read by detectors
  std::uint32_t hop_count = 0;
  TimeStep injected_at = 0;
};

}  // namespace sana
