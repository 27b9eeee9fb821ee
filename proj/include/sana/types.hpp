#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace sana {

using NodeId = std::uint32_t;
using PacketId = std::uint64_t;
using CellId = std::uint64_t;
using ComponentId = std::uint64_t;
using AttackId = std::uint32_t;
using StationId = std::uint32_t;
using TimeStep = std::uint64_t;
using Bytes = std::vector<std::uint8_t>;

/// Directed edge (from, to).
struct Edge {
  NodeId from = 0;
  NodeId to = 0;
  auto operator<=>(const Edge&) const = default;
};

/// Base for every error raised by the simulator. `code()` names the
/// condition (e.g. "DisconnectedGraph") so callers can branch on it.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(code + ": " + what), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

}  // namespace sana
