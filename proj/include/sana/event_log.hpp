#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sana/types.hpp"

namespace sana {

enum class EventKind {
  Step,
  Inject,
  Forward,
  Admit,
  Deliver,
  Drop,
  Evict,
  Detect,
  Infect,
  EntryFailed,
  Disinfect,
  FalseDisinfect,
  Identify,
  CellMove,
  SubstanceSend,
  SubstanceOpen,
  SubstanceExpire,
  Spawn,
  Retire,
  Immunize,
};

std::string_view to_string(EventKind kind);
std::optional<EventKind> parse_event_kind(std::string_view text);

struct EventField {
  std::string key;
  std::string value;
  bool operator==(const EventField&) const = default;
};

/// One log record. Fields keep insertion order, which is the serialized
/// order, so producers fix the layout of each kind.
struct Event {
  TimeStep step = 0;
  EventKind kind = EventKind::Step;
  std::vector<EventField> fields;

  Event() = default;
  Event(TimeStep s, EventKind k) : step(s), kind(k) { fields.reserve(6); }

  Event& with(std::string key, std::int64_t value);
  Event& with(std::string key, std::uint64_t value);
  Event& with(std::string key, std::uint32_t value) { return with(std::move(key), std::uint64_t{value}); }
  Event& with(std::string key, std::string value);
  Event& with(std::string key, const char* value) { return with(std::move(key), std::string(value)); }

  const std::string* find(std::string_view key) const;
  std::optional<std::int64_t> get_int(std::string_view key) const;
  bool has(std::string_view key) const { return find(key) != nullptr; }

  /// `step=<n> kind=<Kind> k=v ...`
  std::string to_line() const;

  bool operator==(const Event&) const = default;
};

/// Parses one record; throws Error("ParseError") on malformed input.
Event parse_event_line(std::string_view line);

class EventLog {
 public:
  void append(Event e) { events_.push_back(std::move(e)); }
  const std::vector<Event>& events() const noexcept { return events_; }
  std::size_t size() const noexcept { return events_.size(); }
  bool empty() const noexcept { return events_.empty(); }

  std::string to_text() const;
  static EventLog parse(std::string_view text);

  void write_file(const std::string& path) const;
  static EventLog read_file(const std::string& path);

  bool operator==(const EventLog&) const = default;

 private:
  std::vector<Event> events_;
};

}  // namespace sana
