#include "sana/event_log.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

namespace sana {

namespace {

constexpr std::array<std::pair<EventKind, std::string_view>, 20> kKindNames{{
    {EventKind::Step, "Step"},
    {EventKind::Inject, "Inject"},
    {EventKind::Forward, "Forward"},
    {EventKind::Admit, "Admit"},
    {EventKind::Deliver, "Deliver"},
    {EventKind::Drop, "Drop"},
    {EventKind::Evict, "Evict"},
    {EventKind::Detect, "Detect"},
    {EventKind::Infect, "Infect"},
    {EventKind::EntryFailed, "EntryFailed"},
    {EventKind::Disinfect, "Disinfect"},
    {EventKind::FalseDisinfect, "FalseDisinfect"},
    {EventKind::Identify, "Identify"},
    {EventKind::CellMove, "CellMove"},
    {EventKind::SubstanceSend, "SubstanceSend"},
    {EventKind::SubstanceOpen, "SubstanceOpen"},
    {EventKind::SubstanceExpire, "SubstanceExpire"},
    {EventKind::Spawn, "Spawn"},
    {EventKind::Retire, "Retire"},
    {EventKind::Immunize, "Immunize"},
}};

bool valid_token(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c == ' ' || c == '=' || c == '\n' || c == '\r' || c == '\t') return false;
  }
  return true;
}

}  // namespace

std::string_view to_string(EventKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "Unknown";
}

std::optional<EventKind> parse_event_kind(std::string_view text) {
  for (const auto& [k, name] : kKindNames) {
    if (name == text) return k;
  }
  return std::nullopt;
}

Event& Event::with(std::string key, std::int64_t value) { return with(std::move(key), std::to_string(value)); }

Event& Event::with(std::string key, std::uint64_t value) { return with(std::move(key), std::to_string(value)); }

Event& Event::with(std::string key, std::string value) {
  if (!valid_token(key) || !valid_token(value)) {
    throw Error("InvalidEventField", "bad event field '" + key + "=" + value + "'");
  }
  fields.push_back({std::move(key), std::move(value)});
  return *this;
}

const std::string* Event::find(std::string_view key) const {
  for (const auto& f : fields) {
    if (f.key == key) return &f.value;
  }
  return nullptr;
}

std::optional<std::int64_t> Event::get_int(std::string_view key) const {
  const std::string* v = find(key);
  if (!v) return std::nullopt;
  std::int64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
  if (ec != std::errc{} || ptr != v->data() + v->size()) return std::nullopt;
  return out;
}

std::string Event::to_line() const {
  std::string line = "step=" + std::to_string(step) + " kind=" + std::string(to_string(kind));
  for (const auto& f : fields) {
    line += ' ';
    line += f.key;
    line += '=';
    line += f.value;
  }
  return line;
}

Event parse_event_line(std::string_view line) {
  Event e;
  std::size_t pos = 0;
  int index = 0;
  while (pos < line.size()) {
    while (pos < line.size() && line[pos] == ' ') ++pos;
    if (pos >= line.size()) break;
    std::size_t end = line.find(' ', pos);
    if (end == std::string_view::npos) end = line.size();
    const std::string_view token = line.substr(pos, end - pos);
    const std::size_t eq = token.find('=');
    if (eq == std::string_view::npos || eq == 0 || eq + 1 == token.size()) {
      throw Error("ParseError", "malformed token '" + std::string(token) + "'");
    }
    const std::string_view key = token.substr(0, eq);
    const std::string_view value = token.substr(eq + 1);
    if (index == 0) {
      if (key != "step") throw Error("ParseError", "record must start with step=");
      const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), e.step);
      if (ec != std::errc{} || ptr != value.data() + value.size()) {
        throw Error("ParseError", "bad step value '" + std::string(value) + "'");
      }
    } else if (index == 1) {
      if (key != "kind") throw Error("ParseError", "second field must be kind=");
      const auto k = parse_event_kind(value);
      if (!k) throw Error("ParseError", "unknown event kind '" + std::string(value) + "'");
      e.kind = *k;
    } else {
      e.fields.push_back({std::string(key), std::string(value)});
    }
    ++index;
    pos = end;
  }
  if (index < 2) throw Error("ParseError", "record needs step= and kind=");
  return e;
}

std::string EventLog::to_text() const {
  std::string out;
  out.reserve(events_.size() * 48);
  for (const auto& e : events_) {
    out += e.to_line();
    out += '\n';
  }
  return out;
}

EventLog EventLog::parse(std::string_view text) {
  EventLog log;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) {
      try {
        log.append(parse_event_line(line));
      } catch (const Error& err) {
        throw Error("ParseError", "line " + std::to_string(line_no) + ": " + err.what());
      }
    }
    pos = end + 1;
  }
  return log;
}

void EventLog::write_file(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("IoError", "cannot open " + path + " for writing");
  out << to_text();
  if (!out) throw Error("IoError", "write failed for " + path);
}

EventLog EventLog::read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("IoError", "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

}  // namespace sana
