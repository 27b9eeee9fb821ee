#include "sana/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>
#include <yaml-cpp/yaml.h>

#include "sana/engine.hpp"

namespace sana {

namespace {

using Json = nlohmann::ordered_json;

std::string sig6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

Json cell_json(const std::optional<std::string>& cell, bool real) {
  if (!cell) return nullptr;
  if (real) return std::stod(*cell);
  return std::stoull(*cell);
}

bool is_real_column(const std::string& c) {
  return c == "prevention_rate" || c == "infections_per_event" || c == "identification_latency" ||
         c == "disinfection_latency" || c == "overhead";
}

Json metrics_object(const Metrics& m) {
  Json o = Json::object();
  for (const auto& c : metric_columns()) o[c] = cell_json(metric_cell(m, c), is_real_column(c));
  return o;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("IoError", "cannot write " + path);
  out << text;
  if (!out) throw Error("IoError", "write failed: " + path);
}

}  // namespace

ReportFormat parse_report_format(const std::string& name) {
  if (name == "csv") return ReportFormat::Csv;
  if (name == "json") return ReportFormat::Json;
  throw Error("InvalidArgument", "unknown report format: " + name);
}

const std::vector<std::string>& metric_columns() {
  static const std::vector<std::string> cols = {
      "attack_injected",       "attack_destroyed",       "attack_delivered",
      "prevention_rate",       "worm_entries",           "additional_infections",
      "infections_per_event",  "identification_latency", "disinfection_latency",
      "immune_hops",           "total_hops",             "overhead",
      "false_positive_detections", "false_disinfections", "identifications",
      "false_identifications", "orphaned_identifications"};
  return cols;
}

std::optional<std::string> metric_cell(const Metrics& m, const std::string& c) {
  auto real = [](const std::optional<double>& v) -> std::optional<std::string> {
    if (!v) return std::nullopt;
    return sig6(*v);
  };
  if (c == "attack_injected") return std::to_string(m.attack_injected);
  if (c == "attack_destroyed") return std::to_string(m.attack_destroyed);
  if (c == "attack_delivered") return std::to_string(m.attack_delivered);
  if (c == "prevention_rate") return real(m.prevention_rate);
  if (c == "worm_entries") return std::to_string(m.worm_entries);
  if (c == "additional_infections") return std::to_string(m.additional_infections);
  if (c == "infections_per_event") return real(m.infections_per_event);
  if (c == "identification_latency") return real(m.identification_latency);
  if (c == "disinfection_latency") return real(m.disinfection_latency);
  if (c == "immune_hops") return std::to_string(m.immune_hops);
  if (c == "total_hops") return std::to_string(m.total_hops);
  if (c == "overhead") return real(m.overhead);
  if (c == "false_positive_detections") return std::to_string(m.false_positive_detections);
  if (c == "false_disinfections") return std::to_string(m.false_disinfections);
  if (c == "identifications") return std::to_string(m.identifications);
  if (c == "false_identifications") return std::to_string(m.false_identifications);
  if (c == "orphaned_identifications") return std::to_string(m.orphaned_identifications);
  throw Error("InvalidArgument", "unknown metric column: " + c);
}

std::string render_csv(const Table& table) {
  std::ostringstream out;
  bool first = true;
  auto field = [&](const std::string& s) {
    if (!first) out << ',';
    out << csv_escape(s);
    first = false;
  };
  for (const auto& k : table.knob_names) field(k);
  field("seed");
  for (const auto& c : metric_columns()) field(c);
  out << '\n';
  for (const auto& row : table.rows) {
    first = true;
    for (const auto& v : row.knobs) field(v);
    field(std::to_string(row.seed));
    for (const auto& c : metric_columns()) field(metric_cell(row.metrics, c).value_or(""));
    out << '\n';
  }
  return out.str();
}

std::string render_json(const Table& table) {
  Json rows = Json::array();
  for (const auto& row : table.rows) {
    Json o = Json::object();
    for (std::size_t i = 0; i < table.knob_names.size(); ++i) o[table.knob_names[i]] = row.knobs.at(i);
    o["seed"] = row.seed;
    const Json metrics = metrics_object(row.metrics);
    for (const auto& [k, v] : metrics.items()) o[k] = v;
    rows.push_back(std::move(o));
  }
  return rows.dump(2) + "\n";
}

std::string render_json(const Metrics& metrics) { return metrics_object(metrics).dump(2) + "\n"; }

void emit_report(const Table& table, ReportFormat format, const std::string& path) {
  write_text(path, format == ReportFormat::Csv ? render_csv(table) : render_json(table));
}

void emit_report(const Metrics& metrics, std::uint64_t seed, ReportFormat format, const std::string& path) {
  if (format == ReportFormat::Json) {
    write_text(path, render_json(metrics));
    return;
  }
  Table t;
  t.rows.push_back({{}, seed, metrics});
  write_text(path, render_csv(t));
}

Grid parse_grid(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw Error("ParseError", "line " + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  Grid grid;
  if (!root || root.IsNull()) return grid;
  if (!root.IsMap()) throw Error("ParseError", "grid must be a mapping of knob to values");
  for (const auto& kv : root) {
    std::vector<std::string> values;
    const YAML::Node& v = kv.second;
    if (v.IsSequence()) {
      for (const auto& item : v) values.push_back(item.as<std::string>());
    } else if (v.IsScalar()) {
      values.push_back(v.as<std::string>());
    } else {
      throw Error("ParseError", "line " + std::to_string(v.Mark().line + 1) + ": grid values must be scalars");
    }
    if (values.empty()) throw Error("ParseError", "grid knob has no values: " + kv.first.as<std::string>());
    grid.emplace_back(kv.first.as<std::string>(), std::move(values));
  }
  return grid;
}

Grid load_grid(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("IoError", "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_grid(ss.str());
}

std::vector<std::uint64_t> parse_seed_range(const std::string& text) {
  auto num = [&](const std::string& s) {
    std::size_t used = 0;
    std::uint64_t v = 0;
    try {
      v = std::stoull(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size()) throw Error("InvalidArgument", "bad seed range: " + text);
    return v;
  };
  const auto dots = text.find("..");
  if (dots == std::string::npos) return {num(text)};
  const auto a = num(text.substr(0, dots));
  const auto b = num(text.substr(dots + 2));
  if (b < a) throw Error("InvalidArgument", "empty seed range: " + text);
  std::vector<std::uint64_t> out;
  for (auto s = a;; ++s) {
    out.push_back(s);
    if (s == b) break;
  }
  return out;
}

Table sweep(const ScenarioConfig& config, const Grid& grid, const std::vector<std::uint64_t>& seeds) {
  Table table;
  for (const auto& [k, _] : grid) table.knob_names.push_back(k);

  // Check every knob up front so a typo fails before any run.
  for (const auto& [k, values] : grid) {
    for (const auto& v : values) (void)with_knob(config, k, v);
  }

  std::vector<std::size_t> idx(grid.size(), 0);
  while (true) {
    ScenarioConfig point = config;
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      point = with_knob(point, grid[i].first, grid[i].second[idx[i]]);
      labels.push_back(grid[i].second[idx[i]]);
    }
    for (auto seed : seeds) table.rows.push_back({labels, seed, run(point, seed).metrics});

    std::size_t i = grid.size();
    while (i > 0) {
      --i;
      if (++idx[i] < grid[i].second.size()) break;
      idx[i] = 0;
      if (i == 0) return table;
    }
    if (grid.empty()) return table;
  }
}

}  // namespace sana
