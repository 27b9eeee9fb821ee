#pragma once

#include <string>
#include <utility>
#include <vector>

#include "sana/metrics.hpp"
#include "sana/scenario.hpp"

namespace sana {

enum class ReportFormat { Csv, Json };

ReportFormat parse_report_format(const std::string& name);

/// One sweep row: the knob values of its grid point, the seed, the metrics.
struct ReportRow {
  std::vector<std::string> knobs;  // parallel to Table::knob_names
  std::uint64_t seed = 0;
  Metrics metrics;
};

struct Table {
  std::vector<std::string> knob_names;
  std::vector<ReportRow> rows;
};

/// Scalar metric columns in report order.
const std::vector<std::string>& metric_columns();

/// Column value as printed: integers verbatim, reals at 6 significant
/// digits, "" (CSV) / null (JSON) when absent.
std::optional<std::string> metric_cell(const Metrics& m, const std::string& column);

std::string render_csv(const Table& table);
std::string render_json(const Table& table);
/// A single run's metrics as one JSON object.
std::string render_json(const Metrics& metrics);

/// Throws Error("IoError") when the path cannot be written.
void emit_report(const Table& table, ReportFormat format, const std::string& path);
void emit_report(const Metrics& metrics, std::uint64_t seed, ReportFormat format, const std::string& path);

/// Knob name -> values, in document order.
using Grid = std::vector<std::pair<std::string, std::vector<std::string>>>;

/// YAML mapping of dotted knob paths to lists of scalars.
Grid parse_grid(const std::string& text);
Grid load_grid(const std::string& path);

/// Inclusive "a..b" (or a single value).
std::vector<std::uint64_t> parse_seed_range(const std::string& text);

/// One run per (grid point, seed). Points enumerate the cartesian product
/// with the last knob varying fastest; seeds vary fastest within a point.
/// Throws Error("UnknownKnob").
Table sweep(const ScenarioConfig& config, const Grid& grid, const std::vector<std::uint64_t>& seeds);

}  // namespace sana
