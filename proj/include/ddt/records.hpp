#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "ddt/bench.hpp"
#include "ddt/detectors.hpp"

namespace ddt {

enum class OutputFormat { Csv, Tsv, Json };

OutputFormat format_from_name(std::string_view name);

/// Shortest round-trip decimal form.
std::string format_double(double v);

/// FNV-1a 64-bit digest of a byte string, as 16 hex digits.
std::string text_digest(std::string_view text);

using Cell = std::variant<std::monostate, std::string, double, std::int64_t, std::uint64_t, bool>;

/// Rows of named columns as CSV, TSV or JSON lines. Missing values are empty
/// fields or JSON null.
class TableWriter {
 public:
  TableWriter(std::ostream& out, OutputFormat format, std::vector<std::string> columns);
  /// Comment line (`# ...`) before the header; JSON lines get an object.
  void preamble(const std::string& key, const std::string& value);
  void row(const std::vector<Cell>& cells);

 private:
  void header();

  std::ostream& out_;
  OutputFormat format_;
  std::vector<std::string> columns_;
  bool header_done_ = false;
};

void write_scan_records(std::ostream& out, std::span<const ScanRecord> records,
                        OutputFormat format, bool per_measure = false,
                        const std::string& manifest_digest = {});

nlohmann::json scan_record_json(const ScanRecord& r);

void write_synth_runs(std::ostream& out, std::span<const SynthRun> runs, OutputFormat format,
                      const std::string& manifest_digest = {});
void write_synth_cells(std::ostream& out, std::span<const SynthCell> cells, OutputFormat format,
                       const std::string& manifest_digest = {});
void write_unibench_rows(std::ostream& out, std::span<const UniBenchRow> rows,
                         OutputFormat format, const std::string& manifest_digest = {});

/// Everything needed to rerun a command bit-exactly.
struct RunManifest {
  std::vector<std::string> command_line;
  std::map<std::string, std::uint64_t> seeds;
  nlohmann::json config = nlohmann::json::object();
  std::map<std::string, std::string> table_digests;
  std::string version;

  nlohmann::json to_json() const;
  std::string text() const;    // canonical JSON
  std::string digest() const;  // text_digest(text())
};

}  // namespace ddt
