#include "ddt/records.hpp"

#include <charconv>
#include <cstdio>

#include "ddt/error.hpp"

namespace ddt {

OutputFormat format_from_name(std::string_view name) {
  if (name == "csv") return OutputFormat::Csv;
  if (name == "tsv") return OutputFormat::Tsv;
  if (name == "json") return OutputFormat::Json;
  throw ArgumentError("unknown output format: " + std::string(name));
}

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

std::string text_digest(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

TableWriter::TableWriter(std::ostream& out, OutputFormat format, std::vector<std::string> columns)
    : out_(out), format_(format), columns_(std::move(columns)) {}

void TableWriter::preamble(const std::string& key, const std::string& value) {
  if (format_ == OutputFormat::Json) {
    out_ << nlohmann::json{{key, value}}.dump() << '\n';
  } else {
    out_ << "# " << key << ": " << value << '\n';
  }
}

void TableWriter::header() {
  if (header_done_) return;
  header_done_ = true;
  if (format_ == OutputFormat::Json) return;
  const char sep = format_ == OutputFormat::Csv ? ',' : '\t';
  for (std::size_t i = 0; i < columns_.size(); ++i) out_ << (i ? std::string(1, sep) : "") << columns_[i];
  out_ << '\n';
}

namespace {

std::string cell_text(const Cell& c) {
  struct {
    std::string operator()(std::monostate) const { return {}; }
    std::string operator()(const std::string& s) const { return s; }
    std::string operator()(double d) const { return format_double(d); }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(std::uint64_t v) const { return std::to_string(v); }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
  } visit;
  return std::visit(visit, c);
}

nlohmann::json cell_json(const Cell& c) {
  struct {
    nlohmann::json operator()(std::monostate) const { return nullptr; }
    nlohmann::json operator()(const std::string& s) const { return s; }
    nlohmann::json operator()(double d) const { return d; }
    nlohmann::json operator()(std::int64_t v) const { return v; }
    nlohmann::json operator()(std::uint64_t v) const { return v; }
    nlohmann::json operator()(bool b) const { return b; }
  } visit;
  return std::visit(visit, c);
}

Cell opt(const std::optional<std::size_t>& v) {
  if (!v) return std::monostate{};
  return static_cast<std::uint64_t>(*v);
}

Cell u(std::size_t v) { return static_cast<std::uint64_t>(v); }

}  // namespace

void TableWriter::row(const std::vector<Cell>& cells) {
  if (cells.size() != columns_.size()) throw ArgumentError("row width does not match the header");
  header();
  if (format_ == OutputFormat::Json) {
    nlohmann::ordered_json j;
    for (std::size_t i = 0; i < cells.size(); ++i) j[columns_[i]] = cell_json(cells[i]);
    out_ << j.dump() << '\n';
    return;
  }
  const char sep = format_ == OutputFormat::Csv ? ',' : '\t';
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << sep;
    out_ << cell_text(cells[i]);
  }
  out_ << '\n';
}

nlohmann::json scan_record_json(const ScanRecord& r) {
  nlohmann::json j{{"window_start", r.window_start},
                   {"method", scan_method_name(r.method)},
                   {"raw", r.raw},
                   {"normalized", r.normalized},
                   {"p_value", r.p_value},
                   {"verdict", verdict_name(r.verdict)}};
  if (r.delta_reject) {
    j["delta_reject"] = *r.delta_reject;
    j["reset"] = r.reset;
  }
  if (!r.outcomes.empty()) {
    auto& arr = j["measures"] = nlohmann::json::array();
    for (const auto& o : r.outcomes)
      arr.push_back({{"measure", std::string(measure_name(o.id))},
                     {"raw", o.raw},
                     {"normalized", o.normalized},
                     {"p_value", o.p_value ? nlohmann::json(*o.p_value) : nlohmann::json()},
                     {"reject", o.reject ? nlohmann::json(*o.reject) : nlohmann::json()}});
  }
  return j;
}

void write_scan_records(std::ostream& out, std::span<const ScanRecord> records,
                        OutputFormat format, bool per_measure,
                        const std::string& manifest_digest) {
  const bool martingale = !records.empty() && records.front().method == ScanMethod::Martingale;
  std::vector<std::string> cols{"window_start", "method", "raw", "normalized", "p_value", "verdict"};
  if (martingale) {
    cols.push_back("delta_reject");
    cols.push_back("reset");
  }
  std::vector<std::string> measure_cols;
  if (per_measure && !records.empty())
    for (const auto& o : records.front().outcomes) {
      const std::string n(measure_name(o.id));
      measure_cols.push_back(n);
      cols.push_back(n + "_normalized");
      cols.push_back(n + "_p");
      cols.push_back(n + "_reject");
    }
  TableWriter w(out, format, cols);
  if (!manifest_digest.empty()) w.preamble("manifest", manifest_digest);
  for (const auto& r : records) {
    std::vector<Cell> cells{u(r.window_start), std::string(scan_method_name(r.method)), r.raw,
                            r.normalized, r.p_value, std::string(verdict_name(r.verdict))};
    if (martingale) {
      cells.push_back(r.delta_reject ? Cell(*r.delta_reject) : Cell(std::monostate{}));
      cells.push_back(r.reset);
    }
    if (!measure_cols.empty()) {
      for (std::size_t i = 0; i < measure_cols.size(); ++i) {
        if (i >= r.outcomes.size()) {
          cells.insert(cells.end(), 3, std::monostate{});
          continue;
        }
        const auto& o = r.outcomes[i];
        cells.push_back(o.normalized);
        cells.push_back(o.p_value ? Cell(*o.p_value) : Cell(std::monostate{}));
        cells.push_back(o.reject ? Cell(*o.reject) : Cell(std::monostate{}));
      }
    }
    w.row(cells);
  }
}

void write_synth_runs(std::ostream& out, std::span<const SynthRun> runs, OutputFormat format,
                      const std::string& manifest_digest) {
  TableWriter w(out, format,
                {"kind", "d", "method", "repetition", "earliest", "rejection_ratio",
                 "prerequisite_same"});
  if (!manifest_digest.empty()) w.preamble("manifest", manifest_digest);
  for (const auto& r : runs)
    w.row({std::string(synthetic_name(r.kind)), u(r.d), std::string(scan_method_name(r.method)),
           u(r.repetition), opt(r.earliest), r.ratio, r.prerequisite_same});
}

void write_synth_cells(std::ostream& out, std::span<const SynthCell> cells, OutputFormat format,
                       const std::string& manifest_digest) {
  TableWriter w(out, format,
                {"kind", "d", "method", "runs", "median_rejection_ratio", "detections",
                 "prerequisite_same"});
  if (!manifest_digest.empty()) w.preamble("manifest", manifest_digest);
  for (const auto& c : cells)
    w.row({std::string(synthetic_name(c.kind)), u(c.d), std::string(scan_method_name(c.method)),
           u(c.runs), c.median_ratio, u(c.detections), u(c.prerequisite_same)});
}

void write_unibench_rows(std::ostream& out, std::span<const UniBenchRow> rows,
                         OutputFormat format, const std::string& manifest_digest) {
  TableWriter w(out, format,
                {"change", "base", "set", "disagreement", "found", "matches", "golden", "error"});
  if (!manifest_digest.empty()) w.preamble("manifest", manifest_digest);
  for (const auto& r : rows)
    w.row({std::string(unichange_name(r.change)), std::string(law_name(r.base)), r.set,
           r.disagreement, u(r.found), u(r.matches), u(r.golden), u(r.error)});
}

nlohmann::json RunManifest::to_json() const {
  nlohmann::json j;
  j["command_line"] = command_line;
  j["seeds"] = seeds;
  j["config"] = config;
  j["calibration_digests"] = table_digests;
  j["version"] = version;
  return j;
}

std::string RunManifest::text() const { return to_json().dump(2); }

std::string RunManifest::digest() const { return text_digest(text()); }

}  // namespace ddt
