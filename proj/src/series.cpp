#include "ddt/series.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>

#include "ddt/error.hpp"

namespace ddt {

Series::Series(std::vector<SeriesPoint> points) : points_(std::move(points)) {
  if (points_.empty()) return;
  dim_ = points_.front().values.size();
  if (dim_ == 0) throw ValidationError("series dimension must be at least 1");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const auto& p = points_[i];
    if (p.values.size() != dim_)
      throw ValidationError("point " + std::to_string(i) + " has dimension " +
                            std::to_string(p.values.size()) + ", expected " +
                            std::to_string(dim_));
    if (p.epoch < 0)
      throw ValidationError("point " + std::to_string(i) + " has a negative epoch");
    for (double v : p.values)
      if (!std::isfinite(v))
        throw ValidationError("point " + std::to_string(i) + " has a non-finite value");
    if (i > 0 && p.epoch <= points_[i - 1].epoch)
      throw ValidationError("epochs must strictly increase (epoch " +
                            std::to_string(p.epoch) + " at point " +
                            std::to_string(i) + ")");
  }
}

Series Series::from_rows(const std::vector<Point>& rows) {
  std::vector<SeriesPoint> pts;
  pts.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto e = static_cast<std::int64_t>(i);
    pts.push_back({e, e, rows[i]});
  }
  return Series(std::move(pts));
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line, char delim) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    auto next = line.find(delim, pos);
    out.push_back(trim(line.substr(pos, next - pos)));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

bool parse_int(std::string_view s, std::int64_t& out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

bool parse_double(std::string_view s, double& out) {
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  // out-of-range literals parse to +-inf via strtod semantics; treat as value
  if (ec == std::errc::result_out_of_range && ptr == s.data() + s.size()) {
    out = std::strtod(std::string(s).c_str(), nullptr);
    return true;
  }
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

Series parse_series(std::istream& in, const CsvOptions& opts) {
  std::vector<SeriesPoint> pts;
  std::vector<std::size_t> line_of;
  const std::size_t meta_cols = opts.has_timestamp ? 2 : 1;
  std::size_t expected_cols = 0;
  std::string line;
  std::size_t lineno = 0;
  bool first_content = true;
  while (std::getline(in, line)) {
    ++lineno;
    auto view = trim(line);
    if (view.empty() || view.front() == '#') continue;
    auto fields = split(view, opts.delimiter);
    if (first_content) {
      first_content = false;
      std::int64_t probe = 0;
      if (opts.allow_header && !parse_int(fields.front(), probe)) {
        double dprobe = 0;
        // "0.5,..." is data with a bad epoch, not a header
        if (!parse_double(fields.front(), dprobe)) continue;
      }
    }
    if (fields.size() <= meta_cols)
      throw ParseError(lineno, "expected at least " + std::to_string(meta_cols + 1) +
                                   " columns, got " + std::to_string(fields.size()));
    if (expected_cols == 0) expected_cols = fields.size();
    if (fields.size() != expected_cols)
      throw ParseError(lineno, "expected " + std::to_string(expected_cols) +
                                   " columns, got " + std::to_string(fields.size()));
    SeriesPoint p;
    if (!parse_int(fields[0], p.epoch))
      throw ParseError(lineno, "invalid epoch '" + std::string(fields[0]) + "'");
    p.timestamp = p.epoch;
    if (opts.has_timestamp && !parse_int(fields[1], p.timestamp))
      throw ParseError(lineno, "invalid timestamp '" + std::string(fields[1]) + "'");
    p.values.reserve(fields.size() - meta_cols);
    for (std::size_t c = meta_cols; c < fields.size(); ++c) {
      double v = 0;
      if (!parse_double(fields[c], v))
        throw ParseError(lineno, "invalid number '" + std::string(fields[c]) + "'");
      if (!std::isfinite(v))
        throw ValidationError("line " + std::to_string(lineno) + ": non-finite value");
      p.values.push_back(v);
    }
    pts.push_back(std::move(p));
    line_of.push_back(lineno);
  }
  if (opts.reorder_by_epoch) {
    std::vector<std::size_t> idx(pts.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(),
                     [&](auto a, auto b) { return pts[a].epoch < pts[b].epoch; });
    std::vector<SeriesPoint> sorted;
    std::vector<std::size_t> sorted_lines;
    sorted.reserve(pts.size());
    for (auto i : idx) {
      sorted.push_back(std::move(pts[i]));
      sorted_lines.push_back(line_of[i]);
    }
    pts = std::move(sorted);
    line_of = std::move(sorted_lines);
  }
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (pts[i].epoch == pts[i - 1].epoch)
      throw ValidationError("line " + std::to_string(line_of[i]) + ": duplicate epoch " +
                            std::to_string(pts[i].epoch));
    if (pts[i].epoch < pts[i - 1].epoch)
      throw ValidationError("line " + std::to_string(line_of[i]) +
                            ": epoch out of order (use --reorder-by-epoch)");
  }
  return Series(std::move(pts));
}

Series parse_series_string(const std::string& text, const CsvOptions& opts) {
  std::istringstream in(text);
  return parse_series(in, opts);
}

void write_series(std::ostream& out, const Series& s, const CsvOptions& opts) {
  const char d = opts.delimiter;
  out << "epoch";
  if (opts.has_timestamp) out << d << "timestamp";
  for (std::size_t c = 0; c < s.dim(); ++c) out << d << 'v' << (c + 1);
  out << '\n';
  char buf[32];
  for (const auto& p : s.points()) {
    out << p.epoch;
    if (opts.has_timestamp) out << d << p.timestamp;
    for (double v : p.values) {
      // shortest round-trip representation
      auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
      out << d << std::string_view(buf, static_cast<std::size_t>(end - buf));
    }
    out << '\n';
  }
}

std::vector<std::span<const double>> window_view(const Series& s, Window w) {
  if (w.start > s.size() || w.length > s.size() - w.start)
    throw RangeError("window [" + std::to_string(w.start) + ", +" +
                     std::to_string(w.length) + ") exceeds series of length " +
                     std::to_string(s.size()));
  std::vector<std::span<const double>> out;
  out.reserve(w.length);
  for (std::size_t i = w.start; i < w.start + w.length; ++i)
    out.emplace_back(s[i].values);
  return out;
}

std::vector<Point> window_rows(const Series& s, Window w) {
  std::vector<Point> rows;
  for (auto v : window_view(s, w)) rows.emplace_back(v.begin(), v.end());
  return rows;
}

std::vector<Window> split_blocks(std::size_t series_len, std::size_t block_len) {
  if (block_len < 2) throw ArgumentError("block length must be at least 2");
  std::vector<Window> out;
  for (std::size_t start = 0; start + block_len <= series_len; start += block_len)
    out.push_back({start, block_len});
  return out;
}

std::vector<Window> split_blocks(const Series& s, std::size_t block_len) {
  return split_blocks(s.size(), block_len);
}

}  // namespace ddt
