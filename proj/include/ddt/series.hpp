#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace ddt {

using Point = std::vector<double>;

struct SeriesPoint {
  std::int64_t epoch = 0;
  std::int64_t timestamp = 0;  // informational only, never used by detectors
  Point values;
};

/// Epoch-ordered d-dimensional samples. Immutable after construction.
class Series {
 public:
  Series() = default;
  /// Validates: d >= 1, common dimension, finite values, strictly increasing
  /// non-negative epochs. Throws ValidationError.
  explicit Series(std::vector<SeriesPoint> points);

  /// Convenience: epochs 0..n-1, timestamps equal to epochs.
  static Series from_rows(const std::vector<Point>& rows);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return points_.size(); }
  bool empty() const noexcept { return points_.empty(); }
  const SeriesPoint& operator[](std::size_t i) const { return points_[i]; }
  const std::vector<SeriesPoint>& points() const noexcept { return points_; }

 private:
  std::size_t dim_ = 0;
  std::vector<SeriesPoint> points_;
};

struct Window {
  std::size_t start = 0;
  std::size_t length = 0;
  friend bool operator==(const Window&, const Window&) = default;
};

struct CsvOptions {
  char delimiter = ',';
  bool has_timestamp = false;
  bool reorder_by_epoch = false;
  /// Header detection: a first line whose first field is not an integer is
  /// treated as a header.
  bool allow_header = true;
};

/// Columns `epoch[,timestamp],v1,...,vd`. Throws ParseError with a line number
/// for malformed rows and ValidationError for non-finite values or duplicate
/// epochs.
Series parse_series(std::istream& in, const CsvOptions& opts = {});
Series parse_series_string(const std::string& text, const CsvOptions& opts = {});

/// Writes rows in the same layout `parse_series` reads (with a header line).
void write_series(std::ostream& out, const Series& s, const CsvOptions& opts = {});

/// Views of the window's points in epoch order. Throws RangeError.
std::vector<std::span<const double>> window_view(const Series& s, Window w);

/// Copies the window's values out as rows.
std::vector<Point> window_rows(const Series& s, Window w);

/// Non-overlapping consecutive windows of `block_len`; the remainder is dropped.
std::vector<Window> split_blocks(const Series& s, std::size_t block_len);
std::vector<Window> split_blocks(std::size_t series_len, std::size_t block_len);

}  // namespace ddt
