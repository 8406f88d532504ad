#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "ddt/measures.hpp"
#include "ddt/rng.hpp"

namespace ddt {

/// One simulated null distribution F_N^i: the ECDF of M normalised measure
/// values computed on pairs of same-law windows of `window` samples each.
struct NullRun {
  std::size_t window = 0;
  std::size_t repetition = 0;
  Ecdf1D cdf;
  double mean_raw = 0.0;  // E[D] estimate without phi(N)
};

struct NullCloud {
  MeasureId measure{};
  std::vector<NullRun> runs;
  std::size_t pairs = 0;
  std::uint64_t seed = 0;
  Law generator = Law::Normal;
};

struct SimulationConfig {
  /// Window sizes N; each simulated pair holds N samples per side.
  std::vector<std::size_t> windows = default_windows();
  std::size_t pairs = 2000;
  std::size_t repetitions = 1;
  Law generator = Law::Normal;
  std::uint64_t seed = 1;
  unsigned jobs = 1;

  /// {100, 200, ..., 2000}.
  static std::vector<std::size_t> default_windows();
};

/// Draws `pairs` independent same-law window pairs per (N, repetition) and
/// tabulates the normalised measure. Stream for (N, repetition) is
/// stream_seed(seed, {law, N, repetition}), so results are independent of
/// `jobs`. Throws ArgumentError for non-calibratable measures, pairs < 100 or
/// N < 10.
NullCloud simulate_null_cloud(const MeasureSpec& spec, const SimulationConfig& cfg);

/// Same draws shared across several measures; clouds are returned in the
/// order of `specs`.
std::vector<NullCloud> simulate_null_clouds(std::span<const MeasureSpec> specs,
                                            const SimulationConfig& cfg);

struct CalibrationKnot {
  double x = 0.0;
  double cum = 0.0;
  double sigma = 0.0;
};

struct CalibrationProvenance {
  std::vector<std::size_t> windows;
  std::size_t pairs = 0;
  std::size_t repetitions = 0;
  std::uint64_t seed = 0;
  std::string generator;
};

/// Representative null CDF (mu bar) with its pointwise spread (sigma bar).
struct CalibrationTable {
  static constexpr int kVersion = 1;
  static constexpr std::size_t kDefaultKnots = 512;

  MeasureId measure{};
  std::vector<CalibrationKnot> grid;
  CalibrationProvenance provenance;
};

/// Pointwise mean and standard deviation of the member CDFs, evaluated at
/// `knots` equally spaced quantiles of the pooled simulated values (duplicate
/// knots collapse). Throws ArgumentError for a cloud with fewer than 2 runs.
CalibrationTable representative_band(const NullCloud& cloud,
                                     std::size_t knots = CalibrationTable::kDefaultKnots);

/// Fraction of member CDFs that stay within mu +- 2 sigma at every knot.
/// `tolerance` widens the band by a fixed amount (e.g. one ECDF step, 1/M).
double band_coverage(const NullCloud& cloud, const CalibrationTable& table,
                     double tolerance = 0.0);

/// mu bar at `normalized`, linearly interpolated between knots and clamped
/// to [0,1]: 0 below the first knot, 1 above the last.
double p_value_lookup(const CalibrationTable& table, double normalized);

/// Sup distance between the piecewise-linear mu bar curves of two tables.
double table_distance(const CalibrationTable& a, const CalibrationTable& b);

struct IndependenceReport {
  MeasureId measure{};
  double distance = 0.0;
  CalibrationTable first;
  CalibrationTable second;
};

/// Builds tables from N(0,1)- and U(0,1)-driven simulations (or any two
/// laws) and reports the distance between their representative curves.
IndependenceReport input_independence_check(const MeasureSpec& spec, std::uint64_t seed,
                                            SimulationConfig cfg = {},
                                            Law first = Law::Normal,
                                            Law second = Law::Uniform);

std::vector<IndependenceReport> input_independence_check(std::span<const MeasureSpec> specs,
                                                         std::uint64_t seed,
                                                         SimulationConfig cfg = {},
                                                         Law first = Law::Normal,
                                                         Law second = Law::Uniform);

std::string table_to_json(const CalibrationTable& table);
/// Throws ArgumentError on schema or version mismatch.
CalibrationTable table_from_json(const std::string& text);
void save_table(const CalibrationTable& table, const std::filesystem::path& path);
CalibrationTable load_table(const std::filesystem::path& path);

/// `<measure>.calib.json`
std::string table_file_name(MeasureId id);

/// FNV-1a 64-bit digest (hex) of a file's bytes; recorded in run manifests.
std::string file_digest(const std::filesystem::path& path);

/// Calibration tables keyed by measure, typically loaded from a directory.
class CalibrationSet {
 public:
  CalibrationSet() = default;

  void add(CalibrationTable table);
  /// Loads every `*.calib.json` in `dir`.
  static CalibrationSet load_dir(const std::filesystem::path& dir);

  bool contains(MeasureId id) const { return tables_.count(id) != 0; }
  /// Throws std::runtime_error naming the measure when the table is missing.
  const CalibrationTable& at(MeasureId id) const;
  /// Digests of the files the set was loaded from, keyed by measure name.
  const std::map<std::string, std::string>& digests() const noexcept { return digests_; }
  std::size_t size() const noexcept { return tables_.size(); }

 private:
  std::map<MeasureId, CalibrationTable> tables_;
  std::map<std::string, std::string> digests_;
};

/// Fills p_value/reject of a CDF-measure outcome from its table.
void apply_calibration(MeasureOutcome& outcome, const CalibrationSet& tables, double alpha);

}  // namespace ddt
