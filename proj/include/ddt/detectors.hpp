#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ddt/calibration.hpp"
#include "ddt/conformal.hpp"
#include "ddt/measures.hpp"
#include "ddt/mmd.hpp"
#include "ddt/ncd.hpp"
#include "ddt/ordering.hpp"
#include "ddt/series.hpp"

namespace ddt {

enum class Verdict { Same, Different };

const char* verdict_name(Verdict v);

/// The ten measures used by the block methods by default.
std::vector<MeasureId> default_block_measures();
/// Rank baselines plus KS, phi and xi.
std::vector<MeasureId> standard_measures();
std::vector<MeasureId> extension_measures();

struct QuorumConfig {
  std::vector<MeasureId> measures = default_block_measures();
  double disagreement = 0.2;
  double alpha = 0.05;
};

/// Throws ArgumentError on an empty list, a bad fraction or a measure that
/// is neither calibratable nor a baseline.
void validate(const QuorumConfig& config);

/// Rejections needed for `different`: ceil(disagreement * measures), at
/// least 1.
std::size_t quorum_threshold(const QuorumConfig& config);

/// Throws ArgumentError when a configured measure has no outcome or an
/// outcome carries no significance.
Verdict quorum_verdict(std::span<const MeasureOutcome> outcomes, const QuorumConfig& config);

/// Evaluates the configured measures on two 1-D samples. CDF measures are
/// calibrated with `tables`; baselines carry their own significance.
std::vector<MeasureOutcome> evaluate_measures_1d(std::span<const double> r,
                                                 std::span<const double> w,
                                                 const QuorumConfig& config,
                                                 const CalibrationSet& tables);

/// Same over an ordering of d-dimensional windows. Baselines see raw values
/// when d = 1 and traversal positions otherwise.
std::vector<MeasureOutcome> evaluate_measures_ordered(std::span<const Point> r,
                                                      std::span<const Point> w,
                                                      OrderingMethod method,
                                                      const QuorumConfig& config,
                                                      const CalibrationSet& tables);

/// Quorum test of two p-value sequences (each of at least 30 values).
Verdict pi_distribution_check(std::span<const double> reference_p,
                              std::span<const double> window_p, const QuorumConfig& config,
                              const CalibrationSet& tables);

enum class ScanMethod { Poset, Mst, Ncd, MmdU2, MmdL2, Martingale, Measures1D };

const char* scan_method_name(ScanMethod m);
ScanMethod scan_method_from_name(std::string_view name);

struct ScanRecord {
  std::size_t window_start = 0;  // index of the first W point (martingale: of the point)
  ScanMethod method = ScanMethod::Poset;
  double raw = 0.0;
  double normalized = 0.0;
  double p_value = 0.0;  // confidence: rejects when above 1 - alpha
  Verdict verdict = Verdict::Same;
  // martingale only
  std::optional<bool> delta_reject;
  bool reset = false;
  // quorum methods only
  std::vector<MeasureOutcome> outcomes;
};

struct ScanPlan {
  Window reference{0, 250};
  std::size_t step = 250;
  ScanMethod method = ScanMethod::Poset;
  QuorumConfig quorum;
  NcdConfig ncd;
  KernelConfig kernel;
  MartingaleConfig martingale;
  StrangenessKind strangeness = StrangenessKind::NearestNeighbor;
  /// Martingale only: run the p-value distribution check and reset rule.
  bool pcheck = false;
  /// Stop after the first `different` window starting at or after this epoch.
  std::optional<std::size_t> stop_after_detection_from;
};

/// W has the reference length and starts at reference.start + step, then
/// every `step` points while it fits. One record per position.
std::vector<ScanRecord> block_scan(const Series& series, const ScanPlan& plan,
                                   const CalibrationSet& tables);

/// One record per point after the reference window.
std::vector<ScanRecord> martingale_scan(const Series& series, const ScanPlan& plan,
                                        const CalibrationSet* tables = nullptr);

/// Dispatches on plan.method.
std::vector<ScanRecord> run_scan(const Series& series, const ScanPlan& plan,
                                 const CalibrationSet& tables);

/// W start positions block_scan would visit.
std::vector<std::size_t> window_positions(std::size_t series_len, const ScanPlan& plan);

/// First `different` record starting at or after `from`.
std::optional<std::size_t> earliest_detection(std::span<const ScanRecord> records,
                                              std::size_t from);

/// 1 - (earliest - 2N)/(len - 2N); never detected gives 0.
double rejection_ratio(std::optional<std::size_t> earliest, std::size_t series_len,
                       std::size_t n);

/// max(0, found - golden) + max(0, golden - matches).
std::size_t error_count(std::size_t found, std::size_t matches, std::size_t golden);

}  // namespace ddt
