#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ddt/calibration.hpp"
#include "ddt/datagen.hpp"
#include "ddt/detectors.hpp"

namespace ddt {

struct SynthBenchConfig {
  std::vector<SyntheticKind> kinds{SyntheticKind::Average};
  std::vector<std::size_t> dims{10};
  std::vector<ScanMethod> methods{ScanMethod::Poset};
  std::size_t repetitions = 100;
  std::size_t block_len = 250;
  std::size_t blocks = 21;
  std::uint64_t seed = 1;
  /// Method settings (quorum, ncd, kernel, martingale); reference and step
  /// are set by the bench.
  ScanPlan plan;
  unsigned jobs = 1;
};

struct SynthRun {
  SyntheticKind kind{};
  std::size_t d = 0;
  ScanMethod method{};
  std::size_t repetition = 0;
  std::optional<std::size_t> earliest;
  double ratio = 0.0;
  bool prerequisite_same = true;  // block 2 judged equal to block 1
};

struct SynthCell {
  SyntheticKind kind{};
  std::size_t d = 0;
  ScanMethod method{};
  std::size_t runs = 0;
  double median_ratio = 0.0;
  std::size_t detections = 0;
  std::size_t prerequisite_same = 0;
};

struct SynthBenchResult {
  std::vector<SynthRun> runs;
  std::vector<SynthCell> cells;
};

/// Series seed for (kind, d, repetition); shared by all methods.
std::uint64_t synth_series_seed(std::uint64_t seed, SyntheticKind kind, std::size_t d,
                                std::size_t repetition);

/// One synthetic run: scan until the first detection at or after 2N.
SynthRun run_synthetic_once(const Series& series, SyntheticKind kind, std::size_t d,
                            std::size_t repetition, ScanMethod method, const SynthBenchConfig& cfg,
                            const CalibrationSet& tables);

SynthBenchResult bench_synthetic(const SynthBenchConfig& cfg, const CalibrationSet& tables);

struct UniBenchConfig {
  std::vector<UniChange> changes{UniChange::Average};
  std::vector<Law> bases{Law::Normal};
  std::size_t series = 1000;
  std::uint64_t seed = 1;
  std::vector<double> levels{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  double alpha = 0.05;
  std::size_t step = 100;
  /// Measure sets compared; defaults to standard, extension and combined.
  std::map<std::string, std::vector<MeasureId>> sets;
  unsigned jobs = 1;
};

struct UniBenchRow {
  UniChange change{};
  Law base{};
  std::string set;
  double disagreement = 0.0;
  std::size_t found = 0;
  std::size_t matches = 0;
  std::size_t golden = 0;
  std::size_t error = 0;
};

std::map<std::string, std::vector<MeasureId>> default_unibench_sets();

std::vector<UniBenchRow> bench_unidim(const UniBenchConfig& cfg, const CalibrationSet& tables);

}  // namespace ddt
