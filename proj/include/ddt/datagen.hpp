#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ddt/rng.hpp"
#include "ddt/series.hpp"

namespace ddt {

enum class SyntheticKind { Average, Variance, Mixture };

const char* synthetic_name(SyntheticKind k);
SyntheticKind synthetic_from_name(std::string_view name);

/// Block layout of the synthetic suite. Blocks 1 and 2 are N(0,1); later
/// blocks follow `schedule` (empty: the default for the kind). Normal laws
/// are written (mean, standard deviation).
struct SyntheticPlan {
  SyntheticKind kind = SyntheticKind::Average;
  std::size_t blocks = 21;
  std::size_t block_len = 250;
  std::size_t d = 1;
  std::uint64_t seed = 1;
  /// One value per block from block 3 on: mean (average), standard
  /// deviation (variance) or uniform fraction (mixture).
  std::vector<double> schedule;
};

struct BlockParams {
  std::size_t start = 0;
  std::size_t length = 0;
  double mean = 0.0;
  double sd = 1.0;
  double uniform_fraction = 0.0;
};

struct GeneratedSeries {
  Series series;
  std::vector<BlockParams> blocks;
  std::string kind;
  std::uint64_t seed = 0;
};

/// Means 0.05..50, standard deviations 10^0.01..10 (both log-spaced) or
/// uniform fractions (k-2)/(blocks-2), for blocks 3..blocks.
std::vector<double> default_schedule(SyntheticKind kind, std::size_t blocks);

/// Throws ArgumentError on fewer than 3 blocks, empty blocks, d = 0 or a
/// schedule of the wrong length.
GeneratedSeries gen_average_series(const SyntheticPlan& plan);
GeneratedSeries gen_variance_series(const SyntheticPlan& plan);
GeneratedSeries gen_mixture_series(const SyntheticPlan& plan);
GeneratedSeries gen_synthetic(const SyntheticPlan& plan);

/// Half-width of the uniform component of the mixture suite.
inline constexpr double kMixtureHalfWidth = 2.4;

struct ClassifiedRow {
  std::string key;
  Point values;
};

struct ClassifiedSeries {
  Series series;
  std::vector<std::size_t> boundaries;  // start index of every class after the first
  std::vector<std::pair<std::string, std::size_t>> classes;  // key, size, in output order
};

/// Groups rows by key, shuffles each group with the seed, and concatenates
/// groups largest first (ties by key). Throws ArgumentError with fewer than
/// two classes.
ClassifiedSeries classified_to_series(const std::vector<ClassifiedRow>& rows, std::uint64_t seed);

enum class UniChange { Average, Variance, Both };

const char* unichange_name(UniChange c);
UniChange unichange_from_name(std::string_view name);

struct UniBenchPlan {
  std::size_t windows = 2;   // M in [2, 20]
  std::size_t length = 100;  // T in {100, ..., 1000}
  std::size_t embed = 2;     // 1-based window that repeats the reference law
  Law base = Law::Normal;
  UniChange change = UniChange::Average;
  std::uint64_t seed = 1;
};

/// Draws M, T and the embedding position for series `index` of a suite.
UniBenchPlan draw_unibench_plan(UniChange change, Law base, std::uint64_t seed,
                                std::size_t index);

struct UniWindow {
  std::size_t start = 0;
  std::size_t length = 0;
  double mean = 0.0;
  double sd = 0.0;  // normal: standard deviation; uniform: half-width
  bool reference = false;
  bool embedded = false;
};

struct UniBenchSeries {
  Series series;
  UniBenchPlan plan;
  double m0 = 0.0;
  double v0 = 0.0;
  std::vector<UniWindow> windows;
};

/// Throws ArgumentError when the plan is outside the documented ranges.
UniBenchSeries gen_unibench(const UniBenchPlan& plan);

/// Annotation documents written next to generated series.
std::string annotation_json(const GeneratedSeries& g);
std::string annotation_json(const UniBenchSeries& g);

}  // namespace ddt
