#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>

#include "ddt/series.hpp"

namespace ddt {

enum class MmdEstimator { U2, L2 };
enum class MmdSignificance { AnalyticLinear, Permutation };

struct KernelConfig {
  std::optional<double> sigma2;  // empty: median heuristic per window pair
  MmdSignificance significance = MmdSignificance::Permutation;
  std::size_t permutations = 500;
  std::uint64_t seed = 1;
  double alpha = 0.05;
  /// Stop permuting once the verdict cannot change (the p-value is then a
  /// partial count but the reject flag is exact).
  bool early_stop = false;
};

struct MmdResult {
  MmdEstimator estimator = MmdEstimator::U2;
  double value = 0.0;
  double variance_estimate = 0.0;  // l2 only
  double sigma2 = 0.0;
  std::optional<double> p_value;   // probability of a value this large under H0
  bool reject = false;
};

/// exp(-|x-y|^2 / (2 sigma2)). Throws ArgumentError if sigma2 <= 0.
double gaussian_kernel(std::span<const double> x, std::span<const double> y, double sigma2);

/// Median of the squared distances r_{2i-1}-r_{2i}, w_{2i-1}-w_{2i},
/// r_{2i-1}-w_{2i}, w_{2i-1}-r_{2i}; falls back to the smallest positive
/// one, then to 1. Needs |R| = |W| = m, m even, m >= 4.
double median_bandwidth(std::span<const Point> r, std::span<const Point> w);

/// Unbiased quadratic estimator. Permutation p-value when the config asks
/// for permutation significance.
MmdResult mmd_u2(std::span<const Point> r, std::span<const Point> w, const KernelConfig& config);

/// Linear-time estimator over consecutive pairs with a normal-tail p-value
/// (analytic) or a permutation p-value.
MmdResult mmd_l2(std::span<const Point> r, std::span<const Point> w, const KernelConfig& config);

/// Fraction of random equal splits of R u W whose estimate is >= the
/// observed one. Throws ArgumentError for fewer than 100 iterations.
double mmd_permutation_test(std::span<const Point> r, std::span<const Point> w,
                            MmdEstimator estimator, std::size_t iterations,
                            std::uint64_t seed, std::optional<double> sigma2 = {});

const char* estimator_name(MmdEstimator e);

}  // namespace ddt
