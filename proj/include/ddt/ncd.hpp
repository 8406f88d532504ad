#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ddt/series.hpp"

namespace ddt {

using Bytes = std::vector<std::uint8_t>;

/// Raw DEFLATE stream (no zlib/gzip container) at a fixed level.
struct DeflateCodec {
  int level = 6;

  std::string id() const;
  /// Compressed length in bytes. Throws EvaluationError on codec failure.
  std::size_t compressed_size(std::span<const std::uint8_t> data) const;
  Bytes compress(std::span<const std::uint8_t> data) const;
};

struct NcdConfig {
  DeflateCodec codec;
  std::size_t bootstrap_runs = 100;
  double swap_fraction = 0.5;
  std::uint64_t seed = 1;
  double alpha = 0.05;
};

struct NcdResult {
  double ncd = 0.0;
  double p_value = 0.0;
  bool reject = false;
  std::vector<double> null_distances;  // sorted
};

/// Little-endian float64 values, point-major.
Bytes encode_window(std::span<const Point> points);
Bytes encode_window(std::span<const std::span<const double>> points);

/// (C(rw) - min(C(r), C(w))) / max(C(r), C(w)).
double ncd(std::span<const std::uint8_t> r, std::span<const std::uint8_t> w,
           const DeflateCodec& codec = {});

/// Swap bootstrap. Each run swaps floor(swap_fraction * m) seeded random
/// aligned pairs r_k <-> w_k and records the NCD of the swapped windows.
/// Throws ArgumentError on unequal window sizes or invalid config.
std::vector<double> bootstrap_null(std::span<const Point> r, std::span<const Point> w,
                                   const NcdConfig& config);

/// p = #{null < observed} / runs; reject iff p > 1 - alpha.
NcdResult ncd_test(double observed, std::vector<double> null_distances, double alpha);

/// Encodes, computes the observed NCD and the bootstrap null, then tests.
NcdResult ncd_window_test(std::span<const Point> r, std::span<const Point> w,
                          const NcdConfig& config);

void validate(const NcdConfig& config);

}  // namespace ddt
