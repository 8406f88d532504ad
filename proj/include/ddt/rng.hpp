#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace ddt {

/// Every stochastic component draws from this engine.
using Rng = std::mt19937_64;

/// SplitMix64 finaliser.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Derives an independent stream seed from a root seed and a key path, e.g.
/// (seed, {N, repetition}) for calibration or (seed, {run, block}) for the
/// generators. The mapping is fixed; results never depend on thread timing.
std::uint64_t stream_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) noexcept;

inline Rng make_rng(std::uint64_t seed, std::initializer_list<std::uint64_t> keys = {}) {
  return Rng(stream_seed(seed, keys));
}

/// Named sampling laws used by calibration and the synthetic generators.
enum class Law { Normal, Uniform };

std::string_view law_name(Law law);
Law law_from_name(std::string_view name);

/// Standard variate of the law: N(0,1) or U(0,1).
double draw_standard(Law law, Rng& rng);

}  // namespace ddt
