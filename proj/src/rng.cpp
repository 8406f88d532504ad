#include "ddt/rng.hpp"

#include <string>

#include "ddt/error.hpp"

namespace ddt {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t stream_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) noexcept {
  std::uint64_t h = splitmix64(seed);
  for (auto k : keys) h = splitmix64(h ^ splitmix64(k + 0x632be59bd9b4e019ULL));
  return h;
}

std::string_view law_name(Law law) {
  return law == Law::Normal ? "normal" : "uniform";
}

Law law_from_name(std::string_view name) {
  if (name == "normal") return Law::Normal;
  if (name == "uniform") return Law::Uniform;
  throw ArgumentError("unknown generator '" + std::string(name) + "' (expected normal|uniform)");
}

double draw_standard(Law law, Rng& rng) {
  if (law == Law::Normal) return std::normal_distribution<double>(0.0, 1.0)(rng);
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

}  // namespace ddt
