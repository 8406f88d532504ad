#include "ddt/ncd.hpp"

#include <zlib.h>

#include <algorithm>
#include <bit>
#include <cstring>
#include <numeric>

#include "ddt/error.hpp"
#include "ddt/rng.hpp"

namespace ddt {

std::string DeflateCodec::id() const { return "deflate-raw-" + std::to_string(level); }

Bytes DeflateCodec::compress(std::span<const std::uint8_t> data) const {
  z_stream zs{};
  if (deflateInit2(&zs, level, Z_DEFLATED, -15, 8, Z_DEFAULT_STRATEGY) != Z_OK)
    throw EvaluationError("deflate init failed");
  Bytes out(deflateBound(&zs, static_cast<uLong>(data.size())));
  zs.next_in = const_cast<Bytef*>(data.data());
  zs.avail_in = static_cast<uInt>(data.size());
  zs.next_out = out.data();
  zs.avail_out = static_cast<uInt>(out.size());
  const int rc = deflate(&zs, Z_FINISH);
  const auto produced = zs.total_out;
  deflateEnd(&zs);
  if (rc != Z_STREAM_END) throw EvaluationError("deflate failed");
  out.resize(produced);
  return out;
}

std::size_t DeflateCodec::compressed_size(std::span<const std::uint8_t> data) const {
  return compress(data).size();
}

namespace {

void append_double(Bytes& out, double v) {
  auto bits = std::bit_cast<std::uint64_t>(v);
  for (int i = 0; i < 8; ++i) {
    out.push_back(static_cast<std::uint8_t>(bits & 0xffu));
    bits >>= 8;
  }
}

template <class Rows>
Bytes encode_rows(const Rows& points) {
  if (points.empty()) throw ArgumentError("cannot encode an empty window");
  Bytes out;
  out.reserve(points.size() * points[0].size() * 8);
  for (const auto& p : points)
    for (double v : p) append_double(out, v);
  return out;
}

}  // namespace

Bytes encode_window(std::span<const Point> points) { return encode_rows(points); }
Bytes encode_window(std::span<const std::span<const double>> points) {
  return encode_rows(points);
}

double ncd(std::span<const std::uint8_t> r, std::span<const std::uint8_t> w,
           const DeflateCodec& codec) {
  if (r.empty() || w.empty()) throw ArgumentError("ncd needs non-empty inputs");
  Bytes rw(r.begin(), r.end());
  rw.insert(rw.end(), w.begin(), w.end());
  const double cr = static_cast<double>(codec.compressed_size(r));
  const double cw = static_cast<double>(codec.compressed_size(w));
  const double crw = static_cast<double>(codec.compressed_size(rw));
  return (crw - std::min(cr, cw)) / std::max(cr, cw);
}

void validate(const NcdConfig& config) {
  if (config.bootstrap_runs < 10) throw ArgumentError("bootstrap runs must be at least 10");
  if (!(config.swap_fraction > 0.0 && config.swap_fraction <= 1.0))
    throw ArgumentError("swap fraction must be in (0,1]");
  if (config.codec.level < 0 || config.codec.level > 9)
    throw ArgumentError("deflate level must be in 0..9");
  if (!(config.alpha > 0.0 && config.alpha < 1.0)) throw ArgumentError("alpha must be in (0,1)");
}

std::vector<double> bootstrap_null(std::span<const Point> r, std::span<const Point> w,
                                   const NcdConfig& config) {
  validate(config);
  if (r.size() != w.size()) throw ArgumentError("bootstrap needs windows of equal size");
  if (r.empty()) throw ArgumentError("bootstrap needs non-empty windows");
  const auto m = r.size();
  const auto swaps = static_cast<std::size_t>(config.swap_fraction * static_cast<double>(m));
  std::vector<double> out;
  out.reserve(config.bootstrap_runs);
  std::vector<std::size_t> idx(m);
  for (std::size_t run = 0; run < config.bootstrap_runs; ++run) {
    auto rng = make_rng(config.seed, {run});
    std::iota(idx.begin(), idx.end(), 0);
    // partial Fisher-Yates: the first `swaps` entries are a uniform subset
    for (std::size_t k = 0; k < swaps; ++k) {
      std::uniform_int_distribution<std::size_t> pick(k, m - 1);
      std::swap(idx[k], idx[pick(rng)]);
    }
    std::vector<Point> rs(r.begin(), r.end()), ws(w.begin(), w.end());
    for (std::size_t k = 0; k < swaps; ++k) std::swap(rs[idx[k]], ws[idx[k]]);
    out.push_back(ncd(encode_window(rs), encode_window(ws), config.codec));
  }
  std::sort(out.begin(), out.end());
  return out;
}

NcdResult ncd_test(double observed, std::vector<double> null_distances, double alpha) {
  if (null_distances.empty()) throw ArgumentError("ncd test needs a non-empty null");
  std::sort(null_distances.begin(), null_distances.end());
  NcdResult out;
  out.ncd = observed;
  const auto below = std::lower_bound(null_distances.begin(), null_distances.end(), observed) -
                     null_distances.begin();
  out.p_value = static_cast<double>(below) / static_cast<double>(null_distances.size());
  out.reject = out.p_value > 1.0 - alpha;
  out.null_distances = std::move(null_distances);
  return out;
}

NcdResult ncd_window_test(std::span<const Point> r, std::span<const Point> w,
                          const NcdConfig& config) {
  const double observed = ncd(encode_window(r), encode_window(w), config.codec);
  return ncd_test(observed, bootstrap_null(r, w, config), config.alpha);
}

}  // namespace ddt
