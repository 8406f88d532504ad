#include "ddt/mmd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "ddt/error.hpp"
#include "ddt/rng.hpp"

namespace ddt {

namespace {

double sqdist(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ArgumentError("points of mixed dimension");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double t = a[i] - b[i];
    s += t * t;
  }
  return s;
}

void check_pair(std::span<const Point> r, std::span<const Point> w, bool even) {
  if (r.size() != w.size()) throw ArgumentError("mmd needs windows of equal size");
  if (r.size() < 2) throw ArgumentError("mmd needs at least two points per window");
  if (even && r.size() % 2 != 0) throw ArgumentError("mmd needs an even window size");
}

double resolve_sigma2(std::span<const Point> r, std::span<const Point> w,
                      const std::optional<double>& sigma2) {
  if (sigma2) {
    if (!(*sigma2 > 0.0)) throw ArgumentError("kernel bandwidth must be positive");
    return *sigma2;
  }
  return median_bandwidth(r, w);
}

// Gram matrix over the pooled points in lexicographic order, so the
// permutation null depends on the pooled set only, not on which side a
// point came from. `observed` holds the R positions then the W positions,
// each in input order.
struct Gram {
  std::size_t n = 0;
  std::vector<double> k;
  std::vector<std::size_t> observed;
  double operator()(std::size_t a, std::size_t b) const { return k[a * n + b]; }
};

Gram pooled_gram(std::span<const Point> r, std::span<const Point> w, double sigma2) {
  Gram g;
  g.n = r.size() + w.size();
  auto at = [&](std::size_t i) -> const Point& { return i < r.size() ? r[i] : w[i - r.size()]; };
  std::vector<std::size_t> order(g.n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return at(a) < at(b); });
  g.observed.assign(g.n, 0);
  for (std::size_t pos = 0; pos < g.n; ++pos) g.observed[order[pos]] = pos;
  g.k.assign(g.n * g.n, 1.0);
  const double scale = -1.0 / (2.0 * sigma2);
  for (std::size_t i = 0; i < g.n; ++i)
    for (std::size_t j = i + 1; j < g.n; ++j) {
      const double v = std::exp(scale * sqdist(at(order[i]), at(order[j])));
      g.k[i * g.n + j] = v;
      g.k[j * g.n + i] = v;
    }
  return g;
}

// idx[0..m) are the R side, idx[m..2m) the W side.
double u2_from_gram(const Gram& g, const std::vector<std::size_t>& idx, std::size_t m) {
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const auto ri = idx[i], wi = idx[m + i];
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j) continue;
      sxx += g(ri, idx[j]);
      syy += g(wi, idx[m + j]);
      sxy += g(ri, idx[m + j]);
    }
  }
  const double denom = static_cast<double>(m) * static_cast<double>(m - 1);
  return (sxx + syy - 2.0 * sxy) / denom;
}

struct L2Parts {
  double value = 0.0;
  double variance = 0.0;
};

L2Parts l2_from_gram(const Gram& g, const std::vector<std::size_t>& idx, std::size_t m) {
  // Welford over h-values; the variance is 2 * population variance of h.
  double mean = 0.0, m2 = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i + 1 < m; i += 2) {
    const auto x1 = idx[i], x2 = idx[i + 1], y1 = idx[m + i], y2 = idx[m + i + 1];
    const double h = g(x1, x2) + g(y1, y2) - g(x1, y2) - g(x2, y1);
    ++count;
    const double d = h - mean;
    mean += d / static_cast<double>(count);
    m2 += d * (h - mean);
  }
  return {mean, 2.0 * m2 / static_cast<double>(count)};
}

double upper_normal_tail(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

double permutation_p(const Gram& g, std::size_t m, MmdEstimator estimator, double observed,
                     std::size_t iterations, std::uint64_t seed, double alpha, bool early_stop,
                     bool* stopped_early = nullptr) {
  std::vector<std::size_t> idx(2 * m);
  std::size_t at_least = 0, done = 0;
  // A cutoff with tiny slack keeps ties from rounding noise counted.
  const double cut = observed - 1e-12 * std::max(1.0, std::fabs(observed));
  const auto limit = static_cast<std::size_t>(std::floor(alpha * static_cast<double>(iterations)));
  for (std::size_t it = 0; it < iterations; ++it) {
    auto rng = make_rng(seed, {it});
    std::iota(idx.begin(), idx.end(), 0);
    std::shuffle(idx.begin(), idx.end(), rng);
    const double v = estimator == MmdEstimator::U2 ? u2_from_gram(g, idx, m)
                                                   : l2_from_gram(g, idx, m).value;
    ++done;
    if (v >= cut) ++at_least;
    if (early_stop && at_least > limit) {
      if (stopped_early) *stopped_early = true;
      break;
    }
  }
  return static_cast<double>(at_least) / static_cast<double>(done);
}

}  // namespace

const char* estimator_name(MmdEstimator e) { return e == MmdEstimator::U2 ? "u2" : "l2"; }

double gaussian_kernel(std::span<const double> x, std::span<const double> y, double sigma2) {
  if (!(sigma2 > 0.0)) throw ArgumentError("kernel bandwidth must be positive");
  return std::exp(-sqdist(x, y) / (2.0 * sigma2));
}

double median_bandwidth(std::span<const Point> r, std::span<const Point> w) {
  if (r.size() != w.size()) throw ArgumentError("median bandwidth needs windows of equal size");
  const auto m = r.size();
  if (m % 2 != 0) throw ArgumentError("median bandwidth needs an even window size");
  if (m < 4) throw ArgumentError("median bandwidth needs at least four points per window");
  std::vector<double> d;
  d.reserve(2 * m);
  for (std::size_t i = 0; i + 1 < m; i += 2) {
    d.push_back(sqdist(r[i], r[i + 1]));
    d.push_back(sqdist(w[i], w[i + 1]));
    d.push_back(sqdist(r[i], w[i + 1]));
    d.push_back(sqdist(w[i], r[i + 1]));
  }
  std::sort(d.begin(), d.end());
  const auto n = d.size();
  const double med = n % 2 ? d[n / 2] : 0.5 * (d[n / 2 - 1] + d[n / 2]);
  if (med > 0.0) return med;
  for (double v : d)
    if (v > 0.0) return v;
  return 1.0;
}

MmdResult mmd_u2(std::span<const Point> r, std::span<const Point> w, const KernelConfig& config) {
  check_pair(r, w, false);
  const auto m = r.size();
  MmdResult out;
  out.estimator = MmdEstimator::U2;
  out.sigma2 = resolve_sigma2(r, w, config.sigma2);
  const auto g = pooled_gram(r, w, out.sigma2);
  out.value = u2_from_gram(g, g.observed, m);
  if (config.significance == MmdSignificance::Permutation) {
    if (config.permutations < 100) throw ArgumentError("permutation test needs >= 100 iterations");
    out.p_value = permutation_p(g, m, MmdEstimator::U2, out.value, config.permutations,
                                config.seed, config.alpha, config.early_stop);
    out.reject = *out.p_value < config.alpha;
  }
  return out;
}

MmdResult mmd_l2(std::span<const Point> r, std::span<const Point> w, const KernelConfig& config) {
  check_pair(r, w, true);
  const auto m = r.size();
  MmdResult out;
  out.estimator = MmdEstimator::L2;
  out.sigma2 = resolve_sigma2(r, w, config.sigma2);
  const double scale = -1.0 / (2.0 * out.sigma2);
  auto k = [&](const Point& a, const Point& b) { return std::exp(scale * sqdist(a, b)); };
  double mean = 0.0, m2 = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i + 1 < m; i += 2) {
    const double h = k(r[i], r[i + 1]) + k(w[i], w[i + 1]) - k(r[i], w[i + 1]) - k(r[i + 1], w[i]);
    ++count;
    const double d = h - mean;
    mean += d / static_cast<double>(count);
    m2 += d * (h - mean);
  }
  out.value = mean;
  out.variance_estimate = 2.0 * m2 / static_cast<double>(count);
  if (config.significance == MmdSignificance::AnalyticLinear) {
    const double sd = std::sqrt(out.variance_estimate);
    if (sd > 0.0) {
      out.p_value = upper_normal_tail(std::sqrt(static_cast<double>(m)) * out.value / sd);
    } else {
      out.p_value = out.value > 0.0 ? 0.0 : 1.0;
    }
  } else {
    if (config.permutations < 100) throw ArgumentError("permutation test needs >= 100 iterations");
    const auto g = pooled_gram(r, w, out.sigma2);
    out.p_value = permutation_p(g, m, MmdEstimator::L2, out.value, config.permutations,
                                config.seed, config.alpha, config.early_stop);
  }
  out.reject = *out.p_value < config.alpha;
  return out;
}

double mmd_permutation_test(std::span<const Point> r, std::span<const Point> w,
                            MmdEstimator estimator, std::size_t iterations,
                            std::uint64_t seed, std::optional<double> sigma2) {
  if (iterations < 100) throw ArgumentError("permutation test needs >= 100 iterations");
  check_pair(r, w, estimator == MmdEstimator::L2);
  const auto m = r.size();
  const double s2 = resolve_sigma2(r, w, sigma2);
  const auto g = pooled_gram(r, w, s2);
  const double observed = estimator == MmdEstimator::U2 ? u2_from_gram(g, g.observed, m)
                                                        : l2_from_gram(g, g.observed, m).value;
  return permutation_p(g, m, estimator, observed, iterations, seed, 0.05, false);
}

}  // namespace ddt
