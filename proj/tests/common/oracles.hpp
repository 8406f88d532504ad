#pragma once

// Independent reference implementations shared by the unit and acceptance tests.

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "ddt/measures.hpp"
#include "ddt/series.hpp"

namespace oracles {

// Oracle: F(t) by counting, at every distinct pooled value.
struct Direct {
  std::vector<double> x, y;
};

inline Direct direct_cdfs(const std::vector<double>& r, const std::vector<double>& w) {
  std::vector<double> pts(r);
  pts.insert(pts.end(), w.begin(), w.end());
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  Direct d;
  for (double t : pts) {
    std::size_t cr = 0, cw = 0;
    for (double v : r) cr += v <= t;
    for (double v : w) cw += v <= t;
    d.x.push_back(static_cast<double>(cr) / static_cast<double>(r.size()));
    d.y.push_back(static_cast<double>(cw) / static_cast<double>(w.size()));
  }
  return d;
}

// Each formula written out on its own.
inline double measure_oracle(ddt::MeasureId id, const Direct& d) {
  const auto& x = d.x;
  const auto& y = d.y;
  const std::size_t n = x.size();
  double acc = 0.0;
  switch (id) {
    case ddt::MeasureId::Bhattacharyya:
      for (std::size_t i = 0; i < n; ++i) acc += std::sqrt(x[i] * y[i]);
      return acc;
    case ddt::MeasureId::Camberra:
      for (std::size_t i = 0; i < n; ++i)
        if (x[i] + y[i] != 0.0) acc += std::fabs(x[i] - y[i]) / (x[i] + y[i]);
      return acc;
    case ddt::MeasureId::ChiSquare:
      for (std::size_t i = 0; i < n; ++i)
        if (x[i] != 0.0) acc += (x[i] - y[i]) * (x[i] - y[i]) / x[i];
      return acc;
    case ddt::MeasureId::CramerVonMises:
      for (std::size_t i = 0; i < n; ++i) acc += (x[i] - y[i]) * (x[i] - y[i]);
      return acc;
    case ddt::MeasureId::Euclid:
      for (std::size_t i = 0; i < n; ++i) acc += (x[i] - y[i]) * (x[i] - y[i]);
      return std::sqrt(acc);
    case ddt::MeasureId::Hellinger:
      for (std::size_t i = 0; i < n; ++i) {
        const double t = std::sqrt(x[i]) - std::sqrt(y[i]);
        acc += t * t;
      }
      return acc / 2.0;
    case ddt::MeasureId::JinK:
      for (std::size_t i = 0; i < n; ++i)
        if (x[i] != 0.0) acc += x[i] * std::log2(x[i] / ((x[i] + y[i]) / 2.0));
      return acc;
    case ddt::MeasureId::JinL:
    case ddt::MeasureId::JensenShannon:
      for (std::size_t i = 0; i < n; ++i) {
        const double m = (x[i] + y[i]) / 2.0;
        double t = 0.0;
        if (x[i] != 0.0) t += x[i] * std::log2(x[i] / m);
        if (y[i] != 0.0) t += y[i] * std::log2(y[i] / m);
        if (id == ddt::MeasureId::JensenShannon) t *= 0.5;
        acc += t;
      }
      return acc;
    case ddt::MeasureId::KolmogorovSmirnov:
      for (std::size_t i = 0; i < n; ++i) acc = std::max(acc, std::fabs(x[i] - y[i]));
      return acc;
    case ddt::MeasureId::KLI:
      for (std::size_t i = 0; i < n; ++i)
        if (x[i] != 0.0 && y[i] != 0.0) acc += x[i] * std::log2(x[i] / y[i]);
      return acc;
    case ddt::MeasureId::KLJ:
      for (std::size_t i = 0; i < n; ++i)
        if (x[i] != 0.0 && y[i] != 0.0) acc += (x[i] - y[i]) * std::log2(x[i] / y[i]);
      return acc;
    case ddt::MeasureId::Kr:
    case ddt::MeasureId::Ks:
    case ddt::MeasureId::Ks2:
      for (std::size_t i = 0; i < n; ++i)
        if (y[i] != 0.0) acc += std::pow(x[i], 2.0) * std::pow(y[i], -1.0);
      if (id == ddt::MeasureId::Kr) return std::log2(acc);
      if (id == ddt::MeasureId::Ks) return acc - 1.0;
      return (acc - 1.0) / 2.0;
    case ddt::MeasureId::Minkowsky:
      for (std::size_t i = 0; i < n; ++i) acc += std::pow(std::fabs(x[i] - y[i]), 3.0);
      return std::cbrt(acc);
    case ddt::MeasureId::Phi:
      for (std::size_t i = 0; i < n; ++i) {
        const double m = (x[i] + y[i]) / 2.0;
        const double den = std::min(m, 1.0 - m);
        if (den > 0.0) acc = std::max(acc, std::fabs(x[i] - y[i]) / std::sqrt(den));
      }
      return acc;
    case ddt::MeasureId::Variational:
      for (std::size_t i = 0; i < n; ++i) acc += std::fabs(x[i] - y[i]);
      return acc;
    case ddt::MeasureId::Xi:
      for (std::size_t i = 0; i < n; ++i) {
        const double m = (x[i] + y[i]) / 2.0;
        const double den = m * (1.0 - m);
        if (den > 0.0) acc = std::max(acc, std::fabs(x[i] - y[i]) / std::sqrt(den));
      }
      return acc;
    default:
      break;
  }
  throw std::logic_error("no oracle for this measure");
}

inline bool leq(const ddt::Point& a, const ddt::Point& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

// Longest chain of strictly smaller vectors below each point, by brute force.
inline std::vector<std::size_t> oracle_levels(const std::vector<ddt::Point>& v) {
  const auto n = v.size();
  std::vector<std::size_t> level(n, 0);
  std::function<std::size_t(std::size_t)> depth = [&](std::size_t i) -> std::size_t {
    if (level[i]) return level[i];
    std::size_t best = 1;
    for (std::size_t j = 0; j < n; ++j)
      if (leq(v[j], v[i]) && v[j] != v[i]) best = std::max(best, depth(j) + 1);
    return level[i] = best;
  };
  for (std::size_t i = 0; i < n; ++i) depth(i);
  return level;
}

inline double dist(const ddt::Point& a, const ddt::Point& b) {
  double s = 0.0;
  for (std::size_t c = 0; c < a.size(); ++c) s += (a[c] - b[c]) * (a[c] - b[c]);
  return std::sqrt(s);
}

// Minimum over every labelled tree (Pruefer sequences). Weights summed in
// ascending order; all minimum trees share one weight multiset.
inline double brute_mst(const std::vector<ddt::Point>& v) {
  const std::size_t n = v.size();
  if (n == 2) return dist(v[0], v[1]);
  std::vector<std::size_t> seq(n - 2, 0);
  double best = INFINITY;
  while (true) {
    std::vector<std::size_t> deg(n, 1);
    for (auto s : seq) ++deg[s];
    std::vector<double> w;
    for (auto s : seq) {
      std::size_t leaf = 0;
      while (deg[leaf] != 1) ++leaf;
      w.push_back(dist(v[leaf], v[s]));
      --deg[leaf];
      --deg[s];
    }
    std::size_t a = n, b = n;
    for (std::size_t i = 0; i < n; ++i)
      if (deg[i] == 1) (a == n ? a : b) = i;
    w.push_back(dist(v[a], v[b]));
    std::sort(w.begin(), w.end());
    double total = 0.0;
    for (double x : w) total += x;
    best = std::min(best, total);
    std::size_t k = 0;
    while (k < seq.size() && ++seq[k] == n) seq[k++] = 0;
    if (k == seq.size()) break;
  }
  return best;
}

}  // namespace oracles
