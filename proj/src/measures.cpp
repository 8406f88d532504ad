#include "ddt/measures.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

#include "ddt/error.hpp"

namespace ddt {

Ecdf1D::Ecdf1D(std::vector<double> support, std::vector<double> cum, std::size_t n)
    : support_(std::move(support)), cum_(std::move(cum)), n_(n) {
  if (support_.empty() || support_.size() != cum_.size())
    throw ArgumentError("ECDF support and cumulative values must be non-empty and aligned");
  for (std::size_t i = 1; i < support_.size(); ++i) {
    if (!(support_[i] > support_[i - 1]))
      throw ArgumentError("ECDF support must be strictly increasing");
    if (cum_[i] < cum_[i - 1]) throw ArgumentError("ECDF must be non-decreasing");
  }
  if (cum_.front() < 0.0 || cum_.back() != 1.0)
    throw ArgumentError("ECDF must take values in [0,1] and end at 1");
}

double Ecdf1D::operator()(double x) const {
  auto it = std::upper_bound(support_.begin(), support_.end(), x);
  if (it == support_.begin()) return 0.0;
  return cum_[static_cast<std::size_t>(it - support_.begin()) - 1];
}

Ecdf1D ecdf_from_samples(std::span<const double> samples) {
  if (samples.empty()) throw ArgumentError("cannot build an ECDF from no samples");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const auto n = sorted.size();
  std::vector<double> support;
  std::vector<double> cum;
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(sorted[i])) throw ArgumentError("ECDF samples must be finite");
    if (i + 1 < n && sorted[i + 1] == sorted[i]) continue;
    support.push_back(sorted[i]);
    cum.push_back(static_cast<double>(i + 1) / static_cast<double>(n));
  }
  return Ecdf1D(std::move(support), std::move(cum), n);
}

PooledValues pooled_eval(const Ecdf1D& f_r, const Ecdf1D& f_w) {
  if (f_r.empty() || f_w.empty()) throw ArgumentError("pooled evaluation needs non-empty ECDFs");
  const auto& sr = f_r.support();
  const auto& sw = f_w.support();
  PooledValues out;
  out.support.reserve(sr.size() + sw.size());
  out.x.reserve(sr.size() + sw.size());
  out.y.reserve(sr.size() + sw.size());
  std::size_t i = 0, j = 0;
  double cr = 0.0, cw = 0.0;
  while (i < sr.size() || j < sw.size()) {
    double s;
    if (j == sw.size() || (i < sr.size() && sr[i] < sw[j])) {
      s = sr[i];
      cr = f_r.cum()[i++];
    } else if (i == sr.size() || sw[j] < sr[i]) {
      s = sw[j];
      cw = f_w.cum()[j++];
    } else {
      s = sr[i];
      cr = f_r.cum()[i++];
      cw = f_w.cum()[j++];
    }
    out.support.push_back(s);
    out.x.push_back(cr);
    out.y.push_back(cw);
  }
  return out;
}

namespace {

struct CatalogueEntry {
  MeasureId id;
  std::string_view name;
};

constexpr std::array<CatalogueEntry, kMeasureCount> kNames{{
    {MeasureId::Bhattacharyya, "bhattacharyya"},
    {MeasureId::Camberra, "camberra"},
    {MeasureId::ChiSquare, "chi2"},
    {MeasureId::CramerVonMises, "cvm"},
    {MeasureId::Euclid, "euclid"},
    {MeasureId::Hellinger, "hellinger"},
    {MeasureId::JinK, "jink"},
    {MeasureId::JinL, "jinl"},
    {MeasureId::JensenShannon, "js"},
    {MeasureId::KolmogorovSmirnov, "ks"},
    {MeasureId::KLI, "kli"},
    {MeasureId::KLJ, "klj"},
    {MeasureId::Kr, "k_r"},
    {MeasureId::Ks, "k_s"},
    {MeasureId::Ks2, "k_s2"},
    {MeasureId::Minkowsky, "minkowsky"},
    {MeasureId::Phi, "phi"},
    {MeasureId::Variational, "variational"},
    {MeasureId::Xi, "xi"},
    {MeasureId::WilcoxBaseline, "wilcox"},
    {MeasureId::TTestBaseline, "ttest"},
}};

}  // namespace

std::string_view measure_name(MeasureId id) {
  for (const auto& e : kNames)
    if (e.id == id) return e.name;
  throw ArgumentError("unknown measure id");
}

MeasureId measure_from_name(std::string_view name) {
  for (const auto& e : kNames)
    if (e.name == name) return e.id;
  throw ArgumentError("unknown measure '" + std::string(name) + "'");
}

std::vector<MeasureId> all_measures() {
  std::vector<MeasureId> out;
  for (const auto& e : kNames) out.push_back(e.id);
  return out;
}

MeasureSpec measure_spec(MeasureId id) {
  using enum NormKind;
  using N = NormalizerKind;
  using G = ScaleKind;
  using T = TermKind;
  switch (id) {
    case MeasureId::Bhattacharyya:
      return {id, Sum, N::None, G::Identity, T::SqrtProduct, 0.0, true, false};
    case MeasureId::Camberra:
      return {id, Sum, N::InvSqrtN, G::Identity, T::CamberraRatio, 0.0, true, true};
    case MeasureId::ChiSquare:
      return {id, Sum, N::One, G::Identity, T::ChiSquare, 0.0, false, true};
    case MeasureId::CramerVonMises:
      return {id, L2, N::One, G::Square, T::Difference, 0.0, true, true};
    case MeasureId::Euclid:
      return {id, L2, N::One, G::Identity, T::Difference, 0.0, true, true};
    case MeasureId::Hellinger:
      return {id, Sum, N::One, G::Half, T::HellingerSquare, 0.0, true, true};
    case MeasureId::JinK:
      return {id, Sum, N::InvSqrtN, G::Identity, T::JinK, 0.0, false, false};
    case MeasureId::JinL:
      return {id, Sum, N::One, G::Identity, T::JinL, 0.0, true, true};
    case MeasureId::JensenShannon:
      return {id, Sum, N::One, G::Identity, T::JensenShannon, 0.0, true, true};
    case MeasureId::KolmogorovSmirnov:
      return {id, Max, N::SqrtN, G::Identity, T::Difference, 0.0, true, true};
    case MeasureId::KLI:
      return {id, Sum, N::InvSqrtN, G::Identity, T::KLI, 0.0, false, false};
    case MeasureId::KLJ:
      return {id, Sum, N::One, G::Identity, T::KLJ, 0.0, true, true};
    case MeasureId::Kr:
      return {id, Sum, N::None, G::LogOverRMinus1, T::Chernoff, 2.0, false, false};
    case MeasureId::Ks:
      return {id, Sum, N::None, G::MinusOneOverSMinus1, T::Chernoff, 2.0, false, false};
    case MeasureId::Ks2:
      return {id, Sum, N::None, G::MinusOneOverSSMinus1, T::Chernoff, 2.0, false, false};
    case MeasureId::Minkowsky:
      return {id, Lr, N::Log2N, G::Identity, T::Difference, 3.0, true, true};
    case MeasureId::Phi:
      return {id, Max, N::SqrtNOverLog2N, G::Identity, T::PhiRatio, 0.0, true, true};
    case MeasureId::Variational:
      return {id, L1, N::InvSqrtN, G::Identity, T::Difference, 0.0, true, true};
    case MeasureId::Xi:
      return {id, Max, N::SqrtNOverLog2N, G::Identity, T::XiRatio, 0.0, true, true};
    case MeasureId::WilcoxBaseline:
    case MeasureId::TTestBaseline:
      return {id, Sum, N::None, G::Identity, T::RankBaseline, 0.0, true, false};
  }
  throw ArgumentError("unknown measure id");
}

MeasureSpec measure_spec(MeasureId id, double param) {
  auto spec = measure_spec(id);
  switch (id) {
    case MeasureId::Minkowsky:
      if (!(param >= 1.0)) throw ArgumentError("Minkowsky order must be >= 1");
      break;
    case MeasureId::Kr:
    case MeasureId::Ks:
      if (!(param > 0.0)) throw ArgumentError("generalized measure parameter must be > 0");
      break;
    case MeasureId::Ks2:
      if (!(param >= 0.0)) throw ArgumentError("generalized measure parameter must be >= 0");
      break;
    default:
      throw ArgumentError("measure '" + std::string(measure_name(id)) + "' takes no parameter");
  }
  spec.param = param;
  return spec;
}

std::vector<MeasureId> calibratable_measures() {
  std::vector<MeasureId> out;
  for (auto id : all_measures())
    if (measure_spec(id).calibratable) out.push_back(id);
  return out;
}

void MeasureOutcome::set_significance(double p, double alpha) {
  if (!(p >= 0.0 && p <= 1.0)) throw ArgumentError("p-value outside [0,1]");
  p_value = p;
  reject = p > 1.0 - alpha;
}

double normalizer(NormalizerKind kind, std::size_t n) {
  const double dn = static_cast<double>(n);
  switch (kind) {
    case NormalizerKind::One:
    case NormalizerKind::None:
      return 1.0;
    case NormalizerKind::SqrtN:
      return std::sqrt(dn);
    case NormalizerKind::InvSqrtN:
      return 1.0 / std::sqrt(dn);
    case NormalizerKind::Log2N:
      return std::log2(dn);
    case NormalizerKind::SqrtNOverLog2N:
      return std::sqrt(dn) / std::log2(dn);
  }
  return 1.0;
}

namespace {

// 0 log(0/.) = 0
inline double xlog2(double a, double b) { return a == 0.0 ? 0.0 : a * std::log2(a / b); }

// One psi term. Returns false if the term is undefined and must be skipped.
bool term(TermKind kind, double param, double x, double y, double& t) {
  switch (kind) {
    case TermKind::SqrtProduct:
      t = std::sqrt(x * y);
      return true;
    case TermKind::CamberraRatio:
      if (x + y == 0.0) return false;
      t = std::fabs(x - y) / (x + y);
      return true;
    case TermKind::ChiSquare:
      if (x == 0.0) return false;
      t = (x - y) * (x - y) / x;
      return true;
    case TermKind::Difference:
      t = x - y;
      return true;
    case TermKind::AbsDifference:
      t = std::fabs(x - y);
      return true;
    case TermKind::HellingerSquare: {
      const double d = std::sqrt(x) - std::sqrt(y);
      t = d * d;
      return true;
    }
    case TermKind::JinK:
      if (x == 0.0) {
        t = 0.0;
        return true;
      }
      t = xlog2(x, (x + y) / 2.0);
      return true;
    case TermKind::JinL:
    case TermKind::JensenShannon: {
      const double m = (x + y) / 2.0;
      if (m == 0.0) {
        t = 0.0;  // 0 log(0/0) = 0
        return true;
      }
      t = xlog2(x, m) + xlog2(y, m);
      if (kind == TermKind::JensenShannon) t *= 0.5;
      return true;
    }
    case TermKind::KLI:
      if (x == 0.0 || y == 0.0) return false;
      t = x * std::log2(x / y);
      return true;
    case TermKind::KLJ:
      if (x == 0.0 || y == 0.0) return false;
      t = (x - y) * std::log2(x / y);
      return true;
    case TermKind::Chernoff: {
      const double s = param;
      if (y == 0.0 && 1.0 - s < 0.0) return false;
      if (x == 0.0 && s < 0.0) return false;
      const double xs = (s == 0.0) ? 1.0 : std::pow(x, s);
      const double ys = (s == 1.0) ? 1.0 : std::pow(y, 1.0 - s);
      t = xs * ys;
      return true;
    }
    case TermKind::PhiRatio: {
      const double m = (x + y) / 2.0;
      const double den = std::min(m, 1.0 - m);
      if (den <= 0.0) return false;
      t = std::fabs(x - y) / std::sqrt(den);
      return true;
    }
    case TermKind::XiRatio: {
      const double m = (x + y) / 2.0;
      const double den = m * (1.0 - m);
      if (den <= 0.0) return false;
      t = std::fabs(x - y) / std::sqrt(den);
      return true;
    }
    case TermKind::RankBaseline:
      break;
  }
  throw ArgumentError("measure has no per-component comparator");
}

double kli(std::span<const double> x, std::span<const double> y) {
  double sum = 0.0;
  bool any = false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0.0 || y[i] == 0.0) continue;
    sum += x[i] * std::log2(x[i] / y[i]);
    any = true;
  }
  if (!any) throw EvaluationError("kli: every term is undefined");
  return sum;
}

}  // namespace

double raw_from_pooled(const MeasureSpec& spec, std::span<const double> x,
                       std::span<const double> y) {
  if (x.size() != y.size() || x.empty())
    throw ArgumentError("pooled vectors must be non-empty and of equal length");
  if (spec.psi == TermKind::RankBaseline)
    throw ArgumentError("rank baselines need raw samples, not CDF values");

  // K_s^2 at s = 0 and the generalized family at 1 reduce to KLI.
  if (spec.psi == TermKind::Chernoff) {
    if (spec.param == 1.0) return kli(x, y);
    if (spec.id == MeasureId::Ks2 && spec.param == 0.0) return kli(y, x);
  }

  double acc = 0.0;
  std::size_t used = 0;
  const bool squares_only = spec.norm == NormKind::L2 && spec.gamma == ScaleKind::Square;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double t = 0.0;
    if (!term(spec.psi, spec.param, x[i], y[i], t)) continue;
    ++used;
    switch (spec.norm) {
      case NormKind::Sum:
        acc += t;
        break;
      case NormKind::L1:
        acc += std::fabs(t);
        break;
      case NormKind::L2:
        acc += t * t;
        break;
      case NormKind::Lr:
        acc += std::pow(std::fabs(t), spec.param);
        break;
      case NormKind::Max:
        acc = std::max(acc, std::fabs(t));
        break;
    }
  }
  if (used == 0)
    throw EvaluationError(std::string(measure_name(spec.id)) + ": every term is undefined");

  double norm = acc;
  if (spec.norm == NormKind::L2 && !squares_only) norm = std::sqrt(acc);
  if (spec.norm == NormKind::Lr) norm = std::pow(acc, 1.0 / spec.param);

  double out = norm;
  switch (spec.gamma) {
    case ScaleKind::Identity:
      break;
    case ScaleKind::Square:
      out = squares_only ? acc : norm * norm;
      break;
    case ScaleKind::Half:
      out = norm / 2.0;
      break;
    case ScaleKind::LogOverRMinus1:
      out = std::log2(norm) / (spec.param - 1.0);
      break;
    case ScaleKind::MinusOneOverSMinus1:
      out = (norm - 1.0) / (spec.param - 1.0);
      break;
    case ScaleKind::MinusOneOverSSMinus1:
      out = (norm - 1.0) / (spec.param * (spec.param - 1.0));
      break;
  }
  if (!std::isfinite(out))
    throw EvaluationError(std::string(measure_name(spec.id)) + ": result is not finite");
  return out;
}

MeasureOutcome measure_eval(const MeasureSpec& spec, const Ecdf1D& f_r, const Ecdf1D& f_w,
                            std::size_t n) {
  if (n < 2) throw ArgumentError("measure normalisation needs N >= 2");
  auto pooled = pooled_eval(f_r, f_w);
  MeasureOutcome out;
  out.id = spec.id;
  out.raw = raw_from_pooled(spec, pooled.x, pooled.y);
  out.normalized = normalizer(spec.phi, n) * out.raw;
  return out;
}

namespace {

double normal_upper_tail(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

struct Moments {
  double mean = 0.0;
  double var = 0.0;  // unbiased
};

Moments moments(std::span<const double> v) {
  Moments m;
  m.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  double ss = 0.0;
  for (double a : v) ss += (a - m.mean) * (a - m.mean);
  m.var = ss / static_cast<double>(v.size() - 1);
  return m;
}

}  // namespace

MeasureOutcome baseline_stat(BaselineKind kind, std::span<const double> r_samples,
                             std::span<const double> w_samples, double alpha) {
  if (r_samples.size() < 2 || w_samples.size() < 2)
    throw ArgumentError("baseline tests need at least two samples on each side");
  MeasureOutcome out;
  double z = 0.0;
  if (kind == BaselineKind::Wilcox) {
    out.id = MeasureId::WilcoxBaseline;
    const std::size_t n1 = r_samples.size();
    const std::size_t n2 = w_samples.size();
    const std::size_t n = n1 + n2;
    std::vector<std::pair<double, bool>> pooled;
    pooled.reserve(n);
    for (double v : r_samples) pooled.emplace_back(v, true);
    for (double v : w_samples) pooled.emplace_back(v, false);
    std::sort(pooled.begin(), pooled.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    double rank_sum = 0.0;
    double tie_term = 0.0;
    for (std::size_t i = 0; i < n;) {
      std::size_t j = i;
      while (j < n && pooled[j].first == pooled[i].first) ++j;
      const double mid = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
      const double t = static_cast<double>(j - i);
      tie_term += t * t * t - t;
      for (std::size_t k = i; k < j; ++k)
        if (pooled[k].second) rank_sum += mid;
      i = j;
    }
    const double d1 = static_cast<double>(n1), d2 = static_cast<double>(n2),
                 dn = static_cast<double>(n);
    const double mean = d1 * (dn + 1.0) / 2.0;
    const double var = d1 * d2 / 12.0 * ((dn + 1.0) - tie_term / (dn * (dn - 1.0)));
    out.raw = rank_sum;
    z = var > 0.0 ? (rank_sum - mean) / std::sqrt(var) : 0.0;
  } else {
    out.id = MeasureId::TTestBaseline;
    const auto a = moments(r_samples);
    const auto b = moments(w_samples);
    const double se2 = a.var / static_cast<double>(r_samples.size()) +
                       b.var / static_cast<double>(w_samples.size());
    if (!(se2 > 0.0)) throw EvaluationError("ttest: both samples have zero variance");
    z = (a.mean - b.mean) / std::sqrt(se2);
    out.raw = z;
  }
  out.normalized = z;
  const double two_sided = std::min(1.0, 2.0 * normal_upper_tail(std::fabs(z)));
  out.set_significance(1.0 - two_sided, alpha);
  return out;
}

double two_sided_p(const MeasureOutcome& baseline) {
  if (!baseline.p_value) throw ArgumentError("outcome carries no p-value");
  return 1.0 - *baseline.p_value;
}

}  // namespace ddt
