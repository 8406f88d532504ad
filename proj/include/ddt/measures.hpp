#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ddt {

/// One-dimensional empirical CDF over a strictly increasing support.
class Ecdf1D {
 public:
  Ecdf1D() = default;
  /// Takes ownership of an already-built step function. Validates the
  /// invariants (strictly increasing support, non-decreasing cum ending at 1).
  Ecdf1D(std::vector<double> support, std::vector<double> cum, std::size_t n);

  /// Value at the largest support point <= x, 0 below the first point.
  double operator()(double x) const;

  const std::vector<double>& support() const noexcept { return support_; }
  const std::vector<double>& cum() const noexcept { return cum_; }
  std::size_t sample_count() const noexcept { return n_; }
  std::size_t size() const noexcept { return support_.size(); }
  bool empty() const noexcept { return support_.empty(); }

 private:
  std::vector<double> support_;
  std::vector<double> cum_;
  std::size_t n_ = 0;
};

Ecdf1D ecdf_from_samples(std::span<const double> samples);

struct PooledValues {
  std::vector<double> support;
  std::vector<double> x;  // F_R at each pooled support point
  std::vector<double> y;  // F_W at each pooled support point
};

/// Evaluates both CDFs at every point of the merged support.
PooledValues pooled_eval(const Ecdf1D& f_r, const Ecdf1D& f_w);

enum class MeasureId {
  Bhattacharyya,
  Camberra,
  ChiSquare,
  CramerVonMises,
  Euclid,
  Hellinger,
  JinK,
  JinL,
  JensenShannon,
  KolmogorovSmirnov,
  KLI,
  KLJ,
  Kr,
  Ks,
  Ks2,
  Minkowsky,
  Phi,
  Variational,
  Xi,
  WilcoxBaseline,
  TTestBaseline,
};

inline constexpr std::size_t kMeasureCount = 21;

/// Stable lowercase id used on the command line and in calibration files.
std::string_view measure_name(MeasureId id);
/// Throws ArgumentError for unknown names.
MeasureId measure_from_name(std::string_view name);
std::vector<MeasureId> all_measures();

/// Aggregation norm. `Sum` is the plain signed sum of the components.
enum class NormKind { Sum, L1, L2, Lr, Max };
/// Window-size normalisation phi(N).
enum class NormalizerKind { One, SqrtN, InvSqrtN, Log2N, SqrtNOverLog2N, None };
/// Scaling gamma applied to the aggregated norm.
enum class ScaleKind { Identity, Square, Half, LogOverRMinus1, MinusOneOverSMinus1, MinusOneOverSSMinus1 };
/// Per-component comparator psi(x, y).
enum class TermKind {
  SqrtProduct,
  CamberraRatio,
  ChiSquare,
  Difference,
  AbsDifference,
  HellingerSquare,
  JinK,
  JinL,
  JensenShannon,
  KLI,
  KLJ,
  Chernoff,
  PhiRatio,
  XiRatio,
  RankBaseline,
};

struct MeasureSpec {
  MeasureId id{};
  NormKind norm{};
  NormalizerKind phi{};
  ScaleKind gamma{};
  TermKind psi{};
  double param = 0.0;  // r for Minkowsky and K_r, s for K_s and K_s^2
  bool symmetric = false;
  bool calibratable = false;
};

/// The catalogue entry for `id` with default parameters (r = 3 for
/// Minkowsky, r = s = 2 for the generalized measures).
MeasureSpec measure_spec(MeasureId id);
/// Same, overriding the parameter of a parametrised measure.
MeasureSpec measure_spec(MeasureId id, double param);

/// Measures whose null distribution can be tabulated by simulation.
std::vector<MeasureId> calibratable_measures();

struct MeasureOutcome {
  MeasureId id{};
  double raw = 0.0;
  double normalized = 0.0;
  /// Null-distribution CDF at the observed statistic: the test rejects when
  /// it exceeds 1 - alpha. Present only after calibration (or for baselines).
  std::optional<double> p_value;
  std::optional<bool> reject;

  /// Fills p_value and reject. p must be in [0, 1].
  void set_significance(double p, double alpha);
};

double normalizer(NormalizerKind kind, std::size_t n);

/// gamma(||psi(x, y)||_p) over already-aligned CDF values. Terms whose
/// denominator vanishes are skipped. Throws EvaluationError if the result is
/// undefined.
double raw_from_pooled(const MeasureSpec& spec, std::span<const double> x,
                       std::span<const double> y);

/// Raw and phi(N)-normalised value of a CDF measure. `n` is the pooled sample
/// count |R| + |W|.
MeasureOutcome measure_eval(const MeasureSpec& spec, const Ecdf1D& f_r,
                            const Ecdf1D& f_w, std::size_t n);

enum class BaselineKind { Wilcox, TTest };

/// Rank-sum (mid-ranks, normal approximation) or Welch t statistic. `raw` is
/// the statistic (rank sum of the first sample / t), `normalized` the z score
/// and `p_value` is 1 - two-sided p so it reads like the calibrated measures.
MeasureOutcome baseline_stat(BaselineKind kind, std::span<const double> r_samples,
                             std::span<const double> w_samples, double alpha = 0.05);

/// Two-sided p-value recorded in a baseline outcome.
double two_sided_p(const MeasureOutcome& baseline);

}  // namespace ddt
