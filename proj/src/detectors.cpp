#include "ddt/detectors.hpp"

#include <algorithm>
#include <cmath>

#include "ddt/error.hpp"
#include "ddt/rng.hpp"

namespace ddt {

using enum MeasureId;

const char* verdict_name(Verdict v) { return v == Verdict::Same ? "same" : "different"; }

std::vector<MeasureId> default_block_measures() {
  return {Phi, Xi, KolmogorovSmirnov, KLJ, JensenShannon, ChiSquare, Hellinger,
          CramerVonMises, Euclid, Camberra};
}

std::vector<MeasureId> standard_measures() {
  return {WilcoxBaseline, TTestBaseline, KolmogorovSmirnov, Phi, Xi};
}

std::vector<MeasureId> extension_measures() {
  return {KLJ, JinL, JensenShannon, ChiSquare, Hellinger, Variational, CramerVonMises,
          Minkowsky, Euclid};
}

namespace {

bool is_baseline(MeasureId id) { return id == WilcoxBaseline || id == TTestBaseline; }

}  // namespace

void validate(const QuorumConfig& config) {
  if (config.measures.empty()) throw ArgumentError("quorum needs at least one measure");
  if (!(config.disagreement > 0.0 && config.disagreement <= 1.0))
    throw ArgumentError("disagreement must be in (0,1]");
  if (!(config.alpha > 0.0 && config.alpha < 1.0)) throw ArgumentError("alpha must be in (0,1)");
  for (auto id : config.measures)
    if (!is_baseline(id) && !measure_spec(id).calibratable)
      throw ArgumentError("measure " + std::string(measure_name(id)) +
                          " cannot take part in a quorum: it has no calibrated null");
}

std::size_t quorum_threshold(const QuorumConfig& config) {
  const double need = config.disagreement * static_cast<double>(config.measures.size());
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(need - 1e-9)));
}

namespace {

// Confidence values of the configured measures, in configuration order.
std::vector<const MeasureOutcome*> match_outcomes(std::span<const MeasureOutcome> outcomes,
                                                  const QuorumConfig& config) {
  std::vector<const MeasureOutcome*> out;
  for (auto id : config.measures) {
    auto it = std::find_if(outcomes.begin(), outcomes.end(),
                           [&](const MeasureOutcome& o) { return o.id == id; });
    if (it == outcomes.end())
      throw ArgumentError("no outcome for measure " + std::string(measure_name(id)));
    if (!it->p_value || !it->reject)
      throw ArgumentError("outcome for " + std::string(measure_name(id)) + " is not calibrated");
    out.push_back(&*it);
  }
  return out;
}

}  // namespace

Verdict quorum_verdict(std::span<const MeasureOutcome> outcomes, const QuorumConfig& config) {
  validate(config);
  std::size_t rejections = 0;
  for (const auto* o : match_outcomes(outcomes, config))
    if (*o->reject) ++rejections;
  return rejections >= quorum_threshold(config) ? Verdict::Different : Verdict::Same;
}

namespace {

std::vector<MeasureOutcome> evaluate_on_cdfs(const Ecdf1D& f_r, const Ecdf1D& f_w,
                                             std::span<const double> r_base,
                                             std::span<const double> w_base,
                                             const QuorumConfig& config,
                                             const CalibrationSet& tables) {
  validate(config);
  const auto n = f_r.sample_count() + f_w.sample_count();
  const auto pooled = pooled_eval(f_r, f_w);
  std::vector<MeasureOutcome> out;
  out.reserve(config.measures.size());
  for (auto id : config.measures) {
    if (is_baseline(id)) {
      out.push_back(baseline_stat(id == WilcoxBaseline ? BaselineKind::Wilcox : BaselineKind::TTest,
                                  r_base, w_base, config.alpha));
      continue;
    }
    const auto spec = measure_spec(id);
    MeasureOutcome o;
    o.id = id;
    o.raw = raw_from_pooled(spec, pooled.x, pooled.y);
    o.normalized = normalizer(spec.phi, n) * o.raw;
    apply_calibration(o, tables, config.alpha);
    out.push_back(o);
  }
  return out;
}

}  // namespace

std::vector<MeasureOutcome> evaluate_measures_1d(std::span<const double> r,
                                                 std::span<const double> w,
                                                 const QuorumConfig& config,
                                                 const CalibrationSet& tables) {
  return evaluate_on_cdfs(ecdf_from_samples(r), ecdf_from_samples(w), r, w, config, tables);
}

std::vector<MeasureOutcome> evaluate_measures_ordered(std::span<const Point> r,
                                                      std::span<const Point> w,
                                                      OrderingMethod method,
                                                      const QuorumConfig& config,
                                                      const CalibrationSet& tables) {
  const auto partition = order_windows(r, w, method);
  const auto [f_r, f_w] = partition_ecdfs(partition);
  std::vector<double> rb, wb;
  const bool one_dim = !r.empty() && r.front().size() == 1;
  if (one_dim) {
    for (const auto& p : r) rb.push_back(p[0]);
    for (const auto& p : w) wb.push_back(p[0]);
  } else {
    // traversal position of every point, identical vectors sharing one
    std::size_t position = 0;
    const Point* prev = nullptr;
    for (const auto& bin : partition.bins)
      for (const auto& pt : bin) {
        if (prev == nullptr || pt.vector != *prev) ++position;
        (pt.origin == Origin::R ? rb : wb).push_back(static_cast<double>(position));
        prev = &pt.vector;
      }
  }
  return evaluate_on_cdfs(f_r, f_w, rb, wb, config, tables);
}

Verdict pi_distribution_check(std::span<const double> reference_p,
                              std::span<const double> window_p, const QuorumConfig& config,
                              const CalibrationSet& tables) {
  if (reference_p.size() < 30 || window_p.size() < 30)
    throw ArgumentError("p-value distribution check needs at least 30 values per side");
  const auto outcomes = evaluate_measures_1d(reference_p, window_p, config, tables);
  return quorum_verdict(outcomes, config);
}

const char* scan_method_name(ScanMethod m) {
  switch (m) {
    case ScanMethod::Poset: return "poset";
    case ScanMethod::Mst: return "mst";
    case ScanMethod::Ncd: return "ncd";
    case ScanMethod::MmdU2: return "mmd_u2";
    case ScanMethod::MmdL2: return "mmd_l2";
    case ScanMethod::Martingale: return "martingale";
    case ScanMethod::Measures1D: return "measures";
  }
  return "?";
}

ScanMethod scan_method_from_name(std::string_view name) {
  for (auto m : {ScanMethod::Poset, ScanMethod::Mst, ScanMethod::Ncd, ScanMethod::MmdU2,
                 ScanMethod::MmdL2, ScanMethod::Martingale, ScanMethod::Measures1D})
    if (name == scan_method_name(m)) return m;
  throw ArgumentError("unknown scan method: " + std::string(name));
}

std::vector<std::size_t> window_positions(std::size_t series_len, const ScanPlan& plan) {
  if (plan.step == 0) throw ArgumentError("scan step must be at least 1");
  const auto len = plan.reference.length;
  if (len == 0 || plan.reference.start + len > series_len)
    throw ArgumentError("reference window does not fit the series");
  std::vector<std::size_t> out;
  for (auto s = plan.reference.start + plan.step; s + len <= series_len; s += plan.step)
    out.push_back(s);
  return out;
}

namespace {

std::vector<Point> rows(const Series& series, std::size_t start, std::size_t length) {
  return window_rows(series, Window{start, length});
}

ScanRecord quorum_record(std::size_t start, ScanMethod method, std::vector<MeasureOutcome> outs,
                         const QuorumConfig& config) {
  ScanRecord rec;
  rec.window_start = start;
  rec.method = method;
  rec.verdict = quorum_verdict(outs, config);
  // The k-th largest confidence decides the quorum; report that measure.
  std::vector<std::size_t> idx(outs.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::stable_sort(idx.begin(), idx.end(),
                   [&](auto a, auto b) { return *outs[a].p_value > *outs[b].p_value; });
  const auto& pick = outs[idx[quorum_threshold(config) - 1]];
  rec.raw = pick.raw;
  rec.normalized = pick.normalized;
  rec.p_value = *pick.p_value;
  rec.outcomes = std::move(outs);
  return rec;
}

}  // namespace

std::vector<ScanRecord> block_scan(const Series& series, const ScanPlan& plan,
                                   const CalibrationSet& tables) {
  if (plan.method == ScanMethod::Martingale)
    throw ArgumentError("martingale is not a block method; use martingale_scan");
  const auto positions = window_positions(series.size(), plan);
  const auto ref = rows(series, plan.reference.start, plan.reference.length);
  const auto len = plan.reference.length;
  std::vector<ScanRecord> out;
  for (auto start : positions) {
    const auto w = rows(series, start, len);
    ScanRecord rec;
    switch (plan.method) {
      case ScanMethod::Poset:
      case ScanMethod::Mst: {
        const auto om = plan.method == ScanMethod::Poset ? OrderingMethod::Poset : OrderingMethod::Mst;
        rec = quorum_record(start, plan.method,
                            evaluate_measures_ordered(ref, w, om, plan.quorum, tables), plan.quorum);
        break;
      }
      case ScanMethod::Measures1D: {
        if (series.dim() != 1) throw ArgumentError("the direct measures method needs 1-D data");
        std::vector<double> r1, w1;
        for (const auto& p : ref) r1.push_back(p[0]);
        for (const auto& p : w) w1.push_back(p[0]);
        rec = quorum_record(start, plan.method,
                            evaluate_measures_1d(r1, w1, plan.quorum, tables), plan.quorum);
        break;
      }
      case ScanMethod::Ncd: {
        auto cfg = plan.ncd;
        cfg.seed = stream_seed(plan.ncd.seed, {start});
        const auto res = ncd_window_test(ref, w, cfg);
        rec.window_start = start;
        rec.method = plan.method;
        rec.raw = rec.normalized = res.ncd;
        rec.p_value = res.p_value;
        rec.verdict = res.reject ? Verdict::Different : Verdict::Same;
        break;
      }
      case ScanMethod::MmdU2:
      case ScanMethod::MmdL2: {
        auto cfg = plan.kernel;
        cfg.seed = stream_seed(plan.kernel.seed, {start});
        // the estimators pair points, so an odd window drops its last point
        std::span<const Point> rs(ref), ws(w);
        if (rs.size() % 2 != 0) {
          rs = rs.first(rs.size() - 1);
          ws = ws.first(ws.size() - 1);
        }
        const auto res = plan.method == ScanMethod::MmdU2 ? mmd_u2(rs, ws, cfg) : mmd_l2(rs, ws, cfg);
        rec.window_start = start;
        rec.method = plan.method;
        rec.raw = res.value;
        rec.normalized = res.value;
        rec.p_value = res.p_value ? 1.0 - *res.p_value : 0.0;
        rec.verdict = res.reject ? Verdict::Different : Verdict::Same;
        break;
      }
      case ScanMethod::Martingale: break;
    }
    const bool stop = plan.stop_after_detection_from && rec.verdict == Verdict::Different &&
                      start >= *plan.stop_after_detection_from;
    out.push_back(std::move(rec));
    if (stop) break;
  }
  return out;
}

std::vector<ScanRecord> martingale_scan(const Series& series, const ScanPlan& plan,
                                        const CalibrationSet* tables) {
  const auto n = plan.reference.length;
  if (n < 3) throw ArgumentError("martingale reference must hold at least 3 points");
  if (plan.reference.start + n > series.size())
    throw ArgumentError("reference window does not fit the series");
  if (plan.pcheck && tables == nullptr)
    throw ArgumentError("the p-value check needs calibration tables");

  Transducer tr(n, plan.strangeness);
  const auto ref_end = plan.reference.start + n;
  for (auto i = ref_end - (n - 1); i < ref_end; ++i) tr.prime(series[i].values);

  MartingaleState state(plan.martingale);
  std::vector<double> reference_p;
  std::vector<ScanRecord> out;
  out.reserve(series.size() - ref_end);
  for (auto i = ref_end; i < series.size(); ++i) {
    const double p = tr.step(series[i].values);
    const auto st = martingale_step(state, p);
    ScanRecord rec;
    rec.window_start = i;
    rec.method = ScanMethod::Martingale;
    rec.raw = st.m;
    rec.normalized = st.delta;
    rec.p_value = p;
    rec.verdict = st.lambda_reject ? Verdict::Different : Verdict::Same;
    rec.delta_reject = st.delta_reject;

    if (plan.pcheck) {
      if (reference_p.size() < plan.martingale.history) {
        reference_p.push_back(p);
      } else if (state.p_history.size() >= plan.martingale.history &&
                 (state.m < plan.martingale.reset_floor || state.m > plan.martingale.lambda)) {
        const std::vector<double> recent(state.p_history.begin(), state.p_history.end());
        const auto v = pi_distribution_check(reference_p, recent, plan.quorum, *tables);
        rec.reset = maybe_reset(state, v == Verdict::Different);
      }
    }
    const bool stop = plan.stop_after_detection_from && rec.verdict == Verdict::Different &&
                      i >= *plan.stop_after_detection_from;
    out.push_back(std::move(rec));
    if (stop) break;
  }
  return out;
}

std::vector<ScanRecord> run_scan(const Series& series, const ScanPlan& plan,
                                 const CalibrationSet& tables) {
  if (plan.method == ScanMethod::Martingale) return martingale_scan(series, plan, &tables);
  return block_scan(series, plan, tables);
}

std::optional<std::size_t> earliest_detection(std::span<const ScanRecord> records,
                                              std::size_t from) {
  for (const auto& r : records)
    if (r.verdict == Verdict::Different && r.window_start >= from) return r.window_start;
  return std::nullopt;
}

double rejection_ratio(std::optional<std::size_t> earliest, std::size_t series_len,
                       std::size_t n) {
  if (series_len <= 2 * n) throw ArgumentError("series must be longer than 2N");
  if (!earliest) return 0.0;
  if (*earliest < 2 * n) throw ArgumentError("earliest detection must be at or after 2N");
  if (*earliest >= series_len) throw ArgumentError("earliest detection lies past the series");
  return 1.0 - static_cast<double>(*earliest - 2 * n) / static_cast<double>(series_len - 2 * n);
}

std::size_t error_count(std::size_t found, std::size_t matches, std::size_t golden) {
  const std::size_t fp = found > golden ? found - golden : 0;
  const std::size_t fn = golden > matches ? golden - matches : 0;
  return fp + fn;
}

}  // namespace ddt
