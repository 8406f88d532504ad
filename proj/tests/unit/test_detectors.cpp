#include <doctest.h>

#include <cmath>
#include <random>

#include "ddt/datagen.hpp"
#include "ddt/detectors.hpp"
#include "ddt/error.hpp"

using namespace ddt;

namespace {

MeasureOutcome outcome(MeasureId id, double p) {
  MeasureOutcome o;
  o.id = id;
  o.set_significance(p, 0.05);
  return o;
}

// Ten outcomes, the first `rejecting` of them above the cut.
std::vector<MeasureOutcome> outcomes(std::size_t rejecting) {
  std::vector<MeasureOutcome> out;
  const auto ids = default_block_measures();
  for (std::size_t i = 0; i < ids.size(); ++i) out.push_back(outcome(ids[i], i < rejecting ? 0.99 : 0.5));
  return out;
}

const CalibrationSet& small_tables() {
  static const CalibrationSet set = [] {
    CalibrationSet s;
    SimulationConfig cfg;
    cfg.windows = {45, 50, 55};
    cfg.pairs = 1000;
    cfg.seed = 21;
    std::vector<MeasureSpec> specs;
    for (auto id : calibratable_measures()) specs.push_back(measure_spec(id));
    for (auto& c : simulate_null_clouds(specs, cfg)) s.add(representative_band(c));
    return s;
  }();
  return set;
}

Series normal_series(std::mt19937_64& rng, std::size_t n, std::size_t d, double mean = 0.0) {
  std::normal_distribution<double> g(mean, 1.0);
  std::vector<Point> rows(n, Point(d));
  for (auto& r : rows)
    for (auto& v : r) v = g(rng);
  return Series::from_rows(rows);
}

}  // namespace

TEST_CASE("quorum threshold") {
  QuorumConfig q;
  CHECK(quorum_threshold(q) == 2);
  q.disagreement = 0.25;
  CHECK(quorum_threshold(q) == 3);
  q.disagreement = 0.01;
  CHECK(quorum_threshold(q) == 1);
  q.disagreement = 1.0;
  CHECK(quorum_threshold(q) == 10);
}

TEST_CASE("quorum verdicts") {
  QuorumConfig q;
  CHECK(quorum_verdict(outcomes(0), q) == Verdict::Same);
  CHECK(quorum_verdict(outcomes(1), q) == Verdict::Same);
  CHECK(quorum_verdict(outcomes(2), q) == Verdict::Different);
  CHECK(quorum_verdict(outcomes(3), q) == Verdict::Different);
  CHECK(quorum_verdict(outcomes(10), q) == Verdict::Different);

  // adding rejections never turns different into same
  for (std::size_t k = 0; k < 10; ++k) {
    if (quorum_verdict(outcomes(k), q) == Verdict::Different)
      CHECK(quorum_verdict(outcomes(k + 1), q) == Verdict::Different);
  }

  auto missing = outcomes(3);
  missing.pop_back();
  CHECK_THROWS_AS(quorum_verdict(missing, q), ArgumentError);
  auto bare = outcomes(3);
  bare[0].p_value.reset();
  CHECK_THROWS_AS(quorum_verdict(bare, q), ArgumentError);

  QuorumConfig bad;
  bad.measures = {MeasureId::KLI};
  CHECK_THROWS_AS(validate(bad), ArgumentError);
  bad.measures = {};
  CHECK_THROWS_AS(validate(bad), ArgumentError);
  QuorumConfig zero;
  zero.disagreement = 0.0;
  CHECK_THROWS_AS(validate(zero), ArgumentError);
}

TEST_CASE("rejection ratio and error count") {
  CHECK(rejection_ratio(500, 5250, 250) == 1.0);
  CHECK(rejection_ratio(std::nullopt, 5250, 250) == 0.0);
  CHECK(rejection_ratio(500 + 2375, 5250, 250) == 0.5);
  CHECK_THROWS_AS(rejection_ratio(100, 5250, 250), ArgumentError);
  CHECK_THROWS_AS(rejection_ratio(600, 500, 250), ArgumentError);

  CHECK(error_count(1000, 1000, 1000) == 0);
  CHECK(error_count(1019, 1000, 1000) == 19);
  CHECK(error_count(1000, 900, 1000) == 100);
  CHECK(error_count(800, 800, 1000) == 200);
}

TEST_CASE("scan positions") {
  ScanPlan p;
  p.reference = {0, 250};
  p.step = 10;
  CHECK(window_positions(5250, p).size() == 500);
  p.step = 250;
  const auto blocks = window_positions(5250, p);
  CHECK(blocks.size() == 20);
  CHECK(blocks.front() == 250);
  CHECK(blocks.back() == 5000);
  p.step = 0;
  CHECK_THROWS_AS(window_positions(5250, p), ArgumentError);
  p.step = 1;
  p.reference = {5200, 250};
  CHECK_THROWS_AS(window_positions(5250, p), ArgumentError);
  CHECK(scan_method_from_name("mmd_l2") == ScanMethod::MmdL2);
  CHECK_THROWS_AS(scan_method_from_name("dijkstra"), ArgumentError);
}

TEST_CASE("identical windows are judged the same") {
  std::mt19937_64 rng(1);
  auto s = normal_series(rng, 50, 2);
  const auto r = window_rows(s, {0, 50});
  QuorumConfig q;
  for (auto m : {OrderingMethod::Poset, OrderingMethod::Mst}) {
    CAPTURE(static_cast<int>(m));
    auto outs = evaluate_measures_ordered(r, r, m, q, small_tables());
    CHECK(quorum_verdict(outs, q) == Verdict::Same);
    for (const auto& o : outs) CHECK(o.raw == 0.0);
  }
  KernelConfig k;
  CHECK_FALSE(mmd_u2(r, r, k).reject);
  KernelConfig kl;
  kl.significance = MmdSignificance::AnalyticLinear;
  CHECK_FALSE(mmd_l2(r, r, kl).reject);
  CHECK_FALSE(ncd_window_test(r, r, NcdConfig{}).reject);
}

TEST_CASE("1-D ordering pipeline equals the direct measures") {
  std::mt19937_64 rng(2);
  QuorumConfig q;
  q.measures = default_block_measures();
  q.measures.push_back(MeasureId::WilcoxBaseline);
  q.measures.push_back(MeasureId::TTestBaseline);
  for (int t = 0; t < 20; ++t) {
    auto s = normal_series(rng, 100, 1, 0.0);
    auto r = window_rows(s, {0, 50}), w = window_rows(s, {50, 50});
    if (t % 2) for (auto& p : w) p[0] = std::round(p[0] * 2 + 0.5);
    std::vector<double> r1, w1;
    for (auto& p : r) r1.push_back(p[0]);
    for (auto& p : w) w1.push_back(p[0]);
    const auto direct = evaluate_measures_1d(r1, w1, q, small_tables());
    const auto ordered = evaluate_measures_ordered(r, w, OrderingMethod::Poset, q, small_tables());
    REQUIRE(direct.size() == ordered.size());
    for (std::size_t i = 0; i < direct.size(); ++i) {
      CAPTURE(measure_name(direct[i].id));
      CHECK(direct[i].raw == ordered[i].raw);
      CHECK(direct[i].normalized == ordered[i].normalized);
      CHECK(*direct[i].p_value == *ordered[i].p_value);
    }
  }
}

TEST_CASE("block scan on the synthetic average suite") {
  SyntheticPlan gp;
  gp.kind = SyntheticKind::Average;
  gp.block_len = 50;
  gp.d = 2;
  gp.seed = 4;
  const auto g = gen_synthetic(gp);
  ScanPlan plan;
  plan.reference = {0, 50};
  plan.step = 50;
  plan.method = ScanMethod::Poset;
  const auto recs = block_scan(g.series, plan, small_tables());
  REQUIRE(recs.size() == 20);
  CHECK(recs.front().window_start == 50);
  CHECK(recs.front().verdict == Verdict::Same);
  CHECK(recs.back().verdict == Verdict::Different);
  CHECK(recs.front().outcomes.size() == 10);

  // deterministic
  const auto again = block_scan(g.series, plan, small_tables());
  for (std::size_t i = 0; i < recs.size(); ++i) {
    CHECK(recs[i].p_value == again[i].p_value);
    CHECK(recs[i].verdict == again[i].verdict);
  }

  // the record's confidence decides the verdict like the quorum does
  for (const auto& r : recs) CHECK((r.p_value > 0.95) == (r.verdict == Verdict::Different));

  plan.stop_after_detection_from = 100;
  const auto stopped = block_scan(g.series, plan, small_tables());
  CHECK(stopped.back().verdict == Verdict::Different);
  CHECK(stopped.size() <= recs.size());
  CHECK(earliest_detection(recs, 100) == stopped.back().window_start);

  plan.method = ScanMethod::Martingale;
  CHECK_THROWS_AS(block_scan(g.series, plan, small_tables()), ArgumentError);
}

TEST_CASE("kernel and compression scans") {
  SyntheticPlan gp;
  gp.kind = SyntheticKind::Average;
  gp.block_len = 51;  // odd: the kernel methods drop one point
  gp.blocks = 5;
  gp.schedule = {0.0, 20.0, 40.0};
  gp.seed = 6;
  const auto g = gen_synthetic(gp);
  ScanPlan plan;
  plan.reference = {0, 51};
  plan.step = 51;
  plan.ncd.bootstrap_runs = 30;
  plan.kernel.permutations = 100;
  for (auto m : {ScanMethod::MmdU2, ScanMethod::MmdL2}) {
    plan.method = m;
    const auto recs = block_scan(g.series, plan, small_tables());
    REQUIRE(recs.size() == 4);
    const std::string name = scan_method_name(m);
    CAPTURE(name);
    CHECK(recs[2].verdict == Verdict::Different);
    CHECK(recs[3].verdict == Verdict::Different);
  }
}

TEST_CASE("compression scan") {
  // ~400 bytes is below what deflate can exploit, so this one runs on 250-point blocks
  SyntheticPlan gp;
  gp.kind = SyntheticKind::Average;
  gp.d = 1;
  gp.blocks = 4;
  gp.schedule = {20.0, 40.0};
  gp.seed = 6;
  const auto g = gen_synthetic(gp);
  ScanPlan plan;
  plan.reference = {0, 250};
  plan.step = 250;
  plan.method = ScanMethod::Ncd;
  plan.ncd.bootstrap_runs = 30;
  const auto recs = block_scan(g.series, plan, small_tables());
  REQUIRE(recs.size() == 3);
  CHECK(recs[0].verdict == Verdict::Same);
  CHECK(recs[1].verdict == Verdict::Different);
  CHECK(recs[2].verdict == Verdict::Different);
}

TEST_CASE("martingale scan") {
  // constant data: p = 1 everywhere, M = eps^n
  std::vector<Point> flat(400, Point{1.0});
  const auto s = Series::from_rows(flat);
  ScanPlan plan;
  plan.method = ScanMethod::Martingale;
  plan.reference = {0, 100};
  auto recs = martingale_scan(s, plan);
  REQUIRE(recs.size() == 300);
  for (std::size_t i = 0; i < recs.size(); ++i) {
    CHECK(recs[i].p_value == 1.0);
    CHECK(recs[i].verdict == Verdict::Same);
  }
  CHECK(recs.back().raw == doctest::Approx(std::pow(0.95, 300)));
  CHECK(recs.front().window_start == 100);

  // a far outlier run is caught inside the run
  std::mt19937_64 rng(9);
  std::normal_distribution<double> gauss;
  std::vector<Point> rows(800);
  for (auto& r : rows) r = {gauss(rng)};
  for (std::size_t i = 500; i < 550; ++i) rows[i][0] += 100.0;
  plan.reference = {0, 250};
  plan.strangeness = StrangenessKind::AverageDistance;
  const auto out = martingale_scan(Series::from_rows(rows), plan);
  auto first = earliest_detection(out, 0);
  REQUIRE(first.has_value());
  CHECK(*first >= 500);
  CHECK(*first < 550);

  plan.reference = {0, 2};
  CHECK_THROWS_AS(martingale_scan(s, plan), ArgumentError);
  plan.reference = {0, 100};
  plan.pcheck = true;
  CHECK_THROWS_AS(martingale_scan(s, plan), ArgumentError);
}

TEST_CASE("martingale stays quiet on stationary data") {
  ScanPlan plan;
  plan.method = ScanMethod::Martingale;
  plan.reference = {0, 100};
  int alarms = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    std::mt19937_64 rng(seed);
    const auto s = normal_series(rng, 600, 1);
    alarms += earliest_detection(martingale_scan(s, plan), 0).has_value();
  }
  CHECK(alarms <= 4);
}

TEST_CASE("p-value distribution check") {
  QuorumConfig q;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> a(50), low(50);
  for (auto& v : a) v = u(rng);
  for (auto& v : low) v = 0.05 * u(rng);
  CHECK(pi_distribution_check(a, a, q, small_tables()) == Verdict::Same);
  CHECK(pi_distribution_check(a, low, q, small_tables()) == Verdict::Different);
  CHECK_THROWS_AS(pi_distribution_check(std::span(a).first(10), a, q, small_tables()),
                  ArgumentError);

  int same = 0;
  for (int t = 0; t < 100; ++t) {
    std::vector<double> b(50);
    for (auto& v : b) v = u(rng);
    same += pi_distribution_check(a, b, q, small_tables()) == Verdict::Same;
  }
  CHECK(same >= 90);
}
