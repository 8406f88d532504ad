#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>

#include "ddt/calibration.hpp"
#include "ddt/error.hpp"

using namespace ddt;

namespace {

NullRun run_from(std::vector<double> values, std::size_t window = 10) {
  NullRun r;
  r.window = window;
  r.cdf = ecdf_from_samples(values);
  return r;
}

CalibrationTable linear_table() {
  CalibrationTable t;
  t.measure = MeasureId::KolmogorovSmirnov;
  for (int i = 0; i <= 20; ++i) t.grid.push_back({i * 0.1, i * 0.05, 0.01});
  t.provenance = {{100, 200}, 100, 1, 7, "normal"};
  return t;
}

SimulationConfig small_config() {
  SimulationConfig c;
  c.windows = {20, 40};
  c.pairs = 200;
  c.seed = 5;
  return c;
}

}  // namespace

TEST_CASE("lookup clamps and interpolates") {
  auto t = linear_table();
  CHECK(p_value_lookup(t, -1.0) == 0.0);
  CHECK(p_value_lookup(t, 5.0) == 1.0);
  CHECK(p_value_lookup(t, 1.9) == doctest::Approx(0.95));
  CHECK(p_value_lookup(t, 0.25) == doctest::Approx(0.125));
  // monotone in the value
  double prev = 0.0;
  for (double v = -0.5; v < 2.5; v += 0.01) {
    const double p = p_value_lookup(t, v);
    CHECK(p >= prev);
    prev = p;
  }
}

TEST_CASE("band of identical members") {
  NullCloud c;
  c.measure = MeasureId::KolmogorovSmirnov;
  for (int i = 0; i < 5; ++i) c.runs.push_back(run_from({1, 2, 3, 4}));
  auto t = representative_band(c);
  for (const auto& k : t.grid) {
    CHECK(k.cum == c.runs[0].cdf(k.x));
    CHECK(k.sigma == 0.0);
  }
  CHECK(band_coverage(c, t) == 1.0);
}

TEST_CASE("band is the pointwise mean") {
  NullCloud c;
  c.measure = MeasureId::KolmogorovSmirnov;
  // at x = 1 the members read 0.4 and 0.6
  c.runs.push_back(run_from({0, 1, 2, 3, 4}));
  c.runs.push_back(run_from({-1, 0, 1, 2, 5}));
  auto t = representative_band(c, 64);
  auto it = std::find_if(t.grid.begin(), t.grid.end(), [](auto& k) { return k.x == 1.0; });
  REQUIRE(it != t.grid.end());
  CHECK(it->cum == doctest::Approx(0.5));
  CHECK(it->sigma == doctest::Approx(0.1));

  NullCloud single;
  single.runs.push_back(run_from({1, 2}));
  CHECK_THROWS_AS(representative_band(single), ArgumentError);
}

TEST_CASE("one wild member among twenty") {
  NullCloud c;
  c.measure = MeasureId::KolmogorovSmirnov;
  std::vector<double> base;
  for (int i = 0; i < 50; ++i) base.push_back(i);
  for (int i = 0; i < 19; ++i) c.runs.push_back(run_from(base));
  std::vector<double> wild;
  for (int i = 0; i < 50; ++i) wild.push_back(1000 + i);
  c.runs.push_back(run_from(wild));
  auto t = representative_band(c);
  CHECK(band_coverage(c, t) == doctest::Approx(0.95));
}

TEST_CASE("representative curve is a CDF") {
  auto cloud = simulate_null_cloud(measure_spec(MeasureId::Hellinger), small_config());
  auto t = representative_band(cloud);
  for (std::size_t i = 1; i < t.grid.size(); ++i) {
    CHECK(t.grid[i].x > t.grid[i - 1].x);
    CHECK(t.grid[i].cum >= t.grid[i - 1].cum);
  }
  CHECK(t.grid.back().cum == 1.0);
  for (const auto& k : t.grid) CHECK(k.sigma >= 0.0);
  CHECK(t.provenance.windows == std::vector<std::size_t>{20, 40});
}

TEST_CASE("simulation is deterministic and independent of jobs") {
  auto spec = measure_spec(MeasureId::KolmogorovSmirnov);
  auto cfg = small_config();
  auto a = representative_band(simulate_null_cloud(spec, cfg));
  cfg.jobs = 3;
  auto b = representative_band(simulate_null_cloud(spec, cfg));
  CHECK(table_to_json(a) == table_to_json(b));
  cfg.seed = 6;
  auto c = representative_band(simulate_null_cloud(spec, cfg));
  CHECK(table_to_json(a) != table_to_json(c));
}

TEST_CASE("simulation rejects bad configurations") {
  auto cfg = small_config();
  CHECK_THROWS_AS(simulate_null_cloud(measure_spec(MeasureId::KLI), cfg), ArgumentError);
  CHECK_THROWS_AS(simulate_null_cloud(measure_spec(MeasureId::Bhattacharyya), cfg),
                  ArgumentError);
  cfg.pairs = 50;
  CHECK_THROWS_AS(simulate_null_cloud(measure_spec(MeasureId::KolmogorovSmirnov), cfg),
                  ArgumentError);
  cfg = small_config();
  cfg.windows = {5};
  CHECK_THROWS_AS(simulate_null_cloud(measure_spec(MeasureId::KolmogorovSmirnov), cfg),
                  ArgumentError);
}

TEST_CASE("mean raw value is the plain average of the simulated statistics") {
  // Oracle: rerun the same stream by hand.
  SimulationConfig cfg;
  cfg.windows = {15};
  cfg.pairs = 100;
  cfg.seed = 9;
  auto cloud = simulate_null_cloud(measure_spec(MeasureId::Variational), cfg);
  auto rng = make_rng(9, {static_cast<std::uint64_t>(Law::Normal), 15, 0});
  double sum = 0.0;
  std::vector<double> r(15), w(15);
  for (int m = 0; m < 100; ++m) {
    for (auto& v : r) v = draw_standard(Law::Normal, rng);
    for (auto& v : w) v = draw_standard(Law::Normal, rng);
    std::vector<double> pts(r);
    pts.insert(pts.end(), w.begin(), w.end());
    std::sort(pts.begin(), pts.end());
    double acc = 0.0;
    for (double t : pts) {
      double cr = 0, cw = 0;
      for (double v : r) cr += v <= t;
      for (double v : w) cw += v <= t;
      acc += std::fabs(cr / 15.0 - cw / 15.0);
    }
    sum += acc;
  }
  CHECK(cloud.runs.at(0).mean_raw == doctest::Approx(sum / 100.0).epsilon(1e-12));
}

TEST_CASE("same generator twice gives distance zero") {
  auto spec = measure_spec(MeasureId::KolmogorovSmirnov);
  auto cfg = small_config();
  auto r = input_independence_check(spec, 3, cfg, Law::Normal, Law::Normal);
  CHECK(r.distance == 0.0);
  CHECK_THROWS_AS(input_independence_check(measure_spec(MeasureId::KLI), 3, cfg), ArgumentError);
}

TEST_CASE("own-sample CDF values are exactly 1/n .. 1") {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  std::vector<double> s(37);
  for (auto& v : s) v = g(rng);
  auto f = ecdf_from_samples(s);
  std::vector<double> got;
  for (double v : s) got.push_back(f(v));
  std::sort(got.begin(), got.end());
  for (std::size_t i = 0; i < s.size(); ++i)
    CHECK(got[i] == static_cast<double>(i + 1) / static_cast<double>(s.size()));
}

TEST_CASE("json round trip and file set") {
  auto t = linear_table();
  auto back = table_from_json(table_to_json(t));
  CHECK(back.measure == t.measure);
  REQUIRE(back.grid.size() == t.grid.size());
  for (std::size_t i = 0; i < t.grid.size(); ++i) {
    CHECK(back.grid[i].x == t.grid[i].x);
    CHECK(back.grid[i].cum == t.grid[i].cum);
    CHECK(back.grid[i].sigma == t.grid[i].sigma);
  }
  CHECK(back.provenance.windows == t.provenance.windows);
  CHECK(back.provenance.seed == 7);

  CHECK_THROWS_AS(table_from_json("{"), ArgumentError);
  CHECK_THROWS_AS(table_from_json(R"({"version":99,"measure":"ks","grid":[]})"), ArgumentError);

  const auto dir = std::filesystem::temp_directory_path() / "ddt_unit_calib";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  save_table(t, dir / table_file_name(t.measure));
  auto set = CalibrationSet::load_dir(dir);
  CHECK(set.size() == 1);
  CHECK(set.contains(MeasureId::KolmogorovSmirnov));
  CHECK(set.digests().at("ks") == file_digest(dir / "ks.calib.json"));
  CHECK_THROWS_WITH_AS(set.at(MeasureId::Hellinger), doctest::Contains("hellinger"),
                       std::runtime_error);

  MeasureOutcome o;
  o.id = MeasureId::KolmogorovSmirnov;
  o.normalized = 1.95;
  apply_calibration(o, set, 0.05);
  CHECK(*o.p_value == doctest::Approx(0.975));
  CHECK(*o.reject);
  o.normalized = 1.5;
  apply_calibration(o, set, 0.05);
  CHECK_FALSE(*o.reject);
  std::filesystem::remove_all(dir);
}
