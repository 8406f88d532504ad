#include "ddt/calibration.hpp"
#include "ddt/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "ddt/error.hpp"

namespace ddt {

std::vector<std::size_t> SimulationConfig::default_windows() {
  std::vector<std::size_t> out;
  for (std::size_t n = 100; n <= 2000; n += 100) out.push_back(n);
  return out;
}

namespace {

void check_config(const SimulationConfig& cfg) {
  if (cfg.pairs < 100) throw ArgumentError("calibration needs at least 100 pairs per run");
  if (cfg.windows.empty()) throw ArgumentError("calibration needs at least one window size");
  if (cfg.repetitions == 0) throw ArgumentError("calibration needs at least one repetition");
  for (auto n : cfg.windows)
    if (n < 10) throw ArgumentError("calibration window sizes must be >= 10");
}

}  // namespace

std::vector<NullCloud> simulate_null_clouds(std::span<const MeasureSpec> specs,
                                            const SimulationConfig& cfg) {
  check_config(cfg);
  for (const auto& s : specs)
    if (!s.calibratable)
      throw ArgumentError("measure '" + std::string(measure_name(s.id)) +
                          "' has no tabulated null distribution");

  const std::size_t tasks = cfg.windows.size() * cfg.repetitions;
  // results[task][spec]
  std::vector<std::vector<NullRun>> results(tasks, std::vector<NullRun>(specs.size()));

  run_tasks(tasks, cfg.jobs, [&](std::size_t task) {
    const std::size_t n = cfg.windows[task / cfg.repetitions];
    const std::size_t rep = task % cfg.repetitions;
    auto rng = make_rng(cfg.seed, {static_cast<std::uint64_t>(cfg.generator), n, rep});
    std::vector<std::vector<double>> values(specs.size());
    std::vector<double> raw_sum(specs.size(), 0.0);
    for (auto& v : values) v.reserve(cfg.pairs);
    std::vector<double> r(n), w(n);
    for (std::size_t m = 0; m < cfg.pairs; ++m) {
      for (auto& v : r) v = draw_standard(cfg.generator, rng);
      for (auto& v : w) v = draw_standard(cfg.generator, rng);
      const auto pooled = pooled_eval(ecdf_from_samples(r), ecdf_from_samples(w));
      for (std::size_t s = 0; s < specs.size(); ++s) {
        const double raw = raw_from_pooled(specs[s], pooled.x, pooled.y);
        raw_sum[s] += raw;
        values[s].push_back(normalizer(specs[s].phi, 2 * n) * raw);
      }
    }
    for (std::size_t s = 0; s < specs.size(); ++s) {
      auto& run = results[task][s];
      run.window = n;
      run.repetition = rep;
      run.cdf = ecdf_from_samples(values[s]);
      run.mean_raw = raw_sum[s] / static_cast<double>(cfg.pairs);
    }
  });

  std::vector<NullCloud> clouds(specs.size());
  for (std::size_t s = 0; s < specs.size(); ++s) {
    auto& c = clouds[s];
    c.measure = specs[s].id;
    c.pairs = cfg.pairs;
    c.seed = cfg.seed;
    c.generator = cfg.generator;
    c.runs.reserve(tasks);
    for (std::size_t t = 0; t < tasks; ++t) c.runs.push_back(std::move(results[t][s]));
  }
  return clouds;
}

NullCloud simulate_null_cloud(const MeasureSpec& spec, const SimulationConfig& cfg) {
  return std::move(simulate_null_clouds(std::span(&spec, 1), cfg).front());
}

CalibrationTable representative_band(const NullCloud& cloud, std::size_t knots) {
  if (cloud.runs.size() < 2)
    throw ArgumentError("a representative band needs at least two member CDFs");
  if (knots < 2) throw ArgumentError("a calibration grid needs at least two knots");

  // Pooled values are the union of member supports weighted by their counts;
  // quantiles are read off the merged sample multiset.
  std::vector<double> pooled;
  for (const auto& run : cloud.runs) {
    const auto& sup = run.cdf.support();
    const auto& cum = run.cdf.cum();
    const double n = static_cast<double>(run.cdf.sample_count());
    double prev = 0.0;
    for (std::size_t k = 0; k < sup.size(); ++k) {
      const auto count = static_cast<std::size_t>(std::llround((cum[k] - prev) * n));
      pooled.insert(pooled.end(), count, sup[k]);
      prev = cum[k];
    }
  }
  std::sort(pooled.begin(), pooled.end());

  std::vector<double> xs;
  xs.reserve(knots);
  for (std::size_t j = 0; j < knots; ++j) {
    const auto idx = static_cast<std::size_t>(
        std::llround(static_cast<double>(j) * static_cast<double>(pooled.size() - 1) /
                     static_cast<double>(knots - 1)));
    const double x = pooled[idx];
    if (xs.empty() || x > xs.back()) xs.push_back(x);
  }

  CalibrationTable table;
  table.measure = cloud.measure;
  table.grid.reserve(xs.size());
  const double k = static_cast<double>(cloud.runs.size());
  for (double x : xs) {
    double sum = 0.0;
    for (const auto& run : cloud.runs) sum += run.cdf(x);
    const double mu = sum / k;
    double ss = 0.0;
    for (const auto& run : cloud.runs) {
      const double d = run.cdf(x) - mu;
      ss += d * d;
    }
    table.grid.push_back({x, mu, std::sqrt(ss / k)});
  }
  // mu at the largest pooled value is exactly 1
  table.grid.back().cum = 1.0;

  auto& prov = table.provenance;
  for (const auto& run : cloud.runs)
    if (std::find(prov.windows.begin(), prov.windows.end(), run.window) == prov.windows.end())
      prov.windows.push_back(run.window);
  prov.pairs = cloud.pairs;
  prov.repetitions = cloud.runs.size() / std::max<std::size_t>(1, prov.windows.size());
  prov.seed = cloud.seed;
  prov.generator = std::string(law_name(cloud.generator));
  return table;
}

double band_coverage(const NullCloud& cloud, const CalibrationTable& table, double tolerance) {
  if (cloud.runs.empty()) return 0.0;
  std::size_t inside = 0;
  for (const auto& run : cloud.runs) {
    bool ok = true;
    for (const auto& knot : table.grid) {
      const double f = run.cdf(knot.x);
      if (std::fabs(f - knot.cum) > 2.0 * knot.sigma + tolerance) {
        ok = false;
        break;
      }
    }
    if (ok) ++inside;
  }
  return static_cast<double>(inside) / static_cast<double>(cloud.runs.size());
}

double p_value_lookup(const CalibrationTable& table, double normalized) {
  const auto& g = table.grid;
  if (g.empty()) throw ArgumentError("empty calibration table");
  if (normalized < g.front().x) return 0.0;
  if (normalized > g.back().x) return 1.0;
  auto it = std::lower_bound(g.begin(), g.end(), normalized,
                             [](const CalibrationKnot& k, double v) { return k.x < v; });
  if (it->x == normalized) return std::clamp(it->cum, 0.0, 1.0);
  const auto& hi = *it;
  const auto& lo = *(it - 1);
  const double t = (normalized - lo.x) / (hi.x - lo.x);
  return std::clamp(lo.cum + t * (hi.cum - lo.cum), 0.0, 1.0);
}

double table_distance(const CalibrationTable& a, const CalibrationTable& b) {
  double d = 0.0;
  for (const auto& k : a.grid) d = std::max(d, std::fabs(k.cum - p_value_lookup(b, k.x)));
  for (const auto& k : b.grid) d = std::max(d, std::fabs(k.cum - p_value_lookup(a, k.x)));
  return d;
}

std::vector<IndependenceReport> input_independence_check(std::span<const MeasureSpec> specs,
                                                         std::uint64_t seed,
                                                         SimulationConfig cfg, Law first,
                                                         Law second) {
  cfg.seed = seed;
  cfg.generator = first;
  auto a = simulate_null_clouds(specs, cfg);
  cfg.generator = second;
  auto b = simulate_null_clouds(specs, cfg);
  std::vector<IndependenceReport> out;
  for (std::size_t s = 0; s < specs.size(); ++s) {
    IndependenceReport r;
    r.measure = specs[s].id;
    r.first = representative_band(a[s]);
    r.second = representative_band(b[s]);
    r.distance = table_distance(r.first, r.second);
    out.push_back(std::move(r));
  }
  return out;
}

IndependenceReport input_independence_check(const MeasureSpec& spec, std::uint64_t seed,
                                            SimulationConfig cfg, Law first, Law second) {
  return std::move(input_independence_check(std::span(&spec, 1), seed, std::move(cfg), first,
                                            second)
                       .front());
}

std::string table_to_json(const CalibrationTable& table) {
  nlohmann::json j;
  j["version"] = CalibrationTable::kVersion;
  j["measure"] = std::string(measure_name(table.measure));
  auto& grid = j["grid"] = nlohmann::json::array();
  for (const auto& k : table.grid) grid.push_back({{"x", k.x}, {"cum", k.cum}, {"sigma", k.sigma}});
  const auto& p = table.provenance;
  j["provenance"] = {{"Ns", p.windows},
                     {"M", p.pairs},
                     {"repetitions", p.repetitions},
                     {"seed", p.seed},
                     {"generator", p.generator}};
  return j.dump(1);
}

CalibrationTable table_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ArgumentError(std::string("calibration table is not valid JSON: ") + e.what());
  }
  try {
    if (j.at("version").get<int>() != CalibrationTable::kVersion)
      throw ArgumentError("unsupported calibration table version " + j.at("version").dump());
    CalibrationTable t;
    t.measure = measure_from_name(j.at("measure").get<std::string>());
    for (const auto& k : j.at("grid"))
      t.grid.push_back({k.at("x").get<double>(), k.at("cum").get<double>(),
                        k.at("sigma").get<double>()});
    if (t.grid.empty()) throw ArgumentError("calibration table has an empty grid");
    for (std::size_t i = 1; i < t.grid.size(); ++i)
      if (!(t.grid[i].x > t.grid[i - 1].x) || t.grid[i].cum < t.grid[i - 1].cum)
        throw ArgumentError("calibration grid must be increasing");
    const auto& p = j.at("provenance");
    t.provenance.windows = p.at("Ns").get<std::vector<std::size_t>>();
    t.provenance.pairs = p.at("M").get<std::size_t>();
    t.provenance.repetitions = p.value("repetitions", std::size_t{1});
    t.provenance.seed = p.at("seed").get<std::uint64_t>();
    t.provenance.generator = p.at("generator").get<std::string>();
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw ArgumentError(std::string("malformed calibration table: ") + e.what());
  }
}

void save_table(const CalibrationTable& table, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << table_to_json(table) << '\n';
}

CalibrationTable load_table(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return table_from_json(ss.str());
}

std::string table_file_name(MeasureId id) {
  return std::string(measure_name(id)) + ".calib.json";
}

std::string file_digest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char c;
  while (in.get(c)) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void CalibrationSet::add(CalibrationTable table) {
  const auto id = table.measure;
  tables_.insert_or_assign(id, std::move(table));
}

CalibrationSet CalibrationSet::load_dir(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir))
    throw std::runtime_error("calibration directory not found: " + dir.string());
  CalibrationSet set;
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    const auto name = entry.path().filename().string();
    if (entry.is_regular_file() && name.size() > 11 &&
        name.compare(name.size() - 11, 11, ".calib.json") == 0)
      files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    auto t = load_table(f);
    set.digests_[std::string(measure_name(t.measure))] = file_digest(f);
    set.add(std::move(t));
  }
  return set;
}

const CalibrationTable& CalibrationSet::at(MeasureId id) const {
  auto it = tables_.find(id);
  if (it == tables_.end())
    throw std::runtime_error("no calibration table for measure '" +
                             std::string(measure_name(id)) + "'");
  return it->second;
}

void apply_calibration(MeasureOutcome& outcome, const CalibrationSet& tables, double alpha) {
  outcome.set_significance(p_value_lookup(tables.at(outcome.id), outcome.normalized), alpha);
}

}  // namespace ddt
