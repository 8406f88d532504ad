#include "ddt/bench.hpp"

#include <algorithm>

#include "ddt/error.hpp"
#include "ddt/parallel.hpp"

namespace ddt {

std::uint64_t synth_series_seed(std::uint64_t seed, SyntheticKind kind, std::size_t d,
                                std::size_t repetition) {
  return stream_seed(seed, {static_cast<std::uint64_t>(kind), d, repetition});
}

SynthRun run_synthetic_once(const Series& series, SyntheticKind kind, std::size_t d,
                            std::size_t repetition, ScanMethod method, const SynthBenchConfig& cfg,
                            const CalibrationSet& tables) {
  const auto n = cfg.block_len;
  ScanPlan plan = cfg.plan;
  plan.method = method;
  plan.reference = Window{0, n};
  plan.step = method == ScanMethod::Martingale ? 1 : n;
  plan.stop_after_detection_from = 2 * n;
  const auto seed = stream_seed(cfg.seed, {static_cast<std::uint64_t>(kind), d, repetition, 7});
  plan.ncd.seed = seed;
  plan.kernel.seed = seed;

  const auto records = run_scan(series, plan, tables);
  SynthRun run;
  run.kind = kind;
  run.d = d;
  run.method = method;
  run.repetition = repetition;
  run.earliest = earliest_detection(records, 2 * n);
  run.ratio = rejection_ratio(run.earliest, series.size(), n);
  for (const auto& r : records)
    if (r.window_start < 2 * n && r.verdict == Verdict::Different) run.prerequisite_same = false;
  return run;
}

namespace {

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const auto k = v.size();
  return k % 2 ? v[k / 2] : 0.5 * (v[k / 2 - 1] + v[k / 2]);
}

}  // namespace

SynthBenchResult bench_synthetic(const SynthBenchConfig& cfg, const CalibrationSet& tables) {
  if (cfg.methods.empty()) throw ArgumentError("bench needs at least one method");
  if (cfg.repetitions == 0) throw ArgumentError("bench needs at least one repetition");
  struct Task {
    SyntheticKind kind;
    std::size_t d;
    std::size_t rep;
  };
  std::vector<Task> tasks;
  for (auto k : cfg.kinds)
    for (auto d : cfg.dims)
      for (std::size_t r = 0; r < cfg.repetitions; ++r) tasks.push_back({k, d, r});

  std::vector<std::vector<SynthRun>> slots(tasks.size());
  run_tasks(tasks.size(), cfg.jobs, [&](std::size_t i) {
    const auto& t = tasks[i];
    SyntheticPlan sp;
    sp.kind = t.kind;
    sp.blocks = cfg.blocks;
    sp.block_len = cfg.block_len;
    sp.d = t.d;
    sp.seed = synth_series_seed(cfg.seed, t.kind, t.d, t.rep);
    const auto g = gen_synthetic(sp);
    for (auto m : cfg.methods)
      slots[i].push_back(run_synthetic_once(g.series, t.kind, t.d, t.rep, m, cfg, tables));
  });

  SynthBenchResult out;
  for (auto& s : slots)
    for (auto& r : s) out.runs.push_back(r);
  for (auto k : cfg.kinds)
    for (auto d : cfg.dims)
      for (auto m : cfg.methods) {
        SynthCell c;
        c.kind = k;
        c.d = d;
        c.method = m;
        std::vector<double> ratios;
        for (const auto& r : out.runs) {
          if (r.kind != k || r.d != d || r.method != m) continue;
          ++c.runs;
          ratios.push_back(r.ratio);
          if (r.earliest) ++c.detections;
          if (r.prerequisite_same) ++c.prerequisite_same;
        }
        c.median_ratio = median(ratios);
        out.cells.push_back(c);
      }
  return out;
}

std::map<std::string, std::vector<MeasureId>> default_unibench_sets() {
  auto combined = standard_measures();
  for (auto id : extension_measures()) combined.push_back(id);
  return {{"standard", standard_measures()},
          {"extension", extension_measures()},
          {"combined", combined}};
}

std::vector<UniBenchRow> bench_unidim(const UniBenchConfig& cfg, const CalibrationSet& tables) {
  if (cfg.series == 0) throw ArgumentError("bench needs at least one series");
  if (cfg.step == 0) throw ArgumentError("scan step must be positive");
  const auto sets = cfg.sets.empty() ? default_unibench_sets() : cfg.sets;
  for (double l : cfg.levels)
    if (!(l > 0.0 && l <= 1.0)) throw ArgumentError("disagreement levels must be in (0,1]");

  // every measure of every set is evaluated once per window position
  std::vector<MeasureId> all;
  for (const auto& [name, ids] : sets)
    for (auto id : ids)
      if (std::find(all.begin(), all.end(), id) == all.end()) all.push_back(id);
  QuorumConfig eval_cfg;
  eval_cfg.measures = all;
  eval_cfg.alpha = cfg.alpha;
  validate(eval_cfg);

  struct Counts {
    std::size_t found = 0, matches = 0;
  };
  struct Suite {
    UniChange change;
    Law base;
  };
  std::vector<Suite> suites;
  for (auto c : cfg.changes)
    for (auto b : cfg.bases) suites.push_back({c, b});

  const std::size_t per_series = sets.size() * cfg.levels.size();
  std::vector<std::vector<Counts>> slots(suites.size() * cfg.series,
                                         std::vector<Counts>(per_series));
  run_tasks(slots.size(), cfg.jobs, [&](std::size_t task) {
    const auto& suite = suites[task / cfg.series];
    const auto index = task % cfg.series;
    const auto plan = draw_unibench_plan(
        suite.change, suite.base,
        stream_seed(cfg.seed, {static_cast<std::uint64_t>(suite.change),
                               static_cast<std::uint64_t>(suite.base)}),
        index);
    const auto g = gen_unibench(plan);
    const auto t = plan.length;
    const auto embed_start = (plan.embed - 1) * t;
    std::vector<double> values;
    for (const auto& p : g.series.points()) values.push_back(p.values[0]);
    const std::span<const double> ref(values.data(), t);
    auto& counts = slots[task];
    for (std::size_t start = t; start + t <= values.size(); start += cfg.step) {
      const auto outs = evaluate_measures_1d(ref, std::span<const double>(values.data() + start, t),
                                             eval_cfg, tables);
      std::size_t k = 0;
      for (const auto& [name, ids] : sets) {
        for (double level : cfg.levels) {
          QuorumConfig q;
          q.measures = ids;
          q.disagreement = level;
          q.alpha = cfg.alpha;
          if (quorum_verdict(outs, q) == Verdict::Same) {
            ++counts[k].found;
            if (start == embed_start) ++counts[k].matches;
          }
          ++k;
        }
      }
    }
  });

  std::vector<UniBenchRow> rows;
  for (std::size_t s = 0; s < suites.size(); ++s) {
    std::size_t k = 0;
    for (const auto& [name, ids] : sets) {
      for (double level : cfg.levels) {
        UniBenchRow row;
        row.change = suites[s].change;
        row.base = suites[s].base;
        row.set = name;
        row.disagreement = level;
        row.golden = cfg.series;
        for (std::size_t i = 0; i < cfg.series; ++i) {
          row.found += slots[s * cfg.series + i][k].found;
          row.matches += slots[s * cfg.series + i][k].matches;
        }
        row.error = error_count(row.found, row.matches, row.golden);
        rows.push_back(row);
        ++k;
      }
    }
  }
  return rows;
}

}  // namespace ddt
