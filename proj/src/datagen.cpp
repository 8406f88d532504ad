#include "ddt/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include <json.hpp>

#include "ddt/error.hpp"

namespace ddt {

namespace {

constexpr std::uint64_t kPlacementKey = 0x6d6978;  // stream for mixture placement

std::vector<double> log_spaced(double lo, double hi, std::size_t count) {
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = lo;
    return out;
  }
  const double a = std::log10(lo), b = std::log10(hi);
  for (std::size_t i = 0; i < count; ++i)
    out[i] = std::pow(10.0, a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
  return out;
}

void check_plan(const SyntheticPlan& plan) {
  if (plan.blocks < 3) throw ArgumentError("synthetic series need at least 3 blocks");
  if (plan.block_len == 0) throw ArgumentError("block length must be positive");
  if (plan.d == 0) throw ArgumentError("dimension must be positive");
  if (!plan.schedule.empty() && plan.schedule.size() != plan.blocks - 2)
    throw ArgumentError("schedule needs one value per block from block 3 on");
}

std::vector<double> schedule_of(const SyntheticPlan& plan) {
  return plan.schedule.empty() ? default_schedule(plan.kind, plan.blocks) : plan.schedule;
}

// Block-major layout; every (block, dimension) column has its own stream so
// the marginal law of a dimension does not depend on d.
GeneratedSeries generate(const SyntheticPlan& plan, std::vector<BlockParams> params) {
  const auto n = plan.blocks * plan.block_len;
  std::vector<Point> rows(n, Point(plan.d, 0.0));
  for (std::size_t b = 0; b < plan.blocks; ++b) {
    auto& bp = params[b];
    bp.start = b * plan.block_len;
    bp.length = plan.block_len;
    std::vector<bool> uniform(plan.block_len, false);
    if (bp.uniform_fraction > 0.0) {
      const auto k = static_cast<std::size_t>(
          std::llround(bp.uniform_fraction * static_cast<double>(plan.block_len)));
      std::vector<std::size_t> idx(plan.block_len);
      std::iota(idx.begin(), idx.end(), 0);
      auto rng = make_rng(plan.seed, {b, kPlacementKey});
      std::shuffle(idx.begin(), idx.end(), rng);
      for (std::size_t i = 0; i < k && i < idx.size(); ++i) uniform[idx[i]] = true;
    }
    for (std::size_t c = 0; c < plan.d; ++c) {
      auto rng = make_rng(plan.seed, {b, c});
      std::normal_distribution<double> normal(bp.mean, bp.sd);
      std::uniform_real_distribution<double> unif(-kMixtureHalfWidth, kMixtureHalfWidth);
      for (std::size_t i = 0; i < plan.block_len; ++i)
        rows[bp.start + i][c] = uniform[i] ? unif(rng) : normal(rng);
    }
  }
  GeneratedSeries g;
  g.series = Series::from_rows(rows);
  g.blocks = std::move(params);
  g.kind = synthetic_name(plan.kind);
  g.seed = plan.seed;
  return g;
}

}  // namespace

const char* synthetic_name(SyntheticKind k) {
  switch (k) {
    case SyntheticKind::Average: return "average";
    case SyntheticKind::Variance: return "variance";
    case SyntheticKind::Mixture: return "mixture";
  }
  return "?";
}

SyntheticKind synthetic_from_name(std::string_view name) {
  for (auto k : {SyntheticKind::Average, SyntheticKind::Variance, SyntheticKind::Mixture})
    if (name == synthetic_name(k)) return k;
  throw ArgumentError("unknown synthetic kind: " + std::string(name));
}

std::vector<double> default_schedule(SyntheticKind kind, std::size_t blocks) {
  if (blocks < 3) throw ArgumentError("synthetic series need at least 3 blocks");
  const auto count = blocks - 2;
  switch (kind) {
    case SyntheticKind::Average: return log_spaced(0.05, 50.0, count);
    case SyntheticKind::Variance: return log_spaced(std::pow(10.0, 0.01), 10.0, count);
    case SyntheticKind::Mixture: {
      std::vector<double> out(count);
      for (std::size_t i = 0; i < count; ++i)
        out[i] = static_cast<double>(i + 1) / static_cast<double>(blocks - 2);
      return out;
    }
  }
  return {};
}

GeneratedSeries gen_average_series(const SyntheticPlan& plan) {
  check_plan(plan);
  if (plan.kind != SyntheticKind::Average) throw ArgumentError("plan kind is not average");
  const auto s = schedule_of(plan);
  std::vector<BlockParams> params(plan.blocks);
  for (std::size_t b = 2; b < plan.blocks; ++b) params[b].mean = s[b - 2];
  return generate(plan, std::move(params));
}

GeneratedSeries gen_variance_series(const SyntheticPlan& plan) {
  check_plan(plan);
  if (plan.kind != SyntheticKind::Variance) throw ArgumentError("plan kind is not variance");
  const auto s = schedule_of(plan);
  std::vector<BlockParams> params(plan.blocks);
  for (std::size_t b = 2; b < plan.blocks; ++b) {
    if (!(s[b - 2] > 0.0)) throw ArgumentError("standard deviations must be positive");
    params[b].sd = s[b - 2];
  }
  return generate(plan, std::move(params));
}

GeneratedSeries gen_mixture_series(const SyntheticPlan& plan) {
  check_plan(plan);
  if (plan.kind != SyntheticKind::Mixture) throw ArgumentError("plan kind is not mixture");
  const auto s = schedule_of(plan);
  std::vector<BlockParams> params(plan.blocks);
  for (std::size_t b = 2; b < plan.blocks; ++b) {
    if (!(s[b - 2] >= 0.0 && s[b - 2] <= 1.0))
      throw ArgumentError("uniform fractions must be in [0,1]");
    params[b].uniform_fraction = s[b - 2];
  }
  return generate(plan, std::move(params));
}

GeneratedSeries gen_synthetic(const SyntheticPlan& plan) {
  switch (plan.kind) {
    case SyntheticKind::Average: return gen_average_series(plan);
    case SyntheticKind::Variance: return gen_variance_series(plan);
    case SyntheticKind::Mixture: return gen_mixture_series(plan);
  }
  throw ArgumentError("unknown synthetic kind");
}

ClassifiedSeries classified_to_series(const std::vector<ClassifiedRow>& rows, std::uint64_t seed) {
  std::map<std::string, std::vector<Point>> groups;
  for (const auto& r : rows) groups[r.key].push_back(r.values);
  if (groups.size() < 2) throw ArgumentError("classified data needs at least two classes");

  std::vector<std::pair<std::string, std::vector<Point>>> ordered(groups.begin(), groups.end());
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const auto& a, const auto& b) { return a.second.size() > b.second.size(); });
  ClassifiedSeries out;
  std::vector<Point> all;
  std::uint64_t g = 0;
  for (auto& [key, pts] : ordered) {
    auto rng = make_rng(seed, {g++});
    std::shuffle(pts.begin(), pts.end(), rng);
    if (!all.empty()) out.boundaries.push_back(all.size());
    out.classes.emplace_back(key, pts.size());
    all.insert(all.end(), pts.begin(), pts.end());
  }
  out.series = Series::from_rows(all);
  return out;
}

const char* unichange_name(UniChange c) {
  switch (c) {
    case UniChange::Average: return "average";
    case UniChange::Variance: return "variance";
    case UniChange::Both: return "both";
  }
  return "?";
}

UniChange unichange_from_name(std::string_view name) {
  for (auto c : {UniChange::Average, UniChange::Variance, UniChange::Both})
    if (name == unichange_name(c)) return c;
  throw ArgumentError("unknown change kind: " + std::string(name));
}

UniBenchPlan draw_unibench_plan(UniChange change, Law base, std::uint64_t seed,
                                std::size_t index) {
  auto rng = make_rng(seed, {index, 0});
  UniBenchPlan p;
  p.change = change;
  p.base = base;
  p.windows = std::uniform_int_distribution<std::size_t>(2, 20)(rng);
  p.length = 100 * std::uniform_int_distribution<std::size_t>(1, 10)(rng);
  p.embed = std::uniform_int_distribution<std::size_t>(2, p.windows)(rng);
  p.seed = stream_seed(seed, {index, 1});
  return p;
}

UniBenchSeries gen_unibench(const UniBenchPlan& plan) {
  if (plan.windows < 2 || plan.windows > 20) throw ArgumentError("window count must be in [2,20]");
  if (plan.length < 100 || plan.length > 1000 || plan.length % 100 != 0)
    throw ArgumentError("window length must be one of 100, 200, ..., 1000");
  if (plan.embed < 2 || plan.embed > plan.windows)
    throw ArgumentError("embedding position must be in [2, M]");

  UniBenchSeries out;
  out.plan = plan;
  auto rng = make_rng(plan.seed, {0});
  std::normal_distribution<double> n10(0.0, 10.0);
  std::bernoulli_distribution coin(0.5);
  out.m0 = n10(rng);
  out.v0 = std::fabs(n10(rng));

  std::vector<double> values;
  values.reserve(plan.windows * plan.length);
  for (std::size_t i = 1; i <= plan.windows; ++i) {
    UniWindow win;
    win.start = (i - 1) * plan.length;
    win.length = plan.length;
    win.reference = i == 1;
    win.embedded = i == plan.embed;
    win.mean = out.m0;
    win.sd = out.v0;
    if (!win.reference && !win.embedded) {
      const double r = coin(rng) ? 1.0 : -1.0;
      const double fi = static_cast<double>(i);
      switch (plan.change) {
        case UniChange::Average: win.mean = out.m0 + r * out.m0 / fi; break;
        case UniChange::Variance: win.sd = out.v0 + r * out.v0 / fi; break;
        case UniChange::Both:
          win.mean = n10(rng);
          win.sd = std::fabs(n10(rng));
          break;
      }
    }
    auto wrng = make_rng(plan.seed, {i});
    for (std::size_t k = 0; k < plan.length; ++k) {
      if (plan.base == Law::Normal) {
        values.push_back(win.mean + win.sd * draw_standard(Law::Normal, wrng));
      } else {
        values.push_back(win.mean - win.sd + 2.0 * win.sd * draw_standard(Law::Uniform, wrng));
      }
    }
    out.windows.push_back(win);
  }
  std::vector<Point> rows;
  rows.reserve(values.size());
  for (double v : values) rows.push_back({v});
  out.series = Series::from_rows(rows);
  return out;
}

std::string annotation_json(const GeneratedSeries& g) {
  nlohmann::json j;
  j["kind"] = g.kind;
  j["seed"] = g.seed;
  j["dimension"] = g.series.dim();
  j["normal_parameters"] = "mean,sd";
  j["uniform_component"] = {-kMixtureHalfWidth, kMixtureHalfWidth};
  auto& blocks = j["blocks"] = nlohmann::json::array();
  for (const auto& b : g.blocks)
    blocks.push_back({{"start", b.start},
                      {"length", b.length},
                      {"mean", b.mean},
                      {"sd", b.sd},
                      {"uniform_fraction", b.uniform_fraction}});
  return j.dump(2);
}

std::string annotation_json(const UniBenchSeries& g) {
  nlohmann::json j;
  j["kind"] = "unibench";
  j["change"] = unichange_name(g.plan.change);
  j["base"] = std::string(law_name(g.plan.base));
  j["seed"] = g.plan.seed;
  j["windows"] = g.plan.windows;
  j["window_length"] = g.plan.length;
  j["embedded_window"] = g.plan.embed;
  j["m0"] = g.m0;
  j["v0"] = g.v0;
  j["normal_parameters"] = "mean,sd";
  auto& ws = j["blocks"] = nlohmann::json::array();
  for (const auto& w : g.windows)
    ws.push_back({{"start", w.start},
                  {"length", w.length},
                  {"mean", w.mean},
                  {"sd", w.sd},
                  {"reference", w.reference},
                  {"embedded", w.embedded}});
  return j.dump(2);
}

}  // namespace ddt
