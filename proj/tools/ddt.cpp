// ddt: calibrate, generate, scan and benchmark from the command line.
#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "ddt/bench.hpp"
#include "ddt/calibration.hpp"
#include "ddt/datagen.hpp"
#include "ddt/detectors.hpp"
#include "ddt/error.hpp"
#include "ddt/mmd.hpp"
#include "ddt/ncd.hpp"
#include "ddt/ordering.hpp"
#include "ddt/plan.hpp"
#include "ddt/records.hpp"

namespace fs = std::filesystem;
using namespace ddt;

namespace {

struct Globals {
  std::uint64_t seed = 1;
  unsigned jobs = 1;
  std::string format = "csv";
  std::string out;
  std::vector<std::string> argv;
};

// stdout unless --out was given
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw std::runtime_error("cannot write " + path);
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

RunManifest make_manifest(const Globals& g, const std::string& command) {
  RunManifest m;
  m.command_line = g.argv;
  m.seeds["seed"] = g.seed;
  m.config["command"] = command;
  m.config["jobs"] = g.jobs;
  m.config["format"] = g.format;
  m.version = DDT_VERSION;
  return m;
}

// Writes <out>.manifest.json next to the output and returns its digest;
// nothing when writing to stdout.
std::string emit_manifest(const Globals& g, const RunManifest& m) {
  if (g.out.empty()) return {};
  std::ofstream f(g.out + ".manifest.json");
  if (!f) throw std::runtime_error("cannot write manifest for " + g.out);
  f << m.text() << '\n';
  return m.digest();
}

struct InputOptions {
  std::string path;
  bool has_timestamp = false;
  bool reorder = false;
  std::string delimiter = ",";
};

void add_input(CLI::App* sub, InputOptions& in) {
  sub->add_option("series", in.path, "Series CSV (epoch[,timestamp],v1..vd)")->required();
  sub->add_flag("--timestamp", in.has_timestamp, "Second column is a timestamp");
  sub->add_flag("--reorder-by-epoch", in.reorder, "Sort rows by epoch instead of rejecting disorder");
  sub->add_option("--delimiter", in.delimiter, "Field delimiter")->default_val(",");
}

Series read_input(const InputOptions& in) {
  std::ifstream f(in.path);
  if (!f) throw std::runtime_error("cannot read " + in.path);
  CsvOptions o;
  o.has_timestamp = in.has_timestamp;
  o.reorder_by_epoch = in.reorder;
  if (in.delimiter == "\\t" || in.delimiter == "tab") o.delimiter = '\t';
  else if (in.delimiter.size() == 1) o.delimiter = in.delimiter[0];
  else throw ArgumentError("delimiter must be a single character");
  return parse_series(f, o);
}

std::vector<std::string> names_of(const std::vector<MeasureId>& ids) {
  std::vector<std::string> out;
  for (auto id : ids) out.emplace_back(measure_name(id));
  return out;
}

// Options shared by scan and the benches.
struct MethodOptions : MethodSettings {
  std::string calib_dir;
};

void add_method_options(CLI::App* sub, MethodOptions& m) {
  sub->add_option("--measures", m.measures, "Quorum measures (default: the ten block measures)")
      ->delimiter(',');
  sub->add_option("--quorum", m.quorum, "Disagreement fraction")->default_val(0.2);
  sub->add_option("--alpha", m.alpha, "Significance level")->default_val(0.05);
  sub->add_option("--calib-dir", m.calib_dir, "Directory of calibration tables");
  sub->add_option("--bootstrap", m.bootstrap, "NCD bootstrap runs")->default_val(100);
  sub->add_option("--swap-fraction", m.swap_fraction, "NCD swapped pair fraction")->default_val(0.5);
  sub->add_option("--level", m.level, "DEFLATE level")->default_val(6);
  sub->add_option("--sigma", m.sigma, "Kernel bandwidth sigma^2 or 'auto'")->default_val("auto");
  sub->add_option("--permutations", m.permutations, "MMD permutations")->default_val(500);
  sub->add_option("--significance", m.significance, "MMD significance: permutation|analytic");
  sub->add_option("--lambda", m.lambda, "Martingale threshold")->default_val(20.0);
  sub->add_option("--epsilon", m.epsilon, "Martingale epsilon")->default_val(0.95);
  sub->add_option("--t", m.t, "Martingale difference threshold")->default_val(3.0);
  sub->add_option("--reset-floor", m.reset_floor, "Martingale reset floor")->default_val(1e-6);
  sub->add_option("--strangeness", m.strangeness, "nn|avg")->default_val("nn");
  sub->add_flag("--pcheck", m.pcheck, "Martingale p-value distribution check and reset");
}

ScanPlan plan_from(const MethodOptions& m, const Globals& g, ScanMethod method) {
  return make_scan_plan(m, method, g.seed);
}

CalibrationSet load_tables(const MethodOptions& m, bool required) {
  if (m.calib_dir.empty()) {
    if (required) throw ArgumentError("this method needs --calib-dir");
    return {};
  }
  return CalibrationSet::load_dir(m.calib_dir);
}

// --- calibrate -------------------------------------------------------------

struct CalibrateOptions {
  std::vector<std::string> measures;
  std::size_t pairs = 2000;
  std::vector<std::size_t> windows;
  std::string law = "normal";
  std::size_t knots = CalibrationTable::kDefaultKnots;
  std::string out_dir = "tables";
};

int cmd_calibrate(const CalibrateOptions& o, const Globals& g) {
  std::vector<MeasureSpec> specs;
  for (auto id : o.measures.empty() ? calibratable_measures() : parse_measures(o.measures))
    specs.push_back(measure_spec(id));
  SimulationConfig cfg;
  cfg.pairs = o.pairs;
  if (!o.windows.empty()) cfg.windows = o.windows;
  cfg.generator = law_from_name(o.law);
  cfg.seed = g.seed;
  cfg.jobs = g.jobs;
  fs::create_directories(o.out_dir);
  const auto clouds = simulate_null_clouds(specs, cfg);

  auto manifest = make_manifest(g, "calibrate");
  manifest.config["pairs"] = cfg.pairs;
  manifest.config["windows"] = cfg.windows;
  manifest.config["law"] = o.law;
  manifest.config["knots"] = o.knots;

  Sink sink(g.out);
  TableWriter w(sink.stream(), format_from_name(g.format),
                {"measure", "file", "digest", "knots", "band_coverage"});
  std::vector<std::vector<Cell>> rows;
  for (const auto& c : clouds) {
    const auto table = representative_band(c, o.knots);
    const auto path = fs::path(o.out_dir) / table_file_name(c.measure);
    save_table(table, path);
    const auto digest = file_digest(path);
    manifest.table_digests[std::string(measure_name(c.measure))] = digest;
    rows.push_back({std::string(measure_name(c.measure)), path.string(), digest,
                    static_cast<std::uint64_t>(table.grid.size()), band_coverage(c, table)});
  }
  {
    std::ofstream mf(fs::path(o.out_dir) / "calibration.manifest.json");
    mf << manifest.text() << '\n';
  }
  const auto digest = emit_manifest(g, manifest);
  if (!digest.empty()) w.preamble("manifest", digest);
  for (const auto& r : rows) w.row(r);
  return 0;
}

// --- gen ---------------------------------------------------------------------

struct GenOptions {
  std::string kind = "average";
  std::size_t d = 1;
  std::size_t blocks = 21;
  std::size_t block_len = 250;
  std::string annot;
  // unibench
  std::string change = "average";
  std::string base = "normal";
  std::size_t windows = 0;
  std::size_t length = 0;
  std::size_t embed = 0;
  std::size_t index = 0;
};

int cmd_gen(const GenOptions& o, const Globals& g) {
  Sink sink(g.out);
  std::string annotation;
  Series series;
  if (o.kind == "unibench") {
    auto plan = draw_unibench_plan(unichange_from_name(o.change), law_from_name(o.base), g.seed,
                                   o.index);
    if (o.windows) plan.windows = o.windows;
    if (o.length) plan.length = o.length;
    if (o.embed) plan.embed = o.embed;
    const auto u = gen_unibench(plan);
    series = u.series;
    annotation = annotation_json(u);
  } else {
    SyntheticPlan plan;
    plan.kind = synthetic_from_name(o.kind);
    plan.d = o.d;
    plan.blocks = o.blocks;
    plan.block_len = o.block_len;
    plan.seed = g.seed;
    const auto s = gen_synthetic(plan);
    series = s.series;
    annotation = annotation_json(s);
  }
  write_series(sink.stream(), series);
  if (!o.annot.empty()) {
    std::ofstream f(o.annot);
    if (!f) throw std::runtime_error("cannot write " + o.annot);
    f << annotation << '\n';
  }
  return 0;
}

// --- scan --------------------------------------------------------------------

struct ScanOptions {
  InputOptions input;
  MethodOptions method;
  std::string method_name = "poset";
  std::size_t window = 250;
  std::size_t ref_start = 0;
  std::size_t step = 0;
  bool per_measure = false;
};

int cmd_scan(const ScanOptions& o, const Globals& g) {
  const auto series = read_input(o.input);
  auto plan = plan_from(o.method, g, scan_method_from_name(o.method_name));
  set_geometry(plan, o.ref_start, o.window, o.step);
  const auto tables = load_tables(o.method, needs_tables(plan));
  const auto records = run_scan(series, plan, tables);

  auto manifest = make_manifest(g, "scan");
  manifest.config["input"] = o.input.path;
  manifest.config["plan"] = plan_json(plan);
  manifest.table_digests = tables.digests();
  Sink sink(g.out);
  write_scan_records(sink.stream(), records, format_from_name(g.format), o.per_measure,
                     emit_manifest(g, manifest));
  return 0;
}

// --- ncd / mmd / order ---------------------------------------------------------

struct PairOptions {
  InputOptions input;
  std::size_t r_start = 0;
  std::size_t w_start = 0;
  std::size_t window = 250;
};

void add_pair(CLI::App* sub, PairOptions& p) {
  add_input(sub, p.input);
  sub->add_option("--r-start", p.r_start, "First index of R")->default_val(0);
  sub->add_option("--w-start", p.w_start, "First index of W (default: right after R)");
  sub->add_option("--window", p.window, "Window length")->default_val(250);
}

std::pair<std::vector<Point>, std::vector<Point>> read_pair(const PairOptions& p) {
  const auto s = read_input(p.input);
  const auto w_start = p.w_start ? p.w_start : p.r_start + p.window;
  return {window_rows(s, Window{p.r_start, p.window}), window_rows(s, Window{w_start, p.window})};
}

int cmd_ncd(const PairOptions& p, const MethodOptions& m, const Globals& g) {
  const auto [r, w] = read_pair(p);
  const auto plan = plan_from(m, g, ScanMethod::Ncd);
  const auto res = ncd_window_test(r, w, plan.ncd);
  auto manifest = make_manifest(g, "ncd");
  manifest.config["plan"] = plan_json(plan);
  Sink sink(g.out);
  TableWriter t(sink.stream(), format_from_name(g.format), {"ncd", "p_value", "reject", "codec"});
  const auto digest = emit_manifest(g, manifest);
  if (!digest.empty()) t.preamble("manifest", digest);
  t.row({res.ncd, res.p_value, res.reject, plan.ncd.codec.id()});
  return 0;
}

int cmd_mmd(const PairOptions& p, const MethodOptions& m, const std::string& estimator,
            const Globals& g) {
  auto [r, w] = read_pair(p);
  if (r.size() % 2 != 0) {
    std::cerr << "warning: odd window, dropping the last point of each side\n";
    r.pop_back();
    w.pop_back();
  }
  const auto method = estimator == "l2" ? ScanMethod::MmdL2 : ScanMethod::MmdU2;
  if (estimator != "u2" && estimator != "l2") throw ArgumentError("estimator must be u2 or l2");
  const auto plan = plan_from(m, g, method);
  const auto res = method == ScanMethod::MmdU2 ? mmd_u2(r, w, plan.kernel) : mmd_l2(r, w, plan.kernel);
  auto manifest = make_manifest(g, "mmd");
  manifest.config["plan"] = plan_json(plan);
  Sink sink(g.out);
  TableWriter t(sink.stream(), format_from_name(g.format),
                {"estimator", "value", "variance_estimate", "sigma2", "p_value", "reject"});
  const auto digest = emit_manifest(g, manifest);
  if (!digest.empty()) t.preamble("manifest", digest);
  t.row({std::string(estimator_name(res.estimator)), res.value, res.variance_estimate, res.sigma2,
         res.p_value ? Cell(*res.p_value) : Cell(std::monostate{}), res.reject});
  return 0;
}

int cmd_order(const PairOptions& p, const std::string& method, const std::string& dump,
              const Globals& g) {
  const auto [r, w] = read_pair(p);
  OrderingMethod om;
  if (method == "poset") om = OrderingMethod::Poset;
  else if (method == "mst") om = OrderingMethod::Mst;
  else throw ArgumentError("ordering method must be poset or mst");
  const auto part = order_windows(r, w, om);
  if (part.parallelism_warning)
    std::cerr << "warning: largest bin holds " << part.parallelism
              << " points, more than a quarter of the sample\n";
  if (!dump.empty()) {
    nlohmann::json j;
    j["method"] = method;
    j["parallelism"] = part.parallelism;
    j["parallelism_warning"] = part.parallelism_warning;
    auto& bins = j["bins"] = nlohmann::json::array();
    for (const auto& b : part.bins) {
      auto arr = nlohmann::json::array();
      for (const auto& pt : b)
        arr.push_back({{"index", pt.index},
                       {"origin", pt.origin == Origin::R ? "R" : "W"},
                       {"vector", pt.vector}});
      bins.push_back(arr);
    }
    std::ofstream f(dump);
    if (!f) throw std::runtime_error("cannot write " + dump);
    f << j.dump(1) << '\n';
  }
  Sink sink(g.out);
  TableWriter t(sink.stream(), format_from_name(g.format), {"bin", "size", "red", "white"});
  for (std::size_t i = 0; i < part.bins.size(); ++i) {
    std::uint64_t red = 0;
    for (const auto& pt : part.bins[i]) red += pt.origin == Origin::R;
    t.row({static_cast<std::uint64_t>(i + 1), static_cast<std::uint64_t>(part.bins[i].size()), red,
           static_cast<std::uint64_t>(part.bins[i].size()) - red});
  }
  return 0;
}

// --- benches -----------------------------------------------------------------

struct SynthOptions {
  MethodOptions method;
  std::vector<std::string> kinds{"average"};
  std::vector<std::size_t> dims{10};
  std::vector<std::string> methods{"poset"};
  std::size_t reps = 100;
  std::size_t block_len = 250;
  std::size_t blocks = 21;
  std::string runs_out;
};

int cmd_bench_synth(const SynthOptions& o, const Globals& g) {
  SynthBenchConfig cfg;
  cfg.kinds.clear();
  for (const auto& k : o.kinds) cfg.kinds.push_back(synthetic_from_name(k));
  cfg.methods.clear();
  for (const auto& m : o.methods) {
    const auto sm = scan_method_from_name(m);
    if (sm == ScanMethod::Measures1D) throw ArgumentError("bench methods: poset, mst, ncd, mmd_u2, mmd_l2, martingale");
    cfg.methods.push_back(sm);
  }
  cfg.dims = o.dims;
  cfg.repetitions = o.reps;
  cfg.block_len = o.block_len;
  cfg.blocks = o.blocks;
  cfg.seed = g.seed;
  cfg.jobs = g.jobs;
  cfg.plan = plan_from(o.method, g, ScanMethod::Poset);
  cfg.plan.kernel.early_stop = true;
  bool tables_needed = false;
  for (auto m : cfg.methods) {
    ScanPlan p = cfg.plan;
    p.method = m;
    tables_needed = tables_needed || needs_tables(p);
  }
  const auto tables = load_tables(o.method, tables_needed);
  const auto res = bench_synthetic(cfg, tables);

  auto manifest = make_manifest(g, "bench-synth");
  manifest.config["kinds"] = o.kinds;
  manifest.config["dims"] = o.dims;
  manifest.config["methods"] = o.methods;
  manifest.config["repetitions"] = o.reps;
  manifest.config["block_len"] = o.block_len;
  manifest.config["blocks"] = o.blocks;
  manifest.config["plan"] = plan_json(cfg.plan);
  manifest.table_digests = tables.digests();
  const auto digest = emit_manifest(g, manifest);
  Sink sink(g.out);
  write_synth_cells(sink.stream(), res.cells, format_from_name(g.format), digest);
  if (!o.runs_out.empty()) {
    std::ofstream f(o.runs_out);
    if (!f) throw std::runtime_error("cannot write " + o.runs_out);
    write_synth_runs(f, res.runs, format_from_name(g.format), digest);
  }
  return 0;
}

struct UniOptions {
  std::vector<std::string> changes{"average"};
  std::vector<std::string> bases{"normal"};
  std::size_t series = 1000;
  std::vector<double> levels;
  double alpha = 0.05;
  std::string calib_dir;
};

int cmd_bench_unidim(const UniOptions& o, const Globals& g) {
  UniBenchConfig cfg;
  cfg.changes.clear();
  for (const auto& c : o.changes) cfg.changes.push_back(unichange_from_name(c));
  cfg.bases.clear();
  for (const auto& b : o.bases) cfg.bases.push_back(law_from_name(b));
  cfg.series = o.series;
  if (!o.levels.empty()) cfg.levels = o.levels;
  cfg.alpha = o.alpha;
  cfg.seed = g.seed;
  cfg.jobs = g.jobs;
  if (o.calib_dir.empty()) throw ArgumentError("bench-unidim needs --calib-dir");
  const auto tables = CalibrationSet::load_dir(o.calib_dir);
  const auto rows = bench_unidim(cfg, tables);

  auto manifest = make_manifest(g, "bench-unidim");
  manifest.config["changes"] = o.changes;
  manifest.config["bases"] = o.bases;
  manifest.config["series"] = o.series;
  manifest.config["levels"] = cfg.levels;
  manifest.config["alpha"] = o.alpha;
  nlohmann::json sets;
  for (const auto& [name, ids] : default_unibench_sets()) sets[name] = names_of(ids);
  manifest.config["sets"] = sets;
  manifest.table_digests = tables.digests();
  Sink sink(g.out);
  write_unibench_rows(sink.stream(), rows, format_from_name(g.format), emit_manifest(g, manifest));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-window change detection toolkit"};
  app.set_version_flag("--version", DDT_VERSION);
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  g.argv.assign(argv, argv + argc);
  app.add_option("--seed", g.seed, "Root seed")->default_val(1);
  app.add_option("--jobs", g.jobs, "Worker threads")->default_val(1)->check(CLI::PositiveNumber);
  app.add_option("--format", g.format, "Output format")
      ->default_val("csv")
      ->check(CLI::IsMember({"csv", "tsv", "json"}));
  app.add_option("--out", g.out, "Output file (default stdout)");

  CalibrateOptions cal;
  auto* c = app.add_subcommand("calibrate", "Simulate null clouds and write calibration tables");
  c->add_option("--measures", cal.measures, "Measures (default: all calibratable)")->delimiter(',');
  c->add_option("--pairs", cal.pairs, "Window pairs per size (M)")->default_val(2000);
  c->add_option("--windows", cal.windows, "Window sizes N (default 100..2000 step 100)")->delimiter(',');
  c->add_option("--law", cal.law, "normal|uniform")->default_val("normal");
  c->add_option("--knots", cal.knots, "Grid knots")->default_val(CalibrationTable::kDefaultKnots);
  c->add_option("--out-dir", cal.out_dir, "Table directory")->default_val("tables");

  GenOptions gen;
  auto* gn = app.add_subcommand("gen", "Generate a benchmark series");
  gn->add_option("--kind", gen.kind, "average|variance|mixture|unibench")->default_val("average");
  gn->add_option("--d", gen.d, "Dimension")->default_val(1);
  gn->add_option("--blocks", gen.blocks, "Blocks")->default_val(21);
  gn->add_option("--block-len", gen.block_len, "Points per block")->default_val(250);
  gn->add_option("--annot", gen.annot, "Annotation JSON output");
  gn->add_option("--change", gen.change, "unibench: average|variance|both")->default_val("average");
  gn->add_option("--base", gen.base, "unibench: normal|uniform")->default_val("normal");
  gn->add_option("--windows", gen.windows, "unibench: window count M (default drawn)");
  gn->add_option("--length", gen.length, "unibench: window length T (default drawn)");
  gn->add_option("--embed", gen.embed, "unibench: embedded window (default drawn)");
  gn->add_option("--index", gen.index, "unibench: series index within the suite")->default_val(0);

  ScanOptions scan;
  auto* sc = app.add_subcommand("scan", "Scan a series against a reference window");
  add_input(sc, scan.input);
  add_method_options(sc, scan.method);
  sc->add_option("--method", scan.method_name, "poset|mst|ncd|mmd_u2|mmd_l2|martingale|measures")
      ->default_val("poset");
  sc->add_option("--window", scan.window, "Window length N")->default_val(250);
  sc->add_option("--ref-start", scan.ref_start, "First index of the reference window")->default_val(0);
  sc->add_option("--step", scan.step, "Step between W positions (default: window)");
  sc->add_flag("--per-measure", scan.per_measure, "Add per-measure columns");

  PairOptions ncd_pair;
  MethodOptions ncd_m;
  auto* nc = app.add_subcommand("ncd", "Compression distance test of two windows");
  add_pair(nc, ncd_pair);
  nc->add_option("--bootstrap", ncd_m.bootstrap, "Bootstrap runs")->default_val(100);
  nc->add_option("--swap-fraction", ncd_m.swap_fraction, "Swapped pair fraction")->default_val(0.5);
  nc->add_option("--level", ncd_m.level, "DEFLATE level")->default_val(6);
  nc->add_option("--alpha", ncd_m.alpha, "Significance level")->default_val(0.05);

  PairOptions mmd_pair;
  MethodOptions mmd_m;
  std::string estimator = "u2";
  auto* mm = app.add_subcommand("mmd", "Kernel two-sample test of two windows");
  add_pair(mm, mmd_pair);
  mm->add_option("--estimator", estimator, "u2|l2")->default_val("u2");
  mm->add_option("--sigma", mmd_m.sigma, "sigma^2 or 'auto'")->default_val("auto");
  mm->add_option("--permutations", mmd_m.permutations, "Permutations")->default_val(500);
  mm->add_option("--significance", mmd_m.significance, "permutation|analytic");
  mm->add_option("--alpha", mmd_m.alpha, "Significance level")->default_val(0.05);

  PairOptions ord_pair;
  std::string ord_method = "poset", dump;
  auto* od = app.add_subcommand("order", "Topological partition of two pooled windows");
  add_pair(od, ord_pair);
  od->add_option("--method", ord_method, "poset|mst")->default_val("poset");
  od->add_option("--dump-partition", dump, "Write bins with origin labels as JSON");

  SynthOptions syn;
  auto* bs = app.add_subcommand("bench-synth", "Synthetic sensitivity benchmark");
  add_method_options(bs, syn.method);
  bs->add_option("--kinds", syn.kinds, "average,variance,mixture")->delimiter(',');
  bs->add_option("--dims", syn.dims, "Dimensions")->delimiter(',');
  bs->add_option("--methods", syn.methods, "poset,mst,ncd,mmd_u2,mmd_l2,martingale")->delimiter(',');
  bs->add_option("--reps", syn.reps, "Repetitions")->default_val(100);
  bs->add_option("--block-len", syn.block_len, "Points per block")->default_val(250);
  bs->add_option("--blocks", syn.blocks, "Blocks")->default_val(21);
  bs->add_option("--runs-out", syn.runs_out, "Per-run rows output");

  UniOptions uni;
  auto* bu = app.add_subcommand("bench-unidim", "Single-dimension benchmark");
  bu->add_option("--changes", uni.changes, "average,variance,both")->delimiter(',');
  bu->add_option("--bases", uni.bases, "normal,uniform")->delimiter(',');
  bu->add_option("--series", uni.series, "Series per suite")->default_val(1000);
  bu->add_option("--levels", uni.levels, "Disagreement levels")->delimiter(',');
  bu->add_option("--alpha", uni.alpha, "Significance level")->default_val(0.05);
  bu->add_option("--calib-dir", uni.calib_dir, "Directory of calibration tables");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*c) return cmd_calibrate(cal, g);
    if (*gn) return cmd_gen(gen, g);
    if (*sc) return cmd_scan(scan, g);
    if (*nc) return cmd_ncd(ncd_pair, ncd_m, g);
    if (*mm) return cmd_mmd(mmd_pair, mmd_m, estimator, g);
    if (*od) return cmd_order(ord_pair, ord_method, dump, g);
    if (*bs) return cmd_bench_synth(syn, g);
    if (*bu) return cmd_bench_unidim(uni, g);
  } catch (const ArgumentError& e) {
    std::cerr << "ddt: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "ddt: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
