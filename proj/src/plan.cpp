#include "ddt/plan.hpp"

#include "ddt/error.hpp"

namespace ddt {

std::vector<MeasureId> parse_measures(const std::vector<std::string>& names) {
  std::vector<MeasureId> out;
  for (const auto& n : names) out.push_back(measure_from_name(n));
  return out;
}

namespace {

std::vector<std::string> names_of(const std::vector<MeasureId>& ids) {
  std::vector<std::string> out;
  for (auto id : ids) out.emplace_back(measure_name(id));
  return out;
}

}  // namespace

ScanPlan make_scan_plan(const MethodSettings& m, ScanMethod method, std::uint64_t seed) {
  ScanPlan p;
  p.method = method;
  if (!m.measures.empty()) p.quorum.measures = parse_measures(m.measures);
  p.quorum.disagreement = m.quorum;
  p.quorum.alpha = m.alpha;
  p.ncd.bootstrap_runs = m.bootstrap;
  p.ncd.swap_fraction = m.swap_fraction;
  p.ncd.codec.level = m.level;
  p.ncd.alpha = m.alpha;
  p.ncd.seed = seed;
  if (m.sigma != "auto") {
    std::size_t used = 0;
    try {
      p.kernel.sigma2 = std::stod(m.sigma, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != m.sigma.size() || !(*p.kernel.sigma2 > 0.0))
      throw ArgumentError("sigma must be 'auto' or a positive number");
  }
  p.kernel.permutations = m.permutations;
  p.kernel.alpha = m.alpha;
  p.kernel.seed = seed;
  if (m.significance.empty()) {
    p.kernel.significance = method == ScanMethod::MmdL2 ? MmdSignificance::AnalyticLinear
                                                        : MmdSignificance::Permutation;
  } else if (m.significance == "permutation") {
    p.kernel.significance = MmdSignificance::Permutation;
  } else if (m.significance == "analytic") {
    p.kernel.significance = MmdSignificance::AnalyticLinear;
  } else {
    throw ArgumentError("significance must be 'permutation' or 'analytic'");
  }
  p.martingale.lambda = m.lambda;
  p.martingale.epsilon = m.epsilon;
  p.martingale.t = m.t;
  p.martingale.reset_floor = m.reset_floor;
  p.strangeness = strangeness_from_name(m.strangeness);
  p.pcheck = m.pcheck;
  validate(p.quorum);
  validate(p.ncd);
  return p;
}

void set_geometry(ScanPlan& p, std::size_t ref_start, std::size_t window, std::size_t step) {
  p.reference = Window{ref_start, window};
  p.step = p.method == ScanMethod::Martingale ? 1 : (step ? step : window);
}

bool needs_tables(const ScanPlan& p) {
  switch (p.method) {
    case ScanMethod::Poset:
    case ScanMethod::Mst:
    case ScanMethod::Measures1D: return true;
    case ScanMethod::Martingale: return p.pcheck;
    default: return false;
  }
}

nlohmann::json plan_json(const ScanPlan& p) {
  nlohmann::json j;
  j["method"] = scan_method_name(p.method);
  j["reference"] = {p.reference.start, p.reference.length};
  j["step"] = p.step;
  j["measures"] = names_of(p.quorum.measures);
  j["disagreement"] = p.quorum.disagreement;
  j["alpha"] = p.quorum.alpha;
  j["ncd"] = {{"codec", p.ncd.codec.id()},
              {"bootstrap", p.ncd.bootstrap_runs},
              {"swap_fraction", p.ncd.swap_fraction}};
  j["kernel"] = {{"sigma2", p.kernel.sigma2 ? nlohmann::json(*p.kernel.sigma2) : nlohmann::json("auto")},
                 {"permutations", p.kernel.permutations},
                 {"significance", p.kernel.significance == MmdSignificance::Permutation
                                      ? "permutation" : "analytic"}};
  j["martingale"] = {{"lambda", p.martingale.lambda},
                     {"epsilon", p.martingale.epsilon},
                     {"t", p.martingale.t},
                     {"reset_floor", p.martingale.reset_floor},
                     {"strangeness", strangeness_name(p.strangeness)},
                     {"pcheck", p.pcheck}};
  return j;
}

}  // namespace ddt
