#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "ddt/detectors.hpp"

namespace ddt {

/// Method settings as the CLI and the Python module take them; both build
/// their ScanPlan through make_scan_plan so the two agree.
struct MethodSettings {
  std::vector<std::string> measures;  // empty: the ten block measures
  double quorum = 0.2;
  double alpha = 0.05;
  std::size_t bootstrap = 100;
  double swap_fraction = 0.5;
  int level = 6;
  std::string sigma = "auto";
  std::size_t permutations = 500;
  std::string significance;  // empty: analytic for mmd_l2, permutation otherwise
  double lambda = 20.0;
  double epsilon = 0.95;
  double t = 3.0;
  double reset_floor = 1e-6;
  std::string strangeness = "nn";
  bool pcheck = false;
};

std::vector<MeasureId> parse_measures(const std::vector<std::string>& names);

/// Reference and step are left at their defaults. Throws ArgumentError on
/// bad names or values.
ScanPlan make_scan_plan(const MethodSettings& m, ScanMethod method, std::uint64_t seed);

/// Reference window and step as the scan command sets them: step 0 means
/// one window length, and the martingale always advances by one point.
void set_geometry(ScanPlan& p, std::size_t ref_start, std::size_t window, std::size_t step);

/// True when the plan's method reads calibration tables.
bool needs_tables(const ScanPlan& p);

nlohmann::json plan_json(const ScanPlan& p);

}  // namespace ddt
