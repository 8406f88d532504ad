// Python module: scan, measure and calibration lookup over the core library.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <optional>

#include "ddt/calibration.hpp"
#include "ddt/detectors.hpp"
#include "ddt/error.hpp"
#include "ddt/plan.hpp"
#include "ddt/records.hpp"

namespace py = pybind11;
using namespace ddt;

namespace {

// A loaded calibration set; unusable once closed.
class Handle {
 public:
  explicit Handle(const std::string& dir)
      : dir_(dir), tables_(std::make_unique<CalibrationSet>(CalibrationSet::load_dir(dir))) {}

  const CalibrationSet& tables() const {
    if (!tables_) throw StateError("calibration handle is closed");
    return *tables_;
  }
  void close() { tables_.reset(); }
  bool closed() const { return !tables_; }
  const std::string& dir() const { return dir_; }

  std::vector<std::string> measures() const {
    std::vector<std::string> out;
    for (auto id : all_measures())
      if (tables().contains(id)) out.emplace_back(measure_name(id));
    return out;
  }

  double lookup(const std::string& measure, double normalized) const {
    return p_value_lookup(tables().at(measure_from_name(measure)), normalized);
  }

 private:
  std::string dir_;
  std::unique_ptr<CalibrationSet> tables_;
};

// Records as the JSON text the CLI's records are built from; the Python side parses it.
std::string scan(const std::vector<Point>& rows, const std::string& method, std::size_t window,
                 std::size_t ref_start, std::size_t step, std::uint64_t seed,
                 const MethodSettings& settings, const Handle* handle) {
  if (rows.empty()) throw ArgumentError("rows must not be empty");
  const auto series = Series::from_rows(rows);
  auto plan = make_scan_plan(settings, scan_method_from_name(method), seed);
  set_geometry(plan, ref_start, window, step);
  if (needs_tables(plan) && handle == nullptr)
    throw ArgumentError(std::string("method ") + method + " needs calibration tables");
  static const CalibrationSet none;
  std::vector<ScanRecord> records;
  {
    py::gil_scoped_release release;
    records = run_scan(series, plan, handle ? handle->tables() : none);
  }
  auto out = nlohmann::json::array();
  for (const auto& r : records) out.push_back(scan_record_json(r));
  return out.dump();
}

py::tuple measure(const std::string& id_name, const std::vector<double>& a,
                  const std::vector<double>& b, const Handle* handle, double alpha) {
  const auto id = measure_from_name(id_name);
  if (a.empty() || b.empty()) throw ArgumentError("both samples must be non-empty");
  const auto spec = measure_spec(id);
  MeasureOutcome o;
  if (id == MeasureId::WilcoxBaseline || id == MeasureId::TTestBaseline) {
    o = baseline_stat(id == MeasureId::WilcoxBaseline ? BaselineKind::Wilcox : BaselineKind::TTest,
                      a, b, alpha);
  } else {
    o = measure_eval(spec, ecdf_from_samples(a), ecdf_from_samples(b), a.size() + b.size());
    if (handle && spec.calibratable) apply_calibration(o, handle->tables(), alpha);
  }
  return py::make_tuple(o.raw, o.normalized, o.p_value ? py::cast(*o.p_value) : py::none());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.attr("__version__") = DDT_VERSION;

  py::register_exception<ArgumentError>(m, "ArgumentError", PyExc_ValueError);
  py::register_exception<RangeError>(m, "RangeError", PyExc_IndexError);
  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<EvaluationError>(m, "EvaluationError", PyExc_ArithmeticError);
  py::register_exception<StateError>(m, "StateError", PyExc_RuntimeError);

  py::class_<Handle>(m, "Handle")
      .def_property_readonly("closed", &Handle::closed)
      .def_property_readonly("directory", &Handle::dir)
      .def("close", &Handle::close)
      .def("measures", &Handle::measures)
      .def("lookup", &Handle::lookup, py::arg("measure"), py::arg("normalized"));

  m.def("calibration_load", [](const std::string& dir) { return Handle(dir); }, py::arg("directory"));

  py::class_<MethodSettings>(m, "MethodSettings")
      .def(py::init<>())
      .def_readwrite("measures", &MethodSettings::measures)
      .def_readwrite("quorum", &MethodSettings::quorum)
      .def_readwrite("alpha", &MethodSettings::alpha)
      .def_readwrite("bootstrap", &MethodSettings::bootstrap)
      .def_readwrite("swap_fraction", &MethodSettings::swap_fraction)
      .def_readwrite("level", &MethodSettings::level)
      .def_readwrite("sigma", &MethodSettings::sigma)
      .def_readwrite("permutations", &MethodSettings::permutations)
      .def_readwrite("significance", &MethodSettings::significance)
      .def_readwrite("lambda_", &MethodSettings::lambda)
      .def_readwrite("epsilon", &MethodSettings::epsilon)
      .def_readwrite("t", &MethodSettings::t)
      .def_readwrite("reset_floor", &MethodSettings::reset_floor)
      .def_readwrite("strangeness", &MethodSettings::strangeness)
      .def_readwrite("pcheck", &MethodSettings::pcheck);

  m.def("scan_json", &scan, py::arg("rows"), py::arg("method"), py::arg("window"),
        py::arg("ref_start"), py::arg("step"), py::arg("seed"), py::arg("settings"),
        py::arg("tables").none(true));
  m.def("measure", &measure, py::arg("measure"), py::arg("a"), py::arg("b"),
        py::arg("tables").none(true) = nullptr, py::arg("alpha") = 0.05);
}
