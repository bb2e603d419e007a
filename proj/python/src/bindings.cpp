#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include "archetypal/chain.hpp"
#include "archetypal/errors.hpp"
#include "archetypal/fourier.hpp"
#include "archetypal/grid.hpp"
#include "archetypal/measure.hpp"
#include "archetypal/presets.hpp"
#include "archetypal/rng.hpp"
#include "archetypal/series.hpp"
#include "archetypal/transfer.hpp"
#include "archetypal/verify.hpp"

namespace py = pybind11;
using namespace archetypal;
using nlohmann::json;

namespace {

py::object json_to_py(const json& j) {
  switch (j.type()) {
    case json::value_t::null:
      return py::none();
    case json::value_t::boolean:
      return py::bool_(j.get<bool>());
    case json::value_t::number_integer:
      return py::int_(j.get<long long>());
    case json::value_t::number_unsigned:
      return py::int_(j.get<unsigned long long>());
    case json::value_t::number_float:
      return py::float_(j.get<double>());
    case json::value_t::string:
      return py::str(j.get<std::string>());
    case json::value_t::array: {
      py::list out;
      for (const auto& e : j) out.append(json_to_py(e));
      return out;
    }
    case json::value_t::object: {
      py::dict out;
      for (const auto& [k, v] : j.items()) out[py::str(k)] = json_to_py(v);
      return out;
    }
    default:
      return py::none();
  }
}

json py_to_json(const py::handle& h) {
  if (h.is_none()) return nullptr;
  if (py::isinstance<py::bool_>(h)) return h.cast<bool>();
  if (py::isinstance<py::int_>(h)) return h.cast<long long>();
  if (py::isinstance<py::float_>(h)) return h.cast<double>();
  if (py::isinstance<py::str>(h)) return h.cast<std::string>();
  if (py::isinstance<py::dict>(h)) {
    json out = json::object();
    for (auto item : h.cast<py::dict>())
      out[item.first.cast<std::string>()] = py_to_json(item.second);
    return out;
  }
  if (py::isinstance<py::list>(h) || py::isinstance<py::tuple>(h)) {
    json out = json::array();
    for (auto item : h.cast<py::sequence>()) out.push_back(py_to_json(item));
    return out;
  }
  throw SpecError("value is not representable as JSON");
}

}  // namespace

PYBIND11_MODULE(_archetypal, m) {
  m.doc() = "numerics for the archetypal functional equation y(x) = E y(alpha (x - beta))";

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<SpecError>(m, "SpecError", base.ptr());
  py::register_exception<MomentError>(m, "MomentError", base.ptr());
  py::register_exception<RegimeError>(m, "RegimeError", base.ptr());
  py::register_exception<NotApplicableError>(m, "NotApplicableError", base.ptr());
  py::register_exception<NotASolutionError>(m, "NotASolutionError", base.ptr());
  py::register_exception<DegenerateError>(m, "DegenerateError", base.ptr());

  py::class_<RngStream>(m, "RngStream")
      .def(py::init<std::uint64_t, std::uint64_t>(), py::arg("seed"), py::arg("stream"))
      .def("next_u64", &RngStream::next_u64)
      .def("uniform01", &RngStream::uniform01)
      .def("exponential", &RngStream::exponential, py::arg("rate"))
      .def("uniform", &RngStream::uniform, py::arg("lo"), py::arg("hi"));

  py::class_<Atom>(m, "Atom")
      .def(py::init([](double a, double b, double p) { return Atom{a, b, p}; }), py::arg("a"),
           py::arg("b"), py::arg("p"))
      .def_readonly("a", &Atom::a)
      .def_readonly("b", &Atom::b)
      .def_readonly("p", &Atom::p)
      .def("__repr__", [](const Atom& at) {
        return "Atom(a=" + std::to_string(at.a) + ", b=" + std::to_string(at.b) +
               ", p=" + std::to_string(at.p) + ")";
      });

  py::class_<Marginal>(m, "Marginal")
      .def_static("point_mass", &Marginal::point_mass, py::arg("value"))
      .def_static("discrete", &Marginal::discrete, py::arg("atoms"))
      .def_static("exponential", &Marginal::exponential, py::arg("rate"))
      .def_static("uniform", &Marginal::uniform, py::arg("lo"), py::arg("hi"))
      .def("to_dict", [](const Marginal& mg) { return json_to_py(mg.to_json()); })
      .def_static("from_dict",
                  [](const py::handle& h) { return Marginal::from_json(py_to_json(h)); });

  py::class_<MeasureSpec>(m, "MeasureSpec")
      .def_static(
          "discrete",
          [](const std::vector<std::tuple<double, double, double>>& atoms) {
            std::vector<Atom> out;
            out.reserve(atoms.size());
            for (const auto& [a, b, p] : atoms) out.push_back({a, b, p});
            return MeasureSpec::discrete(std::move(out));
          },
          py::arg("atoms"), "Joint atoms as (alpha, beta, prob) triples.")
      .def_static("product", &MeasureSpec::product, py::arg("alpha"), py::arg("beta"))
      .def_static("from_dict",
                  [](const py::handle& h) { return MeasureSpec::from_json(py_to_json(h)); })
      .def("to_dict", [](const MeasureSpec& s) { return json_to_py(s.to_json()); })
      .def("q", &MeasureSpec::q)
      .def("sample",
           [](const MeasureSpec& s, std::uint64_t seed, std::uint64_t stream) {
             RngStream rng(seed, stream);
             return s.sample(rng);
           },
           py::arg("seed"), py::arg("stream") = 0)
      .def("__repr__", [](const MeasureSpec& s) { return s.to_json().dump(); });

  m.def("validate",
        [](const MeasureSpec& s) { return json_to_py(measure::report_to_json(measure::validate(s))); },
        py::arg("spec"));
  m.def("classify",
        [](const MeasureSpec& s, double tol) {
          return json_to_py(measure::report_to_json(measure::classify(s, tol)));
        },
        py::arg("spec"), py::arg("critical_tol") = 1e-9);
  m.def("sample_pairs", &measure::sample, py::arg("spec"), py::arg("n"), py::arg("seed"),
        py::arg("stream0") = 0);
  m.def("series_support_bound", &measure::series_support_bound, py::arg("spec"));
  m.def("reversed_series_support_bound", &measure::reversed_series_support_bound, py::arg("spec"));

  m.def("preset",
        [](const std::string& name, const py::handle& params) {
          return presets::preset(name, params.is_none() ? json::object() : py_to_json(params));
        },
        py::arg("name"), py::arg("params") = py::none());
  m.def("preset_names", &presets::preset_names);

  // chain
  py::class_<chain::Step>(m, "Step")
      .def_readonly("alpha", &chain::Step::alpha)
      .def_readonly("beta", &chain::Step::beta)
      .def_readonly("x", &chain::Step::x)
      .def_readonly("a", &chain::Step::a)
      .def_readonly("b", &chain::Step::b)
      .def_readonly("d", &chain::Step::d);
  py::class_<chain::Path>(m, "Path")
      .def_readonly("x0", &chain::Path::x0)
      .def_readonly("steps", &chain::Path::steps)
      .def_readonly("overflowed", &chain::Path::overflowed);
  m.def("simulate",
        [](const MeasureSpec& s, double x0, std::size_t n, std::uint64_t seed,
           std::uint64_t stream) {
          RngStream rng(seed, stream);
          return chain::simulate(s, x0, n, rng);
        },
        py::arg("spec"), py::arg("x0"), py::arg("n"), py::arg("seed"), py::arg("stream") = 0);
  m.def("reversed_tail_sum",
        [](const MeasureSpec& s, std::size_t n, std::uint64_t seed, std::uint64_t stream) {
          RngStream rng(seed, stream);
          return chain::reversed_tail_sum(s, n, rng);
        },
        py::arg("spec"), py::arg("n"), py::arg("seed"), py::arg("stream") = 0);
  py::class_<chain::StoppedRun>(m, "StoppedRun")
      .def_readonly("tau", &chain::StoppedRun::tau)
      .def_readonly("a_tau", &chain::StoppedRun::a_tau)
      .def_readonly("b_tau", &chain::StoppedRun::b_tau)
      .def_readonly("terminated", &chain::StoppedRun::terminated);
  m.def("stopping_time_negative",
        [](const MeasureSpec& s, std::uint64_t seed, std::uint64_t stream, std::size_t max_n) {
          RngStream rng(seed, stream);
          return chain::stopping_time_negative(s, rng, max_n);
        },
        py::arg("spec"), py::arg("seed"), py::arg("stream") = 0, py::arg("max_n") = 10000);
  py::class_<chain::WaldReport>(m, "WaldReport")
      .def_readonly("lhs", &chain::WaldReport::lhs)
      .def_readonly("lhs_stderr", &chain::WaldReport::lhs_stderr)
      .def_readonly("rhs", &chain::WaldReport::rhs)
      .def_readonly("mean_tau", &chain::WaldReport::mean_tau)
      .def_readonly("mean_tau_stderr", &chain::WaldReport::mean_tau_stderr)
      .def_readonly("excluded", &chain::WaldReport::excluded)
      .def_readonly("n", &chain::WaldReport::n);
  m.def("wald_check", &chain::wald_check, py::arg("spec"), py::arg("n"), py::arg("seed"),
        py::arg("max_n") = 10000, py::arg("workers") = 0);
  py::class_<chain::MartingaleReport>(m, "MartingaleReport")
      .def_readonly("estimate", &chain::MartingaleReport::estimate)
      .def_readonly("stderr", &chain::MartingaleReport::stderr_)
      .def_readonly("reference", &chain::MartingaleReport::reference)
      .def_readonly("n_paths", &chain::MartingaleReport::n_paths);
  m.def("martingale_check", &chain::martingale_check, py::arg("spec"), py::arg("y"), py::arg("x0"),
        py::arg("n_steps"), py::arg("n_paths"), py::arg("seed"), py::arg("workers") = 0);

  // series
  py::class_<series::SeriesConfig>(m, "SeriesConfig")
      .def(py::init<>())
      .def(py::init([](double tol, std::size_t min_depth, std::size_t max_depth) {
             return series::SeriesConfig{tol, min_depth, max_depth};
           }),
           py::arg("tail_tolerance") = 1e-12, py::arg("min_depth") = 16,
           py::arg("max_depth") = 10000)
      .def_readwrite("tail_tolerance", &series::SeriesConfig::tail_tolerance)
      .def_readwrite("min_depth", &series::SeriesConfig::min_depth)
      .def_readwrite("max_depth", &series::SeriesConfig::max_depth);
  py::class_<series::SeriesDraw>(m, "SeriesDraw")
      .def_readonly("value", &series::SeriesDraw::value)
      .def_readonly("depth", &series::SeriesDraw::depth)
      .def_readonly("capped", &series::SeriesDraw::capped);
  py::class_<series::EmpiricalCdf>(m, "EmpiricalCdf")
      .def(py::init<std::vector<double>>(), py::arg("samples"))
      .def("__call__", &series::EmpiricalCdf::operator(), py::arg("x"))
      .def("sorted_samples", &series::EmpiricalCdf::sorted_samples)
      .def("size", &series::EmpiricalCdf::size)
      .def("min", &series::EmpiricalCdf::min)
      .def("max", &series::EmpiricalCdf::max)
      .def("dkw_halfwidth", &series::EmpiricalCdf::dkw_halfwidth, py::arg("delta") = 0.05)
      .def("largest_jump", &series::EmpiricalCdf::largest_jump);
  py::class_<series::CdfDiagnostics>(m, "CdfDiagnostics")
      .def_readonly("n", &series::CdfDiagnostics::n)
      .def_readonly("mean_depth", &series::CdfDiagnostics::mean_depth)
      .def_readonly("max_depth_hits", &series::CdfDiagnostics::max_depth_hits)
      .def_readonly("dkw_halfwidth", &series::CdfDiagnostics::dkw_halfwidth)
      .def_readonly("caveats", &series::CdfDiagnostics::caveats);
  py::class_<series::CanonicalCdf>(m, "CanonicalCdf")
      .def_readonly("cdf", &series::CanonicalCdf::cdf)
      .def_readonly("diagnostics", &series::CanonicalCdf::diagnostics);
  m.def("canonical_cdf", &series::canonical_cdf, py::arg("spec"), py::arg("n"), py::arg("seed"),
        py::arg("config") = series::SeriesConfig{}, py::arg("allow_non_solution") = false,
        py::arg("workers") = 0);
  m.def("sample_upsilon_batch", &series::sample_upsilon_batch, py::arg("spec"), py::arg("n"),
        py::arg("seed"), py::arg("config") = series::SeriesConfig{}, py::arg("workers") = 0);
  m.def("sample_upsilon_reversed_batch", &series::sample_upsilon_reversed_batch, py::arg("spec"),
        py::arg("n"), py::arg("seed"), py::arg("config") = series::SeriesConfig{},
        py::arg("workers") = 0);

  // grid + transfer operator
  py::class_<GridFunction>(m, "GridFunction")
      .def(py::init<double, double, std::vector<double>>(), py::arg("xmin"), py::arg("xmax"),
           py::arg("values"))
      .def_static("constant", &GridFunction::constant, py::arg("xmin"), py::arg("xmax"),
                  py::arg("m"), py::arg("value"))
      .def_static("sampled", &GridFunction::sampled, py::arg("xmin"), py::arg("xmax"),
                  py::arg("m"), py::arg("f"))
      .def("__call__", &GridFunction::operator(), py::arg("x"))
      .def("xmin", &GridFunction::xmin)
      .def("xmax", &GridFunction::xmax)
      .def("size", &GridFunction::size)
      .def("node_x", &GridFunction::node_x, py::arg("j"))
      .def("values", &GridFunction::values)
      .def("interior_range", &GridFunction::interior_range, py::arg("margin"))
      .def("min_value", &GridFunction::min_value)
      .def("max_value", &GridFunction::max_value);
  py::class_<transfer::ApplyResult>(m, "ApplyResult")
      .def_readonly("result", &transfer::ApplyResult::result)
      .def_readonly("clamped_fraction", &transfer::ApplyResult::clamped_fraction);
  m.def("apply_operator", &transfer::apply, py::arg("spec"), py::arg("f"));
  m.def("apply_operator_with_stats", &transfer::apply_with_stats, py::arg("spec"), py::arg("f"));
  m.def("apply_derivative_operator", &transfer::apply_derivative, py::arg("spec"), py::arg("z"));
  m.def("operator_residual", &transfer::residual, py::arg("spec"), py::arg("f"),
        py::arg("interior_margin") = 0.1);
  py::class_<transfer::IterateRecord>(m, "IterateRecord")
      .def_readonly("iteration", &transfer::IterateRecord::iteration)
      .def_readonly("interior_range", &transfer::IterateRecord::interior_range)
      .def_readonly("residual", &transfer::IterateRecord::residual)
      .def_readonly("clamped_fraction", &transfer::IterateRecord::clamped_fraction);
  py::class_<transfer::IterateResult>(m, "IterateResult")
      .def_readonly("final", &transfer::IterateResult::final)
      .def_readonly("history", &transfer::IterateResult::history)
      .def_readonly("clamp_warning", &transfer::IterateResult::clamp_warning)
      .def_readonly("warning", &transfer::IterateResult::warning);
  m.def("iterate_operator", &transfer::iterate, py::arg("spec"), py::arg("f0"), py::arg("n"),
        py::arg("interior_margin") = 0.1);

  // fourier
  py::class_<fourier::SpectrumGrid>(m, "SpectrumGrid")
      .def_readonly("s", &fourier::SpectrumGrid::s)
      .def_readonly("values", &fourier::SpectrumGrid::values);
  m.def("default_s_values", &fourier::default_s_values);
  m.def("beta_charfn", &fourier::beta_charfn, py::arg("spec"), py::arg("t"));
  m.def("charfn", &fourier::charfn, py::arg("spec"), py::arg("s_values"), py::arg("n"),
        py::arg("seed"), py::arg("config") = series::SeriesConfig{}, py::arg("workers") = 0);
  m.def("fourier_iterate", &fourier::fourier_iterate, py::arg("spec"), py::arg("z0"),
        py::arg("s_values"), py::arg("n_iterations"), py::arg("n_samples"), py::arg("seed"),
        py::arg("force_simulation") = false, py::arg("workers") = 0);
  py::class_<fourier::AlternationRow>(m, "AlternationRow")
      .def_readonly("n", &fourier::AlternationRow::n)
      .def_readonly("values", &fourier::AlternationRow::values)
      .def_readonly("re_stderr", &fourier::AlternationRow::re_stderr);
  py::class_<fourier::AlternationReport>(m, "AlternationReport")
      .def_readonly("s", &fourier::AlternationReport::s)
      .def_readonly("rows", &fourier::AlternationReport::rows)
      .def_readonly("excluded", &fourier::AlternationReport::excluded);
  m.def("alternation_probe", &fourier::alternation_probe, py::arg("spec"), py::arg("s_values"),
        py::arg("n_lo"), py::arg("n_hi"), py::arg("n_samples"), py::arg("seed"),
        py::arg("max_block") = 10000, py::arg("workers") = 0);

  // verify
  py::class_<verify::CheckReport>(m, "CheckReport")
      .def_readonly("name", &verify::CheckReport::name)
      .def_readonly("statistic", &verify::CheckReport::statistic)
      .def_readonly("tolerance", &verify::CheckReport::tolerance)
      .def_readonly("passed", &verify::CheckReport::pass)
      .def_property_readonly(
          "details", [](const verify::CheckReport& r) { return json_to_py(r.details); })
      .def("to_dict",
           [](const verify::CheckReport& r) { return json_to_py(verify::report_to_json(r)); });
  m.def("suite_names", &verify::suite_names);
  m.def("run_suite", &verify::run_suite, py::arg("name"), py::arg("seed") = 0,
        py::arg("workers") = 0);
  m.def("check_canonical", &verify::check_canonical, py::arg("spec"), py::arg("n_samples"),
        py::arg("lo"), py::arg("hi"), py::arg("m"), py::arg("tol"), py::arg("seed"),
        py::arg("workers") = 0);
  m.def("check_subcritical_collapse", &verify::check_subcritical_collapse, py::arg("spec"),
        py::arg("f0"), py::arg("n_iterations"), py::arg("tol"), py::arg("n_samples"),
        py::arg("seed"), py::arg("workers") = 0);
  m.def("check_max_principle", &verify::check_max_principle, py::arg("f"),
        py::arg("window_fraction") = 0.1, py::arg("eps") = 1e-9);
  m.def("check_limit_equality", &verify::check_limit_equality, py::arg("spec"), py::arg("f"),
        py::arg("tol"), py::arg("window_fraction") = 0.1);
  py::class_<verify::AffineFit>(m, "AffineFit")
      .def_readonly("c0", &verify::AffineFit::c0)
      .def_readonly("c1", &verify::AffineFit::c1)
      .def_readonly("distance", &verify::AffineFit::distance)
      .def_readonly("passed", &verify::AffineFit::pass)
      .def_readonly("reason", &verify::AffineFit::reason);
  m.def("check_affine_uniqueness", &verify::check_affine_uniqueness, py::arg("spec"), py::arg("f"),
        py::arg("n_samples"), py::arg("tol"), py::arg("seed"), py::arg("window_fraction") = 0.1,
        py::arg("workers") = 0);
}
