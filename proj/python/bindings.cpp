#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bifurlab/error.hpp"
#include "bifurlab/kneading.hpp"
#include "bifurlab/measure.hpp"
#include "bifurlab/rays.hpp"

namespace py = pybind11;
using namespace bifurlab;

namespace {

py::dict green_dict(const GreenValue& g) {
  py::dict out;
  out["value"] = g.value;
  out["error_bound"] = g.error_bound;
  out["iterations"] = g.iterations_used;
  out["status"] = to_string(g.status);
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.attr("__version__") = BIFURLAB_VERSION;

  static py::exception<Error> error_type(m, "Error");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::kInvalidArgument) {
        PyErr_SetString(PyExc_ValueError, e.what());
      } else {
        py::set_error(error_type, (std::string(to_string(e.kind())) + ": " + e.what()).c_str());
      }
    }
  });

  m.def(
      "green_value",
      [](int d, std::vector<cplx> c, cplx a, cplx z, double tol) {
        return green_dict(green_value(MarkedPolynomial(d, std::move(c), a), z, tol));
      },
      py::arg("d"), py::arg("c"), py::arg("a"), py::arg("z"), py::arg("tol") = 1e-12,
      "Green function of the marked polynomial at z.");

  m.def(
      "bottcher_value",
      [](int d, std::vector<cplx> c, cplx a, cplx z, double tol) {
        return bottcher_value(MarkedPolynomial(d, std::move(c), a), z, tol);
      },
      py::arg("d"), py::arg("c"), py::arg("a"), py::arg("z"), py::arg("tol") = 1e-12);

  m.def(
      "big_green",
      [](int d, std::vector<cplx> c, cplx a, double tol) {
        return green_dict(big_green(ParamPoint{d, std::move(c), a}, tol));
      },
      py::arg("d"), py::arg("c"), py::arg("a"), py::arg("tol") = 1e-12,
      "max of the critical Green values.");

  m.def(
      "holomorphic_index",
      [](std::vector<cplx> coeffs, cplx z0) { return holomorphic_index(coeffs, z0); },
      py::arg("coeffs"), py::arg("z0"), "Residue of 1/(P(z) - z); coefficients constant first.");

  m.def(
      "per_roots",
      [](int d, int n, int k, double tol) {
        const RootSet rs = solve_roots(per_poly_implicit(d, n, k), tol);
        py::list out;
        for (const Root& r : rs.roots) out.append(py::make_tuple(r.value, r.multiplicity));
        return out;
      },
      py::arg("d"), py::arg("n"), py::arg("k") = 0, py::arg("tol") = 1e-10,
      "Roots of Per(n,k) as (value, multiplicity) pairs.");

  m.def("unicritical_potential", &unicritical_potential, py::arg("d"), py::arg("c"),
        py::arg("budget") = 2000);
  m.def("convergence_gap", &convergence_gap_value, py::arg("d"), py::arg("n"), py::arg("k"),
        py::arg("c"));

  m.def(
      "kneading",
      [](const std::string& alpha, int d, int k, int n) {
        const KneadingResult r = kneading(Angle::parse(alpha), d, k, n);
        std::string digits;
        for (int x : r.digits) digits += static_cast<char>('0' + x);
        return py::make_tuple(digits, r.boundary_hit_at);
      },
      py::arg("alpha"), py::arg("d"), py::arg("k"), py::arg("n"));

  m.def(
      "counting_report",
      [](int d, int k, int n_max) {
        const CountingReport rep = verify_counting_bound(d, k, n_max);
        py::dict out;
        out["ok"] = rep.ok();
        out["constant"] = rep.constant;
        out["dimension_estimate"] = rep.dimension_estimate;
        out["dimension_target"] = rep.dimension_target;
        std::vector<std::size_t> counts;
        for (const auto& L : rep.levels) counts.push_back(L.max_count);
        out["max_counts"] = counts;
        return out;
      },
      py::arg("d"), py::arg("k"), py::arg("n_max"));

  m.def(
      "validate_portrait",
      [](const std::string& json, int d) {
        const PortraitVerdict v = validate_portrait(CriticalPortrait::from_json(json), d);
        py::dict out;
        out["valid"] = v.valid;
        out["in_cb0"] = v.in_cb0;
        out["detail"] = v.detail;
        return out;
      },
      py::arg("portrait_json"), py::arg("d"));

  m.def(
      "sample_portrait", [](int d, std::uint64_t seed) { return sample_cb0(d, seed).to_json(); },
      py::arg("d"), py::arg("seed"), "Random portrait in Cb0 as JSON.");

  m.def(
      "goldberg_solve",
      [](const std::string& json, double r, int d, double tol) {
        const GoldbergResult g = goldberg_solve(CriticalPortrait::from_json(json), r, d, tol);
        py::dict out;
        out["converged"] = g.converged;
        out["c"] = g.point.c;
        out["a"] = g.point.a;
        out["residual"] = g.residual;
        out["critical_green"] = g.critical_green;
        return out;
      },
      py::arg("portrait_json"), py::arg("r"), py::arg("d"), py::arg("tol") = 1e-12);
}
