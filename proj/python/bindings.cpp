#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "diagtor/covers.hpp"
#include "diagtor/errors.hpp"
#include "diagtor/torlab.hpp"

namespace py = pybind11;
using namespace diagtor;

namespace {

// Reports cross the boundary as plain dicts.
py::object to_python(const nlohmann::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

Algebra make_algebra(const std::string& family, unsigned n) { return Algebra(parse_family(family), n); }

CoefficientRing make_ring(const std::string& ring, long long delta) {
  return CoefficientRing::parse(ring, Integer(delta));
}

TorOptions options(const std::string& method, std::size_t budget) {
  TorOptions o;
  o.method = parse_tor_method(method == "minres" ? "resolution" : method);
  o.budget = budget;
  return o;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Diagram algebras, idempotent covers and Tor computations";

  auto base = py::register_exception<Error>(m, "DiagtorError", PyExc_RuntimeError);
  py::register_exception<BudgetExceeded>(m, "BudgetExceeded", base.ptr());
  py::register_exception<UnsupportedRing>(m, "UnsupportedRing", base.ptr());
  py::register_exception<InvalidArgument>(m, "InvalidArgument", base.ptr());

  m.def("dim", [](const std::string& family, unsigned n) { return make_algebra(family, n).dim(); },
        py::arg("family"), py::arg("n"));

  m.def(
      "basis",
      [](const std::string& family, unsigned n) {
        std::vector<std::string> out;
        for (const auto& d : enumerate_basis(parse_family(family), n)) out.push_back(d.to_string());
        return out;
      },
      py::arg("family"), py::arg("n"), "Basis diagrams in index order.");

  m.def(
      "multiply",
      [](const std::string& family, unsigned n, std::uint32_t i, std::uint32_t j) {
        auto a = make_algebra(family, n);
        if (i >= a.dim() || j >= a.dim()) throw InvalidArgument("basis index out of range");
        auto p = a.product(i, j);
        return py::make_tuple(p.index, p.loops);
      },
      py::arg("family"), py::arg("n"), py::arg("i"), py::arg("j"),
      "Product of basis diagrams i and j as (index, loops).");

  m.def("is_innermost", &is_innermost, py::arg("T"), py::arg("n"));

  m.def(
      "verify_cover",
      [](const std::string& family, unsigned n, unsigned height, const std::string& ring, long long delta) {
        auto a = make_algebra(family, n);
        auto r = make_ring(ring, delta);
        CoverReport report;
        {
          py::gil_scoped_release release;
          report = verify_cover(a, standard_cover(a, height), r);
        }
        return to_python(to_json(a, report, r));
      },
      py::arg("family"), py::arg("n"), py::arg("height"), py::arg("ring") = "Z", py::arg("delta") = 0);

  m.def(
      "tor",
      [](const std::string& family, unsigned n, const std::string& ring, long long delta, unsigned q_max,
         const std::string& method, std::size_t budget) {
        auto a = make_algebra(family, n);
        auto r = make_ring(ring, delta);
        TorReport report;
        {
          py::gil_scoped_release release;
          auto o = options(method, budget);
          report = o.method == TorMethod::Resolution ? tor_resolution(a, r, q_max) : tor_bar(a, r, q_max, budget);
        }
        return to_python(to_json(report, r));
      },
      py::arg("family"), py::arg("n"), py::arg("ring") = "Z", py::arg("delta") = 0, py::arg("q_max") = 1,
      py::arg("method") = "bar", py::arg("budget") = 5'000'000);

  m.def(
      "compare",
      [](const std::string& family, unsigned n, const std::string& ring, long long delta, unsigned q_max,
         const std::string& method, std::size_t budget) {
        auto a = make_algebra(family, n);
        auto r = make_ring(ring, delta);
        InducedMapReport report;
        {
          py::gil_scoped_release release;
          report = induced_tor_map(a, r, q_max, options(method, budget));
        }
        return to_python(to_json(report, r));
      },
      py::arg("family"), py::arg("n"), py::arg("ring") = "Z", py::arg("delta") = 0, py::arg("q_max") = 1,
      py::arg("method") = "auto", py::arg("budget") = 5'000'000,
      "Map on Tor induced by the quotient onto the group algebra, checked against the claimed range.");

  m.def(
      "verify",
      [](const std::string& theorem, unsigned n, const std::string& ring, long long delta, unsigned q_max,
         unsigned height) {
        auto r = make_ring(ring, delta);
        Verdict v;
        {
          py::gil_scoped_release release;
          v = verify_theorem(parse_theorem(theorem), n, r, q_max, {}, height);
        }
        return to_python(v.json);
      },
      py::arg("theorem"), py::arg("n"), py::arg("ring") = "Z", py::arg("delta") = 0, py::arg("q_max") = 1,
      py::arg("height") = 0, "height = 0 picks the default for the theorem.");
}
