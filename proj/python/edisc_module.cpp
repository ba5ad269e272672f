#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "edisc/closed_testing.hpp"
#include "edisc/discovery_matrix.hpp"
#include "edisc/errors.hpp"
#include "edisc/merge_core.hpp"
#include "edisc/render.hpp"
#include "edisc/sim_study.hpp"

namespace py = pybind11;

namespace {

// Dense K x K copy with NaN above the diagonal.
py::array_t<double> to_numpy(const edisc::TriangularMatrix& m) {
  const auto dim = static_cast<py::ssize_t>(m.dim());
  py::array_t<double> out({dim, dim});
  auto view = out.mutable_unchecked<2>();
  for (py::ssize_t r = 0; r < dim; ++r) {
    for (py::ssize_t j = 0; j < dim; ++j) {
      view(r, j) = j <= r ? m(static_cast<std::size_t>(r + 1), static_cast<std::size_t>(j + 1))
                          : std::numeric_limits<double>::quiet_NaN();
    }
  }
  return out;
}

edisc::SortedEValues sorted_from(const std::vector<double>& e) {
  return edisc::sort_evalues(edisc::EValueVec(e));
}

edisc::ColorScale scale_from(const std::string& name) {
  if (name == "jeffreys") return edisc::ColorScale::jeffreys();
  if (name == "fisher") return edisc::ColorScale::fisher();
  throw edisc::ValidationError("scale must be 'jeffreys' or 'fisher'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Discovery matrices from independent e-values";

  py::register_exception<edisc::ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<edisc::DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<edisc::SizeError>(m, "SizeError", PyExc_ValueError);
  py::register_exception<edisc::IndexError>(m, "IndexError", PyExc_IndexError);

  m.def(
      "u_stat", [](const std::vector<double>& e, int n) {
        return edisc::u_stat_direct(edisc::EValueVec(e), edisc::UStatOrder(n));
      },
      py::arg("e"), py::arg("n"), "U_n by subset enumeration (n > K falls back to U_K).");
  m.def(
      "u2_identity", [](const std::vector<double>& e) { return edisc::u2_identity(edisc::EValueVec(e)); },
      py::arg("e"));
  m.def(
      "rvar", [](const std::vector<double>& e) { return edisc::rvar(edisc::EValueVec(e)); }, py::arg("e"));
  m.def("e_to_p", &edisc::e_to_p, py::arg("e"));

  py::class_<edisc::UStatAccumulator>(m, "UStatAccumulator")
      .def(py::init([](int n) { return edisc::UStatAccumulator(edisc::UStatOrder(n)); }), py::arg("n"))
      .def("insert", &edisc::UStatAccumulator::insert, py::arg("v"))
      .def("u_value", &edisc::UStatAccumulator::u_value)
      .def_property_readonly("count", &edisc::UStatAccumulator::count)
      .def_property_readonly("esp", [](const edisc::UStatAccumulator& acc) {
        return std::vector<double>(acc.esp().begin(), acc.esp().end());
      });

  py::class_<edisc::TriangularMatrix>(m, "Matrix")
      .def_property_readonly("dim", &edisc::TriangularMatrix::dim)
      .def_property_readonly("kind", [](const edisc::TriangularMatrix& t) {
        return t.kind() == edisc::MatrixKind::evalue ? "evalue" : "pvalue";
      })
      .def("at", py::overload_cast<std::size_t, std::size_t>(&edisc::TriangularMatrix::at, py::const_),
           py::arg("r"), py::arg("j"), "Entry (r, j), 1-based, j <= r.")
      .def("to_numpy", &to_numpy)
      .def("to_csv", &edisc::matrix_to_csv)
      .def("to_json", &edisc::matrix_to_json)
      .def("to_svg", [](const edisc::TriangularMatrix& t, const std::string& scale, int cell_size) {
        edisc::RenderSpec spec;
        spec.cell_size = cell_size;
        return edisc::matrix_to_svg(t, scale_from(scale), spec);
      }, py::arg("scale"), py::arg("cell_size") = 4);

  m.def(
      "build_dm",
      [](const std::vector<double>& e, int n, const std::string& engine, unsigned threads) {
        const auto sorted = sorted_from(e);
        const edisc::UStatOrder order(n);
        if (engine == "reference") return edisc::TriangularMatrix(edisc::build_dm_reference(sorted, order));
        if (engine != "fast") throw edisc::ValidationError("engine must be 'fast' or 'reference'");
        py::gil_scoped_release release;
        return edisc::TriangularMatrix(edisc::build_dm_fast(sorted, order, {threads}));
      },
      py::arg("e"), py::arg("n") = 2, py::arg("engine") = "fast", py::arg("threads") = 1,
      "Discovery matrix of e (any order) under U_n.");
  m.def("dm_to_pmatrix", &edisc::dm_to_pmatrix, py::arg("dm"));
  m.def(
      "read_matrix_csv",
      [](const std::string& text, const std::string& kind) {
        if (kind != "evalue" && kind != "pvalue") throw edisc::ValidationError("kind must be 'evalue' or 'pvalue'");
        return edisc::parse_matrix_csv(text, kind == "evalue" ? edisc::MatrixKind::evalue
                                                              : edisc::MatrixKind::pvalue);
      },
      py::arg("text"), py::arg("kind") = "evalue");

  m.def(
      "gen_study",
      [](std::size_t K, std::size_t n_false, double alt_mean, std::uint64_t seed) {
        const auto s = edisc::gen_study({K, n_false, alt_mean, seed});
        py::dict out;
        out["x"] = s.x;
        out["e"] = s.e;
        out["p"] = s.p;
        out["is_null"] = std::vector<bool>(s.is_null.begin(), s.is_null.end());
        out["csv"] = edisc::study_to_csv(s);
        return out;
      },
      py::arg("K") = 200, py::arg("n_false") = 100, py::arg("alt_mean") = -3.0,
      py::arg("seed") = edisc::kDefaultSeed);
  m.def("e_from_obs", &edisc::e_from_obs, py::arg("x"), py::arg("alt_mean") = -3.0);
  m.def("p_from_obs", &edisc::p_from_obs, py::arg("x"));
  m.def("normal_quantile", &edisc::normal_quantile, py::arg("p"));

  m.def(
      "simes_p", [](const std::vector<double>& p) { return edisc::simes_p(p); }, py::arg("p"));
  m.def(
      "ct_discovery_pmatrix",
      [](const std::vector<double>& p) { return edisc::ct_discovery_pmatrix(edisc::PValueVec(p)); },
      py::arg("p"));

  m.def(
      "classify",
      [](double v, const std::string& scale) {
        const auto s = scale_from(scale);
        return s.bands[edisc::classify(v, s)].name;
      },
      py::arg("value"), py::arg("scale"));
  m.def(
      "compare_report",
      [](const edisc::TriangularMatrix& a, const edisc::TriangularMatrix& b, const std::string& scale) {
        return edisc::compare_report(a, b, scale_from(scale)).to_text();
      },
      py::arg("a"), py::arg("b"), py::arg("scale"));
}
