// Python module _aqlab. Structured results cross the boundary as JSON text
// and are decoded by the aqlab package, so the schemas match the CLI.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "aqlab/audit.hpp"
#include "aqlab/barcof.hpp"
#include "aqlab/error.hpp"
#include "aqlab/exactfield.hpp"
#include "aqlab/series.hpp"
#include "aqlab/simplicial.hpp"
#include "aqlab/symalg.hpp"

namespace py = pybind11;
using namespace aqlab;

namespace {

Matrix to_matrix(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::vector<Scalar>> dense;
  for (const auto& r : rows) {
    std::vector<Scalar> row;
    for (const auto& e : r) {
      try {
        Scalar s(e);
        s.canonicalize();
        row.push_back(s);
      } catch (const std::invalid_argument&) {
        throw InvalidInput("not a rational number: '" + e + "'");
      }
    }
    if (!dense.empty() && row.size() != dense.front().size()) throw InvalidInput("ragged matrix");
    dense.push_back(std::move(row));
  }
  return Matrix::from_dense(dense, dense.empty() ? 0 : dense.front().size());
}

std::string dims_json(const SimplicialVectorSpace& v) {
  auto h = homotopy_dims(v);
  return nlohmann::json{{"dims", h.dims.values}, {"certified_degree", h.certified_degree}}.dump();
}

}  // namespace

PYBIND11_MODULE(_aqlab, m) {
  m.doc() = "Exact homotopy computations for simplicial commutative algebras over a field";

  // Translators run newest first, so subclasses are registered after Error.
  auto& error = py::register_exception<Error>(m, "Error");
  py::register_exception<InvalidInput>(m, "InvalidInput", error.ptr());
  py::register_exception<Inconclusive>(m, "Inconclusive", error.ptr());
  py::register_exception<InvariantViolation>(m, "InvariantViolation", error.ptr());

  m.def(
      "rank",
      [](const std::vector<std::vector<std::string>>& rows, std::uint32_t p) {
        FieldSpec f(p);
        return rank(reduce_matrix(to_matrix(rows), f), f);
      },
      py::arg("rows"), py::arg("characteristic"), "Rank of a matrix of rationals (as strings) over Q or F_p.");

  m.def(
      "eilenberg_maclane_json",
      [](std::uint32_t p, std::size_t q, int n, int truncation, bool dump) {
        auto v = eilenberg_maclane(FieldSpec(p), q, n, truncation);
        return dump ? to_json(v).dump() : dims_json(v);
      },
      py::arg("characteristic"), py::arg("q"), py::arg("n"), py::arg("truncation"), py::arg("dump") = false);

  m.def(
      "homotopy_json",
      [](const std::string& text) {
        nlohmann::json j;
        try {
          j = nlohmann::json::parse(text);
        } catch (const nlohmann::json::exception& e) {
          throw InvalidInput(std::string("malformed JSON: ") + e.what());
        }
        return dims_json(simplicial_from_json(j));
      },
      py::arg("text"));

  m.def(
      "sphere_homotopy_json",
      [](std::uint32_t p, std::size_t q, int n, int truncation, int max_weight) {
        return to_json(sphere_homotopy(FieldSpec(p), q, n, truncation, max_weight)).dump();
      },
      py::arg("characteristic"), py::arg("q"), py::arg("n"), py::arg("truncation"), py::arg("max_weight"));

  m.def(
      "sphere_series",
      [](std::uint32_t p, std::size_t q, int n, int order, int max_weight) {
        if (p == 0) return sphere_series_char0(q, n, order).coeffs();
        return sphere_series_charp(q, n, p, order, max_weight).series.coeffs();
      },
      py::arg("characteristic"), py::arg("q"), py::arg("n"), py::arg("order"), py::arg("max_weight") = 4);

  m.def(
      "phi",
      [](const std::vector<std::uint64_t>& coeffs, std::uint32_t p, double t, int block, double tol) {
        auto v = phi_eval(TruncatedSeries(coeffs), p, t, block, tol);
        return py::make_tuple(v.value, v.upper_proxy, v.stabilized);
      },
      py::arg("coeffs"), py::arg("p"), py::arg("t"), py::arg("block") = 1, py::arg("tol") = 1e-9,
      "(lower bound, upper proxy, stabilized) of the phi transform of a truncated series.");

  m.def(
      "a_rs_tables_json",
      [](int r, int s, int truncation, std::optional<int> w, std::optional<int> n) {
        return to_json(a_rs_tables(r, s, truncation, w, n)).dump();
      },
      py::arg("r"), py::arg("s"), py::arg("truncation"), py::arg("max_weight") = std::nullopt,
      py::arg("bar_bound") = std::nullopt);

  m.def(
      "serre_audit_json",
      [](std::uint32_t p, const std::map<int, std::size_t>& dims, std::optional<std::uint64_t> pi_bound,
         const std::string& mode) {
        AuditOptions o;
        if (mode == "empirical")
          o.mode = AuditMode::kEmpirical;
        else if (mode != "asymptotic")
          throw InvalidInput("mode must be asymptotic or empirical");
        return to_json(serre_audit(EnvelopeProfile(FieldSpec(p), dims, pi_bound), o)).dump();
      },
      py::arg("characteristic"), py::arg("dims"), py::arg("pi_bound"), py::arg("mode") = "asymptotic");

  m.def(
      "rational_check_json",
      [](const std::map<int, std::size_t>& dims, bool pi_finite) {
        return to_json(rational_check(EnvelopeProfile(FieldSpec(0), dims, std::nullopt), pi_finite)).dump();
      },
      py::arg("dims"), py::arg("pi_finite"));
}
