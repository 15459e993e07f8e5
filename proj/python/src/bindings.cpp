#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bincorr/entropy.hpp"
#include "bincorr/error.hpp"
#include "bincorr/gf2.hpp"
#include "bincorr/model.hpp"
#include "bincorr/model_json.hpp"
#include "bincorr/moments.hpp"
#include "bincorr/region.hpp"
#include "bincorr/tolerances.hpp"

namespace py = pybind11;
using namespace bincorr;

namespace {

BitMatrix matrix_from(const std::vector<std::string>& rows) {
  return BitMatrix::from_rows(std::span<const std::string>(rows));
}

std::vector<std::vector<double>> nested(const CovarianceMatrix& c) {
  std::vector<std::vector<double>> out;
  out.reserve(c.dim());
  for (std::size_t i = 0; i < c.dim(); ++i) out.push_back(c.row(i));
  return out;
}

py::dict points_dict(const CharacteristicPoints& p) {
  py::dict d;
  d["lambda_bal"] = p.lambda_bal;
  d["lambda_unb"] = p.lambda_unb;
  d["lambda_lim"] = p.lambda_lim;
  d["r"] = p.rate_r;
  return d;
}

}  // namespace

PYBIND11_MODULE(_bincorr, m) {
  m.doc() = "Correlated binary source models";

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<InvalidSpec>(m, "InvalidSpec", base.ptr());
  py::register_exception<DimensionMismatch>(m, "DimensionMismatch", base.ptr());
  py::register_exception<CapExceeded>(m, "CapExceeded", base.ptr());
  py::register_exception<Unsupported>(m, "Unsupported", base.ptr());
  py::register_exception<IoError>(m, "IoError", base.ptr());

  m.attr("DEFAULT_CAP") = kDefaultEnumerationCap;
  m.attr("DEFAULT_REGION_CAP") = kDefaultRegionCap;

  py::class_<ModelSpec>(m, "ModelSpec")
      .def_static("parallel", &ModelSpec::parallel, py::arg("rho"))
      .def_static("serial", &ModelSpec::serial, py::arg("rho"))
      .def_static("serial_constant", &ModelSpec::serial_constant, py::arg("n"), py::arg("rho"),
                  py::arg("first_rho") = 1.0)
      .def_static("mixed", &ModelSpec::mixed, py::arg("chains"))
      .def_static(
          "linear",
          [](const std::vector<std::string>& a, std::vector<double> rho) {
            return ModelSpec::linear(matrix_from(a), std::move(rho));
          },
          py::arg("A"), py::arg("rho"))
      .def_static("from_json", &model_from_json_text, py::arg("text"))
      .def("to_json", [](const ModelSpec& s) { return model_to_json(s).dump(); })
      .def_property_readonly("kind", [](const ModelSpec& s) { return std::string(to_string(s.kind())); })
      .def_property_readonly("n", &ModelSpec::n)
      .def_property_readonly("m", &ModelSpec::m)
      .def_property_readonly("total", &ModelSpec::total)
      .def_property_readonly("rho", [](const ModelSpec& s) {
        return std::vector<double>(s.rho().begin(), s.rho().end());
      })
      .def_property_readonly("uniform_marginals", &ModelSpec::uniform_marginals)
      .def("__eq__", &ModelSpec::operator==)
      .def("__repr__", [](const ModelSpec& s) { return "ModelSpec(" + model_to_json(s).dump() + ")"; });

  m.def("cascade_flip_prob", [](const std::vector<double>& r) { return cascade_flip_prob(r); },
        py::arg("rhos"));
  m.def("pmf", [](const ModelSpec& s, const std::string& x) { return pmf(s, BitVector::from_string(x)); },
        py::arg("spec"), py::arg("x"));
  m.def("pmf_table", &pmf_table, py::arg("spec"), py::arg("cap") = kDefaultEnumerationCap);
  m.def(
      "sample",
      [](const ModelSpec& s, std::uint64_t seed, std::size_t count) {
        std::vector<std::string> out;
        for (const auto& x : sample(s, seed, count)) out.push_back(x.to_string());
        return out;
      },
      py::arg("spec"), py::arg("seed"), py::arg("count"));

  m.def(
      "covariance_exact",
      [](const ModelSpec& s, std::size_t cap) { return nested(covariance_exact(s, cap)); },
      py::arg("spec"), py::arg("cap") = kDefaultEnumerationCap);
  m.def(
      "covariance_empirical",
      [](const ModelSpec& s, std::size_t samples, std::uint64_t seed) {
        return nested(covariance_empirical(s, samples, seed));
      },
      py::arg("spec"), py::arg("samples"), py::arg("seed"));

  m.def("binary_entropy", &binary_entropy, py::arg("p"));
  m.def("joint_entropy_exact", &joint_entropy_exact, py::arg("spec"),
        py::arg("cap") = kDefaultEnumerationCap);
  m.def("joint_entropy_closed", &joint_entropy_closed, py::arg("spec"));
  m.def(
      "entropy_bounds",
      [](const ModelSpec& s) {
        const auto b = s.kind() == ModelKind::kMixed ? entropy_bounds_mixed(s) : entropy_bounds_parallel(s);
        return py::make_tuple(b.lower, b.upper);
      },
      py::arg("spec"));
  m.def("asymptotic_rate", &asymptotic_rate, py::arg("spec"));
  m.def(
      "entropy_report",
      [](const ModelSpec& s, std::size_t cap) {
        const auto r = entropy_report(s, cap);
        py::dict d;
        d["exact"] = r.exact;
        d["closed_form"] = r.closed_form;
        d["lower_bound"] = r.lower_bound;
        d["upper_bound"] = r.upper_bound;
        d["rate"] = r.rate;
        d["asymptotic_rate"] = r.asymptotic_rate;
        d["epsilon"] = r.epsilon;
        return d;
      },
      py::arg("spec"), py::arg("cap") = kDefaultEnumerationCap);

  m.def("subset_conditional_entropy", &subset_conditional_entropy, py::arg("spec"),
        py::arg("subset"), py::arg("cap") = kDefaultEnumerationCap);
  m.def(
      "region_constraints",
      [](const ModelSpec& s, double r, std::size_t cap) {
        std::vector<std::pair<std::vector<std::size_t>, double>> out;
        for (const auto& c : region_constraints(s, r, cap)) out.emplace_back(source_indices(c.subset), c.bound);
        return out;
      },
      py::arg("spec"), py::arg("r") = 1.0, py::arg("cap") = kDefaultRegionCap);
  m.def(
      "membership",
      [](const ModelSpec& s, double r, const std::vector<double>& lambdas, std::size_t cap) {
        const auto res = membership(s, r, lambdas, cap);
        std::vector<std::vector<std::size_t>> violated;
        for (auto v : res.violated) violated.push_back(source_indices(v));
        return py::make_tuple(res.inside, violated);
      },
      py::arg("spec"), py::arg("r"), py::arg("lambdas"), py::arg("cap") = kDefaultRegionCap);
  m.def(
      "characteristic_points",
      [](const ModelSpec& s, double r, std::optional<std::size_t> idx, std::size_t cap) {
        return points_dict(characteristic_points(s, r, idx, cap));
      },
      py::arg("spec"), py::arg("r") = 1.0, py::arg("unbalanced_index") = py::none(),
      py::arg("cap") = kDefaultEnumerationCap);

  m.def("gf2_rank", [](const std::vector<std::string>& a) { return rank(matrix_from(a)); }, py::arg("A"));
  m.def("gf2_determinant", [](const std::vector<std::string>& a) { return determinant(matrix_from(a)); },
        py::arg("A"));
  m.def(
      "gf2_invert",
      [](const std::vector<std::string>& a) -> std::optional<std::vector<std::string>> {
        const auto inv = invert(matrix_from(a));
        if (!inv) return std::nullopt;
        return inv->to_strings();
      },
      py::arg("A"));
  m.def(
      "circulant_rule",
      [](std::size_t n, std::size_t d) {
        switch (circulant_rule(n, d)) {
          case CirculantVerdict::kSingularDividesN: return "singular_divides_n";
          case CirculantVerdict::kSingularEven: return "singular_even";
          case CirculantVerdict::kInvertible: return "invertible";
          default: return "not_covered";
        }
      },
      py::arg("n"), py::arg("d"));
  m.def("toeplitz_nonsingular_fraction", &toeplitz_nonsingular_fraction, py::arg("n"),
        py::arg("trials"), py::arg("seed") = 0);
}
