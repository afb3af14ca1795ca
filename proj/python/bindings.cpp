#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "cli.hpp"
#include "confsphere/conformal.hpp"
#include "confsphere/extremal.hpp"
#include "confsphere/identities.hpp"

namespace py = pybind11;
using namespace confsphere;

namespace {

OperatorDescriptor make_descriptor(int n, int k, bool sigma2) { return sigma2 ? sigma2_descriptor(n) : gjms_descriptor(n, k); }

// Rationals cross the boundary as "p/q" text; the Python side wraps them in Fraction.
std::string rational_text(const Rational& q) { return to_string(q); }

SphereFunction parse_function(int n, const std::string& text) { return reduce(AmbientPoly::parse(n + 1, text)); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact and numeric checks for conformally covariant operators on round spheres";

  m.def("sphere_volume", &sphere_volume, py::arg("n"));
  m.def(
      "sharp_constant_text",
      [](int n, int k, bool sigma2) { return rational_text(sharp_constant(make_descriptor(n, k, sigma2))); },
      py::arg("n"), py::arg("k") = 1, py::arg("sigma2") = false);
  m.def(
      "gjms_eigenvalue_text", [](int l, int n, int k) { return rational_text(gjms_eigenvalue(l, GjmsOrder(n, k))); },
      py::arg("l"), py::arg("n"), py::arg("k"));

  m.def(
      "energy_text",
      [](const std::string& poly, int n, int k, bool sigma2) {
        const SphereFunction u = parse_function(n, poly);
        return rational_text(sigma2 ? sigma2_energy(u).coefficient : gjms_energy(u, GjmsOrder(n, k)).coefficient);
      },
      py::arg("poly"), py::arg("n"), py::arg("k") = 1, py::arg("sigma2") = false,
      "Exact energy of a polynomial in x0..xn, as a multiple of the sphere volume.");
  m.def(
      "check_commutator",
      [](const std::string& poly, int n, int k, bool sigma2) {
        const SphereFunction u = parse_function(n, poly);
        const IdentityReport r = sigma2 ? check_sigma2_commutator(u) : check_gjms_commutator(u, GjmsOrder(n, k));
        return r.verdict;
      },
      py::arg("poly"), py::arg("n"), py::arg("k") = 1, py::arg("sigma2") = false);

  py::class_<ZonalFunction>(m, "ZonalFunction")
      .def_static("constant", &ZonalFunction::constant, py::arg("n"), py::arg("c"))
      .def_static("polynomial", &ZonalFunction::polynomial, py::arg("n"), py::arg("coeffs"))
      .def_static("bubble", &ZonalFunction::bubble, py::arg("n"), py::arg("r"), py::arg("q"))
      .def_property_readonly("n", &ZonalFunction::dimension)
      .def("__call__", &ZonalFunction::evaluate, py::arg("t"))
      .def("to_json", [](const ZonalFunction& f) { return f.to_json().dump(); });

  m.def(
      "energy_zonal",
      [](const ZonalFunction& u, int k, bool sigma2, int nodes) {
        return energy_zonal(make_descriptor(u.dimension(), k, sigma2), u, JacobiQuadrature(u.dimension(), nodes));
      },
      py::arg("u"), py::arg("k") = 1, py::arg("sigma2") = false, py::arg("nodes") = 200);
  m.def(
      "deficit",
      [](const ZonalFunction& u, int k, bool sigma2, int nodes) {
        return deficit(u, make_descriptor(u.dimension(), k, sigma2), JacobiQuadrature(u.dimension(), nodes));
      },
      py::arg("u"), py::arg("k") = 1, py::arg("sigma2") = false, py::arg("nodes") = 200);

  m.def(
      "minimize_json",
      [](int n, int k, bool sigma2, int L, std::uint64_t seed, const std::string& init) {
        MinimizationOptions opt;
        opt.init = init;
        py::gil_scoped_release release;
        return minimize_quotient(make_descriptor(n, k, sigma2), L, seed, opt).to_json().dump();
      },
      py::arg("n"), py::arg("k") = 1, py::arg("sigma2") = false, py::arg("L") = 6, py::arg("seed") = 1,
      py::arg("init") = "random");

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code;
        {
          py::gil_scoped_release release;
          code = cli::run(args, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs a command-line subcommand in process; returns (exit code, stdout, stderr).");

  py::register_exception<std::invalid_argument>(m, "InvalidArgument", PyExc_ValueError);
}
