#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <utility>
#include <vector>

#include "conifold/mesh.hpp"
#include "conifold/moduli.hpp"
#include "conifold/run.hpp"
#include "conifold/scenario.hpp"
#include "conifold/spectrum.hpp"
#include "conifold/weights.hpp"

namespace py = pybind11;
using namespace conifold;

namespace {

using Entries = std::vector<std::pair<double, int>>;

Spectrum entries_to_spectrum(const Entries& entries, double cutoff) {
  std::vector<SpectrumEntry> converted;
  for (const auto& [e, mult] : entries) converted.push_back({e, mult});
  return make_explicit_spectrum(std::move(converted), cutoff);
}

py::dict spectrum_to_dict(const Spectrum& s) {
  py::list entries;
  for (const auto& e : s.entries)
    entries.append(py::make_tuple(e.eigenvalue, e.multiplicity));
  py::dict d;
  d["source"] = spectrum_source_name(s.source);
  d["cutoff"] = s.cutoff;
  d["entries"] = entries;
  return d;
}

py::dict py_sphere_spectrum(int dim, double cutoff) {
  return spectrum_to_dict(sphere_spectrum(dim, cutoff));
}

py::dict py_torus_spectrum(const std::vector<std::vector<double>>& basis,
                           double cutoff) {
  const size_t k = basis.size();
  Eigen::MatrixXd b(k, k);
  for (size_t r = 0; r < k; ++r) {
    if (basis[r].size() != k)
      fail(ErrorKind::InvalidInput, "torus basis must be a square matrix");
    for (size_t c = 0; c < k; ++c) b(r, c) = basis[r][c];
  }
  return spectrum_to_dict(torus_spectrum(b, cutoff));
}

py::dict py_mesh_spectrum(const std::string& path, double cutoff, double tol) {
  MeshSolveOptions opts;
  opts.tol = tol;
  return spectrum_to_dict(eigensolve(load_off(path), cutoff, opts).spectrum);
}

py::tuple py_roots(double eigenvalue, int m) {
  const RootPair r = roots_for_eigenvalue(eigenvalue, m);
  return py::make_tuple(r.plus, r.minus);
}

py::list py_exceptional_weights(const Entries& entries, double cutoff, int m,
                                double lo, double hi, bool include_lo,
                                bool include_hi) {
  ConeEnd end;
  end.spectrum = entries_to_spectrum(entries, cutoff);
  const ExceptionalWeightSet set =
      exceptional_set({end}, m, Window{lo, hi, include_lo, include_hi}, true);
  py::list out;
  for (const auto& w : set.per_end[0].weights)
    out.append(py::make_tuple(w.gamma, w.multiplicity));
  return out;
}

py::dict py_stability(int m, int sym_dim, const Entries& entries,
                      double cutoff) {
  ConeEnd end;
  end.kind = EndKind::CS;
  end.sym_dim = sym_dim;
  end.spectrum = entries_to_spectrum(entries, cutoff);
  const StabilityVerdict v = stability_check(end, m);
  py::list checks;
  for (const auto& c : v.checks)
    checks.append(py::make_tuple(c.gamma, c.expected, c.found));
  py::list extra;
  for (const auto& w : v.extra_weights)
    extra.append(py::make_tuple(w.gamma, w.multiplicity));
  py::dict d;
  d["stable"] = v.stable;
  d["checks"] = checks;
  d["extra_weights"] = extra;
  d["detail"] = v.detail;
  return d;
}

py::list py_expected_multiplicities(int m, int sym_dim) {
  py::list out;
  for (const auto& w : expected_stable_multiplicities(m, sym_dim))
    out.append(py::make_tuple(w.gamma, w.multiplicity));
  return out;
}

std::string py_run_scenario(const std::string& config_json,
                            const std::string& base_dir) {
  return render_machine(run(parse_config(config_json, "<python>", base_dir)));
}

void py_verify_report(const std::string& report_json,
                      const std::string& base_dir) {
  verify_machine_report(report_json, base_dir);
}

void py_check_config(const std::string& config_json,
                     const std::string& base_dir) {
  parse_config(config_json, "<python>", base_dir);
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
  mod.doc() =
      "Spectral dimension calculator for special Lagrangian conifold moduli";

  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      const std::string msg =
          std::string(error_kind_name(e.kind())) + ": " + e.what();
      if (e.kind() == ErrorKind::InvalidInput)
        PyErr_SetString(PyExc_ValueError, msg.c_str());
      else
        PyErr_SetString(PyExc_RuntimeError, msg.c_str());
    }
  });

  mod.def("sphere_spectrum", &py_sphere_spectrum, py::arg("dim"),
          py::arg("cutoff"),
          "Laplace spectrum of the round unit sphere S^dim up to cutoff.");
  mod.def("torus_spectrum", &py_torus_spectrum, py::arg("basis"),
          py::arg("cutoff"),
          "Laplace spectrum of the flat torus R^k / B Z^k (basis rows).");
  mod.def("mesh_spectrum", &py_mesh_spectrum, py::arg("path"),
          py::arg("cutoff"), py::arg("tol") = 1e-8,
          "FEM Laplace spectrum of a closed triangle mesh in OFF format.");
  mod.def("roots_for_eigenvalue", &py_roots, py::arg("eigenvalue"),
          py::arg("m"),
          "Homogeneity roots (plus, minus) of g (g + m - 2) = eigenvalue.");
  mod.def("exceptional_weights", &py_exceptional_weights, py::arg("entries"),
          py::arg("cutoff"), py::arg("m"), py::arg("lo"), py::arg("hi"),
          py::arg("include_lo") = true, py::arg("include_hi") = true,
          "Exceptional weights of a link spectrum over a weight window.");
  mod.def("stability_check", &py_stability, py::arg("m"), py::arg("sym_dim"),
          py::arg("entries"), py::arg("cutoff"),
          "Stability verdict for a cone from its link spectrum.");
  mod.def("expected_stable_multiplicities", &py_expected_multiplicities,
          py::arg("m"), py::arg("sym_dim"),
          "The multiplicity pattern a stable cone realises on [0, 2].");
  mod.def("slice_dim", &slice_dim, py::arg("m"), py::arg("sym_dim"),
          "Moduli slice of special Lagrangian cones through a fixed one.");
  mod.def("lagrangian_slice_dim", &lagrangian_slice_dim, py::arg("m"),
          py::arg("sym_dim"),
          "Slice dimension before the special-unitary reduction.");
  mod.def("obstruction_dim_stable", &obstruction_dim_stable, py::arg("m"),
          py::arg("sym_dims"),
          "Stable-case cokernel over all CS ends: sum of m^2 + 2m - sym.");
  mod.def("run_scenario", &py_run_scenario, py::arg("config_json"),
          py::arg("base_dir") = ".",
          "Run a scenario config and return the machine report as JSON.");
  mod.def("verify_report", &py_verify_report, py::arg("report_json"),
          py::arg("base_dir") = ".",
          "Recompute a machine report; raises when any value differs.");
  mod.def("check_config", &py_check_config, py::arg("config_json"),
          py::arg("base_dir") = ".",
          "Parse and validate a scenario config; raises on invalid input.");

  mod.attr("__version__") = "0.1.0";
}
