#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "susyspin/cli.hpp"
#include "susyspin/susylab.hpp"

namespace py = pybind11;
using namespace susyspin;

namespace {

SuperpotentialSpec make_w(const std::string& kind, double alpha) {
  if (kind == "zero") return SuperpotentialSpec::zero();
  if (kind == "tanh") return SuperpotentialSpec::tanh(alpha);
  throw std::invalid_argument("superpotential must be 'zero' or 'tanh'");
}

py::dict spectrum_dict(const SpectrumResult& s) {
  py::dict d;
  d["eigenvalues"] = s.eigenvalues;
  d["sector"] = to_string(s.sector);
  d["warnings"] = s.warnings;
  if (s.eigenvectors) d["eigenvectors"] = *s.eigenvectors;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Spin-1/2 supersymmetric quantum mechanics in a rotating magnetic field";

  py::enum_<Sector>(m, "Sector").value("Plus", Sector::Plus).value("Minus", Sector::Minus);
  py::enum_<SusyPhase>(m, "SusyPhase").value("Unbroken", SusyPhase::Unbroken).value("Broken", SusyPhase::Broken);

  py::class_<FieldConfig>(m, "FieldConfig")
      .def(py::init([](double b0, double k) { return FieldConfig{b0, k}; }), py::arg("b0"), py::arg("k"))
      .def_readwrite("b0", &FieldConfig::b0)
      .def_readwrite("k", &FieldConfig::k);

  m.def("spin_operators", [] {
    const auto s = make_spin_operators();
    return py::make_tuple(s.x, s.y, s.z);
  });
  m.def("dispersion", [](double q, const FieldConfig& f) {
    const auto e = dispersion(q, f);
    return py::make_tuple(e.e1, e.e2);
  }, py::arg("q"), py::arg("field"));
  m.def("band_spectrum", [](const FieldConfig& f, double q_min, double q_max, int steps) {
    const auto b = band_spectrum(f, q_min, q_max, steps);
    return py::make_tuple(b.q_values, b.e1, b.e2);
  }, py::arg("field"), py::arg("q_min"), py::arg("q_max"), py::arg("steps"));
  m.def("transformed_hamiltonian", &transformed_hamiltonian, py::arg("q"), py::arg("field"), py::arg("sector"));
  m.def("zero_mode_wavevector", &zero_mode_wavevector, py::arg("field"));
  m.def("zero_mode_spinor", &zero_mode_spinor, py::arg("q"), py::arg("field"), py::arg("sector"));
  m.def("susy_phase_free", &susy_phase_free, py::arg("field"));
  m.def("susy_phase_asymptotic", &susy_phase_asymptotic, py::arg("field"), py::arg("w0"));
  m.def("decay_rate", [](const FieldConfig& f) { return decay_rate(f).value; }, py::arg("field"));
  m.def("spin_lambda_eigenpairs", [](const FieldConfig& f) {
    py::list out;
    for (const auto& p : spin_lambda_eigenpairs(f)) out.append(py::make_tuple(p.lambda, p.chi));
    return out;
  }, py::arg("field"));
  m.def("breaking_threshold", &breaking_threshold, py::arg("k"), py::arg("w0") = 0.0);

  m.def("ring_spectra", [](const FieldConfig& f, int periods, int n, int count) {
    const auto ps = ring_spectra(f, periods, n, count);
    return py::make_tuple(spectrum_dict(ps.minus), spectrum_dict(ps.plus));
  }, py::arg("field"), py::arg("periods"), py::arg("n"), py::arg("count"));
  m.def("bound_spectra", [](const FieldConfig& f, const std::string& w, double alpha, double length, int n, int count) {
    const ModelSpec spec{f, make_w(w, alpha), Sector::Minus};
    const auto ps = bound_spectra(spec, length, n, count);
    return py::make_tuple(spectrum_dict(ps.minus), spectrum_dict(ps.plus));
  }, py::arg("field"), py::arg("w"), py::arg("alpha"), py::arg("length"), py::arg("n"), py::arg("count"));

  m.def("classify", [](const FieldConfig& f, const std::string& w, double alpha) {
    const SusyReport r = classify(ModelSpec{f, make_w(w, alpha), Sector::Minus});
    py::dict d;
    d["phase"] = to_string(r.phase);
    d["zero_modes_minus"] = r.zero_modes_minus;
    d["zero_modes_plus"] = r.zero_modes_plus;
    d["ground_energy_minus"] = r.ground_energy_minus;
    d["ground_energy_plus"] = r.ground_energy_plus;
    d["threshold_b0"] = r.threshold_b0;
    d["q0"] = r.q0;
    d["lambda"] = r.lambda.value;
    return d;
  }, py::arg("field"), py::arg("w") = "zero", py::arg("alpha") = 0.0);

  m.def("breaking_threshold_scan", [](double k, double lo, double hi, int steps, const std::string& w, double alpha) {
    const auto s = breaking_threshold_scan(k, lo, hi, steps, make_w(w, alpha));
    py::list rows;
    for (const auto& r : s.rows) rows.append(py::make_tuple(r.b0, to_string(r.phase), r.e_min));
    return py::make_tuple(s.threshold, rows);
  }, py::arg("k"), py::arg("lo"), py::arg("hi"), py::arg("steps"), py::arg("w") = "zero", py::arg("alpha") = 0.0);

  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return py::make_tuple(code, out.str(), err.str());
  }, py::arg("args"));
}
