#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qht/qht.hpp"

namespace py = pybind11;
using namespace qht;

namespace {

HermitianOperator hermitian(const Matrix& m) { return HermitianOperator(m); }

PositiveFunctional functional(const Matrix& m) { return PositiveFunctional(HermitianOperator(m)); }

py::list atoms(const SpectralMeasure& mu) {
  py::list out;
  for (const Atom& a : mu.atoms()) out.append(py::make_tuple(a.location, a.weight));
  return out;
}

FiniteSystem system(const Matrix& h, const Matrix& omega, const std::optional<Matrix>& tri_basis) {
  return FiniteSystem(hermitian(h), functional(omega), tri_basis);
}

EbbSpec ebb_spec(const Matrix& h_sample, const std::vector<Vector>& chi, double lambda,
                 const std::vector<double>& betas, const std::vector<double>& mus) {
  EbbSpec spec;
  spec.h_sample = hermitian(h_sample);
  spec.chi = chi;
  spec.lambda = lambda;
  if (!mus.empty() && mus.size() != betas.size()) throw ValidationError("betas and mus differ in length");
  for (std::size_t j = 0; j < betas.size(); ++j) spec.leads.push_back({betas[j], mus.empty() ? 0.0 : mus[j]});
  spec.validate();
  return spec;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Hypothesis testing and entropic fluctuations for finite quantum systems";
  m.attr("__version__") = io::version();

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  m.def("relative_entropy", [](const Matrix& nu, const Matrix& omega) {
    return relative_entropy(functional(nu), functional(omega));
  }, py::arg("nu"), py::arg("omega"));
  m.def("renyi_relative_entropy", [](const Matrix& nu, const Matrix& omega, double s) {
    return renyi_relative_entropy(functional(nu), functional(omega), s);
  }, py::arg("nu"), py::arg("omega"), py::arg("s"));
  m.def("modular_spectral_measure", [](const Matrix& nu, const Matrix& omega) {
    return atoms(modular_spectral_measure(functional(nu), functional(omega)));
  }, py::arg("nu"), py::arg("omega"), "Atoms (location, weight) of the relative modular spectral measure.");

  m.def("optimal_test", [](const Matrix& nu, const Matrix& omega) {
    const OptimalTest t = optimal_test(functional(nu), functional(omega));
    return py::make_tuple(Matrix(t.test.op().matrix()), t.min_error);
  }, py::arg("nu"), py::arg("omega"), "Neyman-Pearson projection and the minimal total error.");
  m.def("error_probability", [](const Matrix& nu, const Matrix& omega, const Matrix& test) {
    const ErrorProbabilities e = error_probability(functional(nu), functional(omega), hermitian(test));
    return py::make_tuple(e.type1, e.type2);
  }, py::arg("nu"), py::arg("omega"), py::arg("test"));
  m.def("chernoff_upper_bound", [](const Matrix& nu, const Matrix& omega, double s) {
    return chernoff_upper_bound(functional(nu), functional(omega), s);
  }, py::arg("nu"), py::arg("omega"), py::arg("s"));
  m.def("modular_lower_bound", [](const Matrix& nu, const Matrix& omega) {
    return modular_lower_bound(functional(nu), functional(omega));
  }, py::arg("nu"), py::arg("omega"));

  py::class_<EntropicFunction>(m, "EntropicFunction")
      .def(py::init<double, double, std::vector<double>, double>(), py::arg("a"), py::arg("b"), py::arg("values"),
           py::arg("convex_tol") = 1e-8)
      .def_property_readonly("grid", &EntropicFunction::grid)
      .def_property_readonly("values", &EntropicFunction::values);
  m.def("legendre", [](const EntropicFunction& e, const std::vector<double>& theta) {
    return legendre(e, theta).phi();
  }, py::arg("e"), py::arg("theta"), "Rate function values on the theta grid.");
  m.def("chernoff_exponent", [](const EntropicFunction& e) {
    const ChernoffResult r = chernoff_exponent(e);
    return py::make_tuple(r.exponent, r.argmin);
  }, py::arg("e"));
  m.def("hoeffding_exponent", &hoeffding_exponent, py::arg("e"), py::arg("r"));
  m.def("stein_exponent", &stein_exponent, py::arg("e"));

  m.def("fcs_distribution", [](const Matrix& h, const Matrix& omega, double t) {
    return atoms(fcs_distribution(system(h, omega, std::nullopt), t).measure);
  }, py::arg("h"), py::arg("omega"), py::arg("t"));
  m.def("renyi_functional", [](const Matrix& h, const Matrix& omega, double t, double s) {
    return renyi_functional(system(h, omega, std::nullopt), t, s);
  }, py::arg("h"), py::arg("omega"), py::arg("t"), py::arg("s"));
  m.def("arrow_min_error", [](const Matrix& h, const Matrix& omega, const Matrix& tri_basis, double t) {
    const ArrowPoint p = arrow_min_error(system(h, omega, tri_basis), t);
    return py::dict(py::arg("min_error") = p.min_error, py::arg("exponent") = p.exponent,
                    py::arg("lower_rate") = p.lower_rate, py::arg("renyi_rate") = p.renyi_rate);
  }, py::arg("h"), py::arg("omega"), py::arg("tri_basis"), py::arg("t"));

  m.def("quasifree_renyi", [](const Matrix& a, const Matrix& b, double s) {
    return quasifree_renyi(hermitian(a), hermitian(b), s);
  }, py::arg("a"), py::arg("b"), py::arg("s"));

  py::class_<XySpec>(m, "XySpec")
      .def(py::init<>())
      .def_readwrite("J", &XySpec::J)
      .def_readwrite("lam", &XySpec::lambda)
      .def_readwrite("beta_left", &XySpec::beta_left)
      .def_readwrite("beta_right", &XySpec::beta_right)
      .def_readwrite("beta", &XySpec::beta)
      .def_readwrite("n", &XySpec::n)
      .def_readwrite("m", &XySpec::m);
  m.def("xy_e", &xy_e, py::arg("spec"), py::arg("s"), py::arg("quad_tol") = 1e-10);
  m.def("xy_sigma", &xy_sigma, py::arg("spec"), py::arg("quad_tol") = 1e-10);
  m.def("xy_finite_renyi", &xy_finite_renyi, py::arg("spec"), py::arg("t"), py::arg("s"));

  m.def("ebb_e", [](const Matrix& h, const std::vector<Vector>& chi, double lambda, const std::vector<double>& betas,
                    const std::vector<double>& mus, double s, double quad_tol) {
    return ebb_e(ebb_spec(h, chi, lambda, betas, mus), s, quad_tol);
  }, py::arg("h_sample"), py::arg("chi"), py::arg("lam"), py::arg("betas"), py::arg("mus") = std::vector<double>{},
     py::arg("s"), py::arg("quad_tol") = 1e-8);
  m.def("landauer", [](const Matrix& h, const std::vector<Vector>& chi, double lambda, const std::vector<double>& betas,
                       const std::vector<double>& mus, double quad_tol) {
    const LandauerResult r = landauer(ebb_spec(h, chi, lambda, betas, mus), quad_tol);
    return py::dict(py::arg("sigma_plus") = r.sigma_plus, py::arg("heat_flux") = r.heat_flux,
                    py::arg("charge_flux") = r.charge_flux);
  }, py::arg("h_sample"), py::arg("chi"), py::arg("lam"), py::arg("betas"), py::arg("mus") = std::vector<double>{},
     py::arg("quad_tol") = 1e-8);

  m.def("spin_fermion_sigma2", &spin_fermion_sigma2, py::arg("norms2"), py::arg("betas"));
}
