// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit status if
// any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "qht/qht.hpp"
#include "support/oracles.hpp"

using namespace qht;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

/// Tracks the worst value of a checked quantity against its tolerance.
class Check {
 public:
  Check(std::string name, double tol) : name_(std::move(name)), tol_(tol) {}
  void deviation(double d) {
    if (!(d <= tol_)) ok_ = false;
    if (!(d <= worst_)) worst_ = d;
  }
  void lower_gap(double g) { deviation(-g); }
  bool ok() const { return ok_; }
  std::string text() const {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s worst %.3g (tol %.0e)", name_.c_str(), worst_, tol_);
    return buf;
  }

 private:
  std::string name_;
  double tol_;
  double worst_ = -std::numeric_limits<double>::infinity();
  bool ok_ = true;
};

Outcome combine(std::initializer_list<const Check*> checks, const std::string& extra = {}) {
  Outcome o;
  for (const Check* c : checks) {
    o.pass = o.pass && c->ok();
    if (!o.detail.empty()) o.detail += "; ";
    o.detail += c->text();
  }
  if (!extra.empty()) o.detail += "; " + extra;
  return o;
}

std::vector<double> grid(double a, double b, int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = i + 1 == n ? b : a + (b - a) * i / (n - 1);
  return v;
}

const std::vector<double> kTenths = grid(0.0, 1.0, 11);

HermitianOperator with_spectrum(Rng& rng, const RealVector& values, const Matrix& u) {
  (void)rng;
  return HermitianOperator::from_eigensystem(values, u);
}

// ---------------------------------------------------------------------------

Outcome trace_inequality() {
  Rng rng(101);
  Check gap("gap", 1e-10);
  const auto start = std::chrono::steady_clock::now();
  for (int trial = 0; trial < 1000; ++trial) {
    const Index n = 2 + trial % 7;
    const PositiveFunctional a(random_positive(rng, n));
    const PositiveFunctional b(random_positive(rng, n));
    for (double s : kTenths) gap.lower_gap(trace_inequality_gap(a, b, s));
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  Outcome o = combine({&gap}, "runtime " + std::to_string(secs).substr(0, 5) + " s (limit 10 s)");
  o.pass = o.pass && secs <= 10.0;
  return o;
}

Outcome neyman_pearson() {
  Rng rng(102);
  Check enumeration("vs enumeration", 1e-11);
  Check closed("vs closed form", 1e-11);
  for (int trial = 0; trial < 200; ++trial) {
    const Index n = 2 + trial % 11;
    RealVector a(n), b(n);
    for (Index i = 0; i < n; ++i) {
      a(i) = rng.uniform(0.01, 1.0);
      b(i) = rng.uniform(0.01, 1.0);
    }
    if (trial % 2 == 0) {
      a /= a.sum();
      b /= b.sum();
    }
    const Matrix u = random_unitary(rng, n);
    const PositiveFunctional nu(with_spectrum(rng, a, u));
    const PositiveFunctional omega(with_spectrum(rng, b, u));
    const OptimalTest opt = optimal_test(nu, omega);
    const std::vector<double> av(a.data(), a.data() + n), bv(b.data(), b.data() + n);
    enumeration.deviation(std::abs(opt.min_error - oracle::commuting_min_error(av, bv)));
    const double formula = 0.5 * (a.sum() + b.sum() - (a - b).cwiseAbs().sum());
    closed.deviation(std::abs(opt.min_error - formula));
    const ErrorProbabilities achieved = error_probability(nu, omega, opt.test);
    closed.deviation(std::abs(achieved.total() - formula));
  }
  return combine({&enumeration, &closed});
}

Outcome bound_sandwich() {
  Rng rng(103);
  Check lower("lower - D", 1e-12);
  Check upper("D - upper", 1e-12);
  for (int trial = 0; trial < 500; ++trial) {
    const Index n = 2 + trial % 7;
    const PositiveFunctional nu(random_density(rng, n));
    const PositiveFunctional omega(random_density(rng, n));
    const double d = optimal_test(nu, omega).min_error;
    const auto f = [&](double s) { return chernoff_upper_bound(nu, omega, s); };
    double best = golden_section_minimize(f, 0.0, 1.0).value;
    for (double s : grid(0.0, 1.0, 21)) best = std::min(best, f(s));
    lower.deviation(modular_lower_bound(nu, omega) - d);
    upper.deviation(d - best);
  }
  return combine({&lower, &upper});
}

Outcome modular_laplace() {
  Rng rng(104);
  Check rel("relative", 1e-10);
  for (int trial = 0; trial < 200; ++trial) {
    const Index n = 2 + trial % 7;
    const PositiveFunctional nu(random_density(rng, n));
    const PositiveFunctional omega(random_density(rng, n));
    const SpectralMeasure mu = modular_spectral_measure(nu, omega);
    for (double s : kTenths) {
      const double tr = std::exp(oracle::renyi(nu.op().matrix(), omega.op().matrix(), s));
      rel.deviation(std::abs(mu.laplace(s) - tr) / tr);
    }
  }
  return combine({&rel});
}

Outcome monotonicity() {
  Rng rng(105);
  Check gap("gap", 1e-10);
  for (int trial = 0; trial < 500; ++trial) {
    const Index n = 2 + trial % 7;
    const HermitianOperator nu2 = random_positive(rng, n);
    const HermitianOperator nu1 = nu2 + random_positive(rng, n);
    const HermitianOperator om2 = random_positive(rng, n);
    const HermitianOperator om1 = om2 + random_positive(rng, n);
    const PositiveFunctional a(nu1), b(nu2), c(om1), d(om2);
    for (double s : kTenths) gap.lower_gap(monotonicity_gap(a, b, c, d, s));
  }
  return combine({&gap});
}

Outcome fcs_identities() {
  Rng rng(106);
  Check mass("mass", 1e-10);
  Check modular("modular atoms", 1e-9);
  Check moments("moments", 1e-10);
  Check reflection("reflection", 1e-10);
  Check balance("balance", 1e-10);
  Check positivity("positivity", 1e-10);
  for (int trial = 0; trial < 40; ++trial) {
    const Index n = 4 + trial % 5;
    const FiniteSystem sys(random_hermitian(rng, n), PositiveFunctional(random_density(rng, n)));
    const PositiveFunctional& omega = sys.state();
    for (double t : {0.5, 1.0, 2.0}) {
      const FcsDistribution p = fcs_distribution(sys, t);
      mass.deviation(std::max(std::abs(p.measure.mass() - 1.0), std::abs(p.mass_deviation)));

      const SpectralMeasure m = modular_spectral_measure(evolve(sys, -t), omega).scaled(1.0 / t);
      if (m.size() != p.measure.size()) {
        modular.deviation(kInf);
      } else {
        for (std::size_t i = 0; i < m.size(); ++i)
          modular.deviation(std::max(std::abs(m.atoms()[i].location - p.measure.atoms()[i].location),
                                     std::abs(m.atoms()[i].weight - p.measure.atoms()[i].weight)));
      }

      // moments of Sigma^t = (tau^t(S) - S) / t with S = -log omega from an independent matrix logarithm
      const Matrix u = oracle::Matrix(-Complex(0, t) * sys.hamiltonian().matrix()).exp();
      const Matrix s_op = -omega.op().matrix().log();
      const Matrix sigma_t = (u.adjoint() * s_op * u - s_op) / t;
      const double m1 = (omega.op().matrix() * sigma_t).trace().real();
      const double m2 = (omega.op().matrix() * sigma_t * sigma_t).trace().real();
      moments.deviation(std::abs(p.measure.mean() - m1));
      moments.deviation(std::abs(p.measure.variance() - (m2 - m1 * m1)) / std::max(1.0, m2));

      const SpectralMeasure back = modular_spectral_measure(evolve(sys, -t), omega);
      const SpectralMeasure fwd = modular_spectral_measure(evolve(sys, t), omega);
      if (back.size() != fwd.size()) {
        reflection.deviation(kInf);
      } else {
        const std::size_t k = back.size();
        for (std::size_t i = 0; i < k; ++i) {
          const Atom& b = back.atoms()[i];
          const Atom& f = fwd.atoms()[k - 1 - i];
          reflection.deviation(std::abs(b.location + f.location) / std::max(1.0, std::abs(b.location)));
          reflection.deviation(std::abs(b.weight - std::exp(b.location) * f.weight));
        }
      }

      // omega(S_t) - omega(S) = int_0^t omega(tau^u sigma) du, and it is a relative entropy
      const double production = t * mean_entropy_production(sys, t);
      const double integral = expectation_integral(sys, entropy_production_observable(sys), t, 1e-12);
      balance.deviation(std::abs(production - integral));
      const Matrix omega_minus_t = u.adjoint() * omega.op().matrix() * u;
      const double rel = (omega.op().matrix() * (omega.op().matrix().log() - omega_minus_t.log())).trace().real();
      balance.deviation(std::abs(production - rel));
      positivity.lower_gap(production);
    }
  }
  return combine({&mass, &modular, &moments, &reflection, &balance, &positivity});
}

Outcome evans_searles() {
  Rng rng(107);
  Check sym("e_t(s) - e_t(1-s)", 1e-9);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = 2 + trial % 7;
    const FiniteSystem tri(random_real_symmetric(rng, n), PositiveFunctional(random_real_density(rng, n)),
                           Matrix::Identity(n, n));
    for (double t : {0.5, 1.0, 2.0})
      for (double s : kTenths) sym.deviation(std::abs(renyi_functional(tri, t, s) - renyi_functional(tri, t, 1 - s)));
  }
  return combine({&sym});
}

Outcome legendre_machinery() {
  const std::vector<std::function<double(double)>> functions{
      [](double s) { return s * (s - 1); },
      [](double s) { return std::log(std::cosh(2 * (s - 0.5)) / std::cosh(1.0)); },
      [](double s) { return std::log(std::pow(0.2, s) * std::pow(0.6, 1 - s) + std::pow(0.8, s) * std::pow(0.4, 1 - s)); },
  };
  Check young("Young", 1e-12);
  Check involution("double transform / (2 h L)", 1.0);
  Check stein("psi(0) + D-e(1)", 1e-6);
  for (const auto& fn : functions) {
    const EntropicFunction e = EntropicFunction::sample(0.0, 1.0, 400, fn);
    const double left = (e.value(1) - e.value(0)) / e.h();
    const double right = (e.value(e.n()) - e.value(e.n() - 1)) / e.h();
    const std::vector<double> theta = grid(left - 1.0, right + 1.0, 801);
    const double h = theta[1] - theta[0];
    const RateFunction phi = legendre(e, theta);
    for (std::size_t j = 0; j < theta.size(); ++j)
      for (int i = 0; i <= e.n(); ++i) young.deviation(theta[j] * e.s(i) - e.value(i) - phi.phi()[j]);
    const double lipschitz = e.b() - e.a();
    for (int i = 0; i <= e.n(); ++i)
      involution.deviation(std::abs(inverse_legendre(phi, e.s(i)) - e.value(i)) / (2 * h * lipschitz));
    const double d_minus = (e.value(e.n()) - e.value(e.n() - 1)) / e.h();
    stein.deviation(std::abs(psi(e, 0.0) + d_minus));
  }
  Check parabola("s(s-1) rate", 1e-4);
  const EntropicFunction e = EntropicFunction::sample(0.0, 1.0, 512, [](double s) { return s * (s - 1); });
  const std::vector<double> theta = grid(-1.0, 1.0, 401);
  const RateFunction phi = legendre(e, theta);
  for (std::size_t j = 0; j < theta.size(); ++j)
    parabola.deviation(std::abs(phi.phi()[j] - 0.25 * (theta[j] + 1) * (theta[j] + 1)));
  return combine({&young, &involution, &stein, &parabola});
}

Outcome quasifree_fock() {
  Rng rng(109);
  Check rel("relative", 1e-9);
  for (int trial = 0; trial < 100; ++trial) {
    const Index d = 2 + trial % 5;
    RealVector xa(d), xb(d);
    for (Index i = 0; i < d; ++i) {
      xa(i) = rng.uniform(0.02, 0.98);
      xb(i) = rng.uniform(0.02, 0.98);
    }
    const HermitianOperator a = HermitianOperator::from_eigensystem(xa, random_unitary(rng, d));
    const HermitianOperator b = HermitianOperator::from_eigensystem(xb, random_unitary(rng, d));
    const Matrix rho_a = oracle::fock_density(a.matrix());
    const Matrix rho_b = oracle::fock_density(b.matrix());
    const QuasiFreePair pair(a, b);
    for (double s : kTenths) {
      const double tr = std::exp(oracle::renyi(rho_a, rho_b, s));
      rel.deviation(std::abs(std::exp(pair.renyi(s)) - tr) / tr);
    }
  }
  return combine({&rel});
}

Outcome xy_chain() {
  const auto start = std::chrono::steady_clock::now();
  const double tol = 1e-10;
  Check equilibrium("equal beta", 1e-12);
  Check ends("e(0), e(1)", tol);
  Check sym("e(s) - e(1-s)", tol);
  Check derivative("sigma - e'(1)", 1e-6);
  Check positive("sigma > 0 off equilibrium", 0.0);
  std::vector<XySpec> specs(3);
  specs[1].J = 1.5;
  specs[1].lambda = 0.3;
  specs[2].beta_left = 0.5;
  specs[2].beta_right = 3.0;
  specs[2].lambda = -0.4;
  for (const XySpec& spec : specs) {
    XySpec eq = spec;
    eq.beta_right = eq.beta_left;
    for (double s : kTenths) equilibrium.deviation(std::abs(xy_e(eq, s, tol)));
    equilibrium.deviation(std::abs(xy_sigma(eq, tol)));
    ends.deviation(std::max(std::abs(xy_e(spec, 0.0, tol)), std::abs(xy_e(spec, 1.0, tol))));
    for (double s : kTenths) sym.deviation(std::abs(xy_e(spec, s, tol) - xy_e(spec, 1 - s, tol)));
    const double h = 1e-4;
    const double fd = (xy_e(spec, 1 + h, 1e-13) - xy_e(spec, 1 - h, 1e-13)) / (2 * h);
    derivative.deviation(std::abs(xy_sigma(spec, tol) - fd));
    positive.deviation(xy_sigma(spec, tol) > 1e-6 ? 0.0 : 1.0);
  }
  XySpec spec;
  const double closed = xy_e(spec, 0.5);
  std::vector<double> deviation;
  for (int m : {128, 256, 512}) {
    spec.m = m;
    const double t = m / 4.0;
    deviation.push_back(std::abs(xy_finite_renyi(spec, t, 0.5) / t - closed));
  }
  const bool improving = deviation[1] < deviation[0] && deviation[2] < deviation[1];
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  char buf[200];
  std::snprintf(buf, sizeof buf, "finite-chain deviation %.3g, %.3g, %.3g (final tol 5e-2); runtime %.1f s (limit 120 s)",
                deviation[0], deviation[1], deviation[2], secs);
  Outcome o = combine({&equilibrium, &ends, &sym, &derivative, &positive}, buf);
  o.pass = o.pass && improving && deviation[2] <= 5e-2 && secs <= 120.0;
  return o;
}

EbbSpec random_ebb(Rng& rng, Index dim, std::size_t leads, bool tri) {
  EbbSpec spec;
  spec.h_sample = tri ? random_real_symmetric(rng, dim) : random_hermitian(rng, dim);
  spec.lambda = rng.uniform(0.2, 0.6);
  for (std::size_t j = 0; j < leads; ++j) {
    Vector c(dim);
    for (Index i = 0; i < dim; ++i) c(i) = tri ? Complex(rng.normal(), 0.0) : Complex(rng.normal(), rng.normal());
    spec.chi.push_back(c.normalized());
    spec.leads.push_back({rng.uniform(0.5, 3.0), rng.uniform(-0.3, 0.3)});
  }
  return spec;
}

Outcome ebb() {
  Rng rng(111);
  const double tol = 1e-8;
  Check trivial("s = 1", 1e-14);
  Check equal("equal reservoirs", 10 * tol);
  Check conservation("flux conservation", 10 * tol);
  Check unitary("unitarity", 1e-8);
  Check derivative("sigma - e'(1)", 1e-5);
  Check tri_sym("TRI e(s) - e(1-s)", 10 * tol);
  for (int trial = 0; trial < 8; ++trial) {
    const Index dim = 1 + trial % 4;
    const std::size_t leads = 2 + static_cast<std::size_t>(trial % 2);
    const bool tri = trial % 2 == 0;
    EbbSpec spec = random_ebb(rng, dim, leads, tri);

    const ScatteringFn identity = [leads](double) -> Matrix {
      return Matrix::Identity(static_cast<Index>(leads), static_cast<Index>(leads));
    };
    for (double s : {0.25, 0.5, 0.75}) trivial.deviation(std::abs(ebb_e(spec, s, identity, tol)));

    for (int i = 1; i <= 200; ++i) {
      const Matrix s = ebb_scattering(spec, std::numbers::pi * i / 201.0);
      unitary.deviation((s * s.adjoint() - Matrix::Identity(s.rows(), s.rows())).norm());
    }

    const LandauerResult lb = landauer(spec, tol);
    double heat = 0.0, charge = 0.0;
    for (std::size_t j = 0; j < leads; ++j) {
      heat += lb.heat_flux[j];
      charge += lb.charge_flux[j];
    }
    conservation.deviation(std::max(std::abs(heat), std::abs(charge)));
    const double h = 1e-4;
    const double fd = (ebb_e(spec, 1 + h, 1e-12) - ebb_e(spec, 1 - h, 1e-12)) / (2 * h);
    derivative.deviation(std::abs(lb.sigma_plus - fd));

    if (tri)
      for (double s : {0.1, 0.25, 0.4}) tri_sym.deviation(std::abs(ebb_e(spec, s, tol) - ebb_e(spec, 1 - s, tol)));

    EbbSpec eq = spec;
    for (Lead& l : eq.leads) l = spec.leads.front();
    for (double s : {0.25, 0.5, 0.75}) equal.deviation(std::abs(ebb_e(eq, s, tol)));
    const LandauerResult leq = landauer(eq, tol);
    equal.deviation(std::abs(leq.sigma_plus));
    double heat_eq = 0.0;
    for (double f : leq.heat_flux) heat_eq += f;
    conservation.deviation(std::abs(heat_eq));
  }
  return combine({&trivial, &equal, &conservation, &unitary, &derivative, &tri_sym});
}

Matrix pauli_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Matrix pauli_z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

Outcome arrow_of_time() {
  Check unitary_invariance("D(w_t, w_-t) - D(w_2t, w)", 1e-10);
  Check lower("lower rate - exponent", 1e-12);
  Check upper("exponent - upper rate", 1e-12);
  std::vector<FiniteSystem> systems;
  const HermitianOperator x(pauli_x()), z(pauli_z());
  {
    OpenSystemSpec one{0.5 * z, {}, {}};
    one.reservoirs.push_back({0.8 * z, HermitianOperator::zero(2), 1.2, 0.0});
    one.couplings.push_back(0.4 * kron(x, x));
    systems.push_back(build_open_system(one).system);
  }
  {
    OpenSystemSpec two{0.5 * z, {}, {}};
    RealVector occ(2);
    occ << 1.0, 0.0;
    two.reservoirs.push_back({0.7 * z, HermitianOperator::diagonal(occ), 0.5, 0.1});
    two.reservoirs.push_back({1.1 * z, HermitianOperator::diagonal(occ), 2.0, -0.2});
    two.couplings.push_back(0.3 * kron(x, x));
    two.couplings.push_back(0.25 * kron(x, x) + 0.1 * kron(z, x));
    systems.push_back(build_open_system(two).system);
  }
  Rng rng(112);
  for (int i = 0; i < 4; ++i) {
    const Index n = 3 + i;
    systems.emplace_back(random_real_symmetric(rng, n), PositiveFunctional(random_real_density(rng, n)),
                         Matrix::Identity(n, n));
  }
  for (const FiniteSystem& sys : systems)
    for (const ArrowPoint& p : arrow_exponent_estimate(sys, {0.25, 0.5, 1.0, 2.0, 4.0})) {
      unitary_invariance.deviation(std::abs(p.min_error - p.min_error_shifted));
      lower.deviation(p.lower_rate - p.exponent);
      upper.deviation(p.exponent - std::log(p.upper_bound) / (2 * p.t));
    }
  return combine({&unitary_invariance, &lower, &upper});
}

Outcome spin_fermion() {
  Check equal("equal beta", 1e-12);
  Check value("two-reservoir value", 1e-10);
  equal.deviation(std::abs(spin_fermion_sigma2({0.3, 2.0, 1.0}, {0.7, 0.7, 0.7})));
  equal.deviation(std::abs(spin_fermion_sigma2({1.0, 1.0}, {1.5, 1.5})));
  const double reference = std::numbers::pi / 2 * std::sinh(1.0) / (std::cosh(1.0) * std::cosh(2.0));
  value.deviation(std::abs(spin_fermion_sigma2({1.0, 1.0}, {1.0, 2.0}) - reference));
  char buf[64];
  std::snprintf(buf, sizeof buf, "value %.10f", spin_fermion_sigma2({1.0, 1.0}, {1.0, 2.0}));
  return combine({&equal, &value}, buf);
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"trace inequality", trace_inequality},
      {"Neyman-Pearson optimality", neyman_pearson},
      {"bound sandwich", bound_sandwich},
      {"modular-measure Laplace consistency", modular_laplace},
      {"monotonicity", monotonicity},
      {"FCS identities", fcs_identities},
      {"Evans-Searles symmetry", evans_searles},
      {"Legendre machinery", legendre_machinery},
      {"quasi-free determinant vs Fock oracle", quasifree_fock},
      {"XY chain", xy_chain},
      {"EBB", ebb},
      {"arrow of time", arrow_of_time},
      {"spin-fermion entropy production", spin_fermion},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failures;
    std::printf("%s  %2zu  %-40s %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str(),
                secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
