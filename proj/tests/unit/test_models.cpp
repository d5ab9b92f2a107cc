#include <cmath>

#include "doctest.h"
#include "qht/error.hpp"
#include "qht/models.hpp"
#include "qht/random.hpp"

using namespace qht;

namespace {

Matrix pauli(char c) {
  Matrix m(2, 2);
  switch (c) {
    case 'x': m << 0, 1, 1, 0; break;
    case 'y': m << 0, Complex(0, -1), Complex(0, 1), 0; break;
    case 'z': m << 1, 0, 0, -1; break;
    default: m = Matrix::Identity(2, 2);
  }
  return m;
}

Matrix kron_all(std::initializer_list<Matrix> ms) {
  Matrix out = Matrix::Identity(1, 1);
  for (const Matrix& m : ms) {
    Matrix next(out.rows() * m.rows(), out.cols() * m.cols());
    for (Index i = 0; i < out.rows(); ++i)
      for (Index j = 0; j < out.cols(); ++j) next.block(i * m.rows(), j * m.cols(), m.rows(), m.cols()) = out(i, j) * m;
    out = next;
  }
  return out;
}

Interaction field(double h) { return {2, {{1, HermitianOperator(h * pauli('z'))}}}; }

Interaction xy_plus_field(double j, double h) {
  const Matrix xx = kron_all({pauli('x'), pauli('x')}) + kron_all({pauli('y'), pauli('y')});
  return {2, {{2, HermitianOperator(0.5 * j * xx)}, {1, HermitianOperator(h * pauli('z'))}}};
}

}  // namespace

TEST_CASE("i.i.d. pairs") {
  RealVector a(2), b(2);
  a << 0.3, 0.7;
  b << 0.6, 0.4;
  const PositiveFunctional nu(HermitianOperator::diagonal(a));
  const PositiveFunctional omega(HermitianOperator::diagonal(b));
  const auto [n1, w1] = iid_pair(nu, omega, 1);
  CHECK((n1.op().matrix() - nu.op().matrix()).norm() == 0.0);
  const auto [n4, w4] = iid_pair(nu, omega, 4);
  CHECK(n4.dim() == 16);
  for (double s : {0.2, 0.5, 0.9})
    CHECK(std::abs(renyi_relative_entropy(n4, w4, s) - 4 * renyi_relative_entropy(nu, omega, s)) <= 1e-9);
  Rng rng(3);
  const PositiveFunctional r(random_density(rng, 3));
  const auto [rr, rr2] = iid_pair(r, r, 3);
  CHECK(std::abs(renyi_relative_entropy(rr, rr2, 0.4)) <= 1e-12);
  CHECK_THROWS_AS(iid_pair(nu, omega, 15), ValidationError);
}

TEST_CASE("box Hamiltonians") {
  const Interaction zero{2, {}};
  CHECK(box_hamiltonian(zero, 2).matrix().norm() == 0.0);

  const double h = 0.7;
  const Matrix expected = h * (kron_all({pauli('z'), pauli('1'), pauli('1')}) + kron_all({pauli('1'), pauli('z'), pauli('1')}) +
                               kron_all({pauli('1'), pauli('1'), pauli('z')}));
  CHECK((box_hamiltonian(field(h), 1).matrix() - expected).norm() < 1e-14);

  const Interaction xy = xy_plus_field(1.3, 0.0);
  Matrix hand = Matrix::Zero(16, 16);
  for (char c : {'x', 'y'}) {
    const Matrix p = pauli(c), id = pauli('1');
    hand += 0.65 * (kron_all({p, p, id, id}) + kron_all({id, p, p, id}) + kron_all({id, id, p, p}));
  }
  CHECK((chain_hamiltonian(xy, 4).matrix() - hand).norm() < 1e-13);

  Interaction bad{2, {{2, HermitianOperator(pauli('z'))}}};
  CHECK_THROWS_AS(box_hamiltonian(bad, 1), ValidationError);
  CHECK_THROWS_AS(box_hamiltonian(field(1.0), 7), ValidationError);
}

TEST_CASE("pressure and Renyi densities") {
  CHECK(pressure(Interaction{3, {}}, 2) == doctest::Approx(std::log(3.0)));
  CHECK(pressure(field(0.5), 2) == doctest::Approx(std::log(2 * std::cosh(0.5))));

  const Interaction phi = xy_plus_field(1.0, 0.3);
  const Interaction psi = xy_plus_field(0.5, -0.2);
  for (int n : {1, 2}) {
    CHECK(std::abs(renyi_density(phi, phi, n, 0.3)) <= 1e-12);
    CHECK(std::abs(renyi_density(phi, psi, n, 0.0)) <= 1e-12);
    CHECK(std::abs(renyi_density(phi, psi, n, 1.0)) <= 1e-12);
    std::vector<double> e;
    for (int i = 0; i <= 20; ++i) {
      const double s = i / 20.0;
      e.push_back(renyi_density(phi, psi, n, s));
      CHECK(e.back() <= 1e-12);
      CHECK(std::abs(e.back() - renyi_density(psi, phi, n, 1 - s)) <= 1e-10);
    }
    for (std::size_t i = 1; i + 1 < e.size(); ++i) CHECK(e[i + 1] - 2 * e[i] + e[i - 1] >= -1e-12);
    CHECK(std::abs(pressure(phi, n) - pressure(psi, n)) <= triple_norm(difference(phi, psi), n) + 1e-9);
  }
}

TEST_CASE("triple norm") {
  CHECK(triple_norm(field(0.5), 2) == doctest::Approx(0.5));
  // two-site term: two translates contain the centre, each weighted 1/2
  const Interaction nn{2, {{2, HermitianOperator(kron_all({pauli('z'), pauli('z')}))}}};
  CHECK(triple_norm(nn, 2) == doctest::Approx(1.0));
  const Interaction grouped{2, {{1, HermitianOperator(pauli('z'))}, {1, HermitianOperator(-pauli('z'))}}};
  CHECK(triple_norm(grouped, 1) == doctest::Approx(0.0));
}
