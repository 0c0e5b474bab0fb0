#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "spinchain/models.hpp"
#include "spinchain/oracle.hpp"

using namespace spinchain;

namespace {

// Random density matrix with the given seed (Hermitian PSD, trace 1).
CMatrix random_density(int dim, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  CMatrix a(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) a(i, j) = std::complex<double>(g(rng), g(rng));
  CMatrix rho = a * a.adjoint();
  return rho / rho.trace().real();
}

CMatrix random_pure(int dim, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::VectorXcd psi(dim);
  for (int i = 0; i < dim; ++i) psi(i) = std::complex<double>(g(rng), g(rng));
  psi.normalize();
  return psi * psi.adjoint();
}

DenseOperator bell_pair() {
  Eigen::VectorXcd phi = Eigen::VectorXcd::Zero(4);
  phi(0) = phi(3) = 1.0 / std::sqrt(2.0);
  return {2, phi * phi.adjoint()};
}

DenseOperator classical_correlated() {
  CMatrix rho = CMatrix::Zero(4, 4);
  rho(0, 0) = rho(3, 3) = 0.5;  // (|00><00| + |11><11|)/2
  return {2, rho};
}

}  // namespace

TEST_CASE("thermal state limits", "[oracle]") {
  const auto terms = build_term_list(ChainSpec::xy(3, 0.5, 0.9));
  const auto rho0 = dense_thermal(terms, 0.0);
  CHECK((rho0.matrix - CMatrix::Identity(8, 8) / 8.0).cwiseAbs().maxCoeff() < 1e-14);

  // single spin in field h: diagonal Gibbs weights e^{-+ beta h} / 2 cosh(beta h)
  const auto single = dense_thermal(build_term_list(ChainSpec::xy(1, 0.0, 0.8)), 1.3);
  const double z = 2.0 * std::cosh(1.3 * 0.8);
  CHECK(std::abs(single.matrix(0, 0).real() - std::exp(-1.3 * 0.8) / z) < 1e-12);
  CHECK(std::abs(single.matrix(1, 1).real() - std::exp(1.3 * 0.8) / z) < 1e-12);

  // large beta: projector onto the ground space, trace 1, idempotent
  for (const double beta : {2e3, std::numeric_limits<double>::infinity()}) {
    const auto cold = dense_thermal(terms, beta);
    CHECK(std::abs(cold.matrix.trace().real() - 1.0) < 1e-12);
    CHECK((cold.matrix * cold.matrix - cold.matrix).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("thermal state commutes with H", "[oracle]") {
  const auto terms = build_term_list(ChainSpec::tilted_ising(4, 1.0, 1.0));
  const CMatrix h = dense_hamiltonian(terms);
  const auto rho = dense_thermal(terms, 0.7);
  CHECK((rho.matrix * h - h * rho.matrix).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("capacity cap", "[oracle]") {
  TermList terms;
  terms.n = 11;
  CHECK_THROWS_AS(dense_hamiltonian(terms), std::runtime_error);
}

TEST_CASE("OSEE of product and Bell states", "[oracle]") {
  const CMatrix prod = kron(random_density(4, 5), random_density(8, 6));
  CHECK(dense_osee({5, prod}, 2) < 1e-10);
  CHECK(dense_osee(bell_pair(), 1) == Catch::Approx(2.0).margin(1e-12));
}

TEST_CASE("QMI of simple states", "[oracle]") {
  const CMatrix prod = kron(random_density(2, 15), random_density(4, 16));
  CHECK(dense_qmi({3, prod}, 1) < 1e-10);
  CHECK(dense_qmi(bell_pair(), 1) == Catch::Approx(2.0).margin(1e-12));
  CHECK(dense_qmi(classical_correlated(), 1) == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("mutual purity of simple states", "[oracle]") {
  const CMatrix prod = kron(random_density(4, 25), random_density(4, 26));
  CHECK(std::abs(dense_mutual_purity({4, prod}, 2)) < 1e-10);
  CHECK(dense_mutual_purity(bell_pair(), 1) == Catch::Approx(2.0).margin(1e-12));
  CHECK(dense_mutual_purity(classical_correlated(), 1) == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("pure states: OSEE and QMI are twice the entanglement entropy", "[oracle]") {
  const DenseOperator rho{4, random_pure(16, 33)};
  const double s_a = von_neumann_entropy(partial_trace_keep_left(rho.matrix, 4, 2));
  CHECK(dense_osee(rho, 2) == Catch::Approx(2.0 * s_a).margin(1e-10));
  CHECK(dense_qmi(rho, 2) == Catch::Approx(2.0 * s_a).margin(1e-10));
}

TEST_CASE("degenerate input errors", "[oracle]") {
  const DenseOperator zero{2, CMatrix::Zero(4, 4)};
  CHECK_THROWS_AS(dense_osee(zero, 1), std::runtime_error);
  CHECK_THROWS_AS(dense_osee(bell_pair(), 2), std::invalid_argument);  // cut out of range
}

TEST_CASE("pauli coefficients of small operators", "[oracle]") {
  // single site: rho = (1 + 0.3 sx + 0.1 sz) / 2
  DenseOperator rho1{1, (pauli(0) + 0.3 * pauli(1) + 0.1 * pauli(3)) / 2.0};
  const Vector c1 = pauli_coefficients(rho1);
  CHECK(c1(0) == Catch::Approx(0.5).margin(1e-14));
  CHECK(c1(1) == Catch::Approx(0.15).margin(1e-14));
  CHECK(c1(2) == Catch::Approx(0.0).margin(1e-14));
  CHECK(c1(3) == Catch::Approx(0.05).margin(1e-14));

  // two sites: coefficients of sx (x) sz sit at string index 1*4 + 3
  DenseOperator rho2{2, (kron(pauli(0), pauli(0)) + 0.4 * kron(pauli(1), pauli(3))) / 4.0};
  const Vector c2 = pauli_coefficients(rho2);
  CHECK(c2(0) == Catch::Approx(0.25).margin(1e-14));
  CHECK(c2(1 * 4 + 3) == Catch::Approx(0.1).margin(1e-14));

  // trace normalization: c_{0..0} 2^n = tr rho
  const auto thermal = dense_thermal(build_term_list(ChainSpec::xy(4, 0.3, 0.6)), 1.1);
  CHECK(pauli_coefficients(thermal)(0) * 16.0 == Catch::Approx(1.0).margin(1e-12));
}
