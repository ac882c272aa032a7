#include "catch_amalgamated.hpp"
#include "oracle.hpp"

#include "hemb/errors.hpp"
#include "hemb/realspace.hpp"

using namespace hemb;
using Catch::Approx;

namespace {

/// Ladder operators on N levels; x = (a + a^dag)/sqrt2, p = i(a^dag - a)/sqrt2.
oracle::Mat ladder(int n) {
  oracle::Mat a = oracle::Mat::Zero(n, n);
  for (int j = 1; j < n; ++j) a(j - 1, j) = std::sqrt(static_cast<double>(j));
  return a;
}

/// Truncation of the infinite-dimensional operator: build on n + 2 levels, then crop.
std::tuple<oracle::Mat, oracle::Mat, oracle::Mat> truncated(int n) {
  const oracle::Mat a = ladder(n + 2);
  const oracle::Mat x = (a + a.adjoint()) / std::sqrt(2.0);
  const oracle::Mat p = oracle::cd(0, 1) * (a.adjoint() - a) / std::sqrt(2.0);
  return {x.topLeftCorner(n, n), (p * p).topLeftCorner(n, n), (x * x).topLeftCorner(n, n)};
}

}  // namespace

TEST_CASE("Fock operators are truncations of the ladder-operator forms") {
  for (int n : {2, 5, 9}) {
    const auto ops = fock_operators(n);
    const auto [x, p2, x2] = truncated(n);
    CHECK((ops.x_hat.dense() - x).norm() < 1e-13);
    CHECK((ops.p2_hat.dense() - p2).norm() < 1e-13);
    CHECK((ops.x2_hat.dense() - x2).norm() < 1e-13);
    const oracle::Mat sum = ops.p2_hat.dense() + ops.x2_hat.dense();
    for (int j = 0; j < n; ++j) CHECK(sum(j, j).real() == Approx(2.0 * j + 1.0));
  }
  CHECK((fock_operators(2).x_hat.dense() - oracle::pauli("X") / std::sqrt(2.0)).norm() < 1e-15);
}

TEST_CASE("embedded Fock operators restrict to the truncated operators") {
  for (Scheme s : {Scheme::Unary, Scheme::Antiferromagnetic, Scheme::OneHot, Scheme::PenaltyFreeOneHot}) {
    const auto e = fock_embeddings(5, s);
    const auto ops = fock_operators(5);
    const auto& w = e.frame.code.words;
    const oracle::Mat id = oracle::Mat::Identity(5, 5);
    CHECK((oracle::restrict_to(pauli_sum_to_matrix(e.q_x).dense(), w) + e.dropped_x * id - ops.x_hat.dense()).norm() < 1e-12);
    CHECK((oracle::restrict_to(pauli_sum_to_matrix(e.q_p2).dense(), w) + e.dropped_p2 * id - ops.p2_hat.dense()).norm() < 1e-12);
    CHECK((oracle::restrict_to(pauli_sum_to_matrix(e.q_x2).dense(), w) + e.dropped_x2 * id - ops.x2_hat.dense()).norm() < 1e-12);
    const PauliSum h = fock_hamiltonian_embedded(e, 2.0, -0.5);
    const double shift = 0.5 * e.dropped_p2 + e.dropped_x2 - 0.5 * e.dropped_x;
    CHECK((oracle::restrict_to(pauli_sum_to_matrix(h).dense(), w) + shift * id - fock_hamiltonian(5, 2.0, -0.5).dense()).norm() <
          1e-12);
  }
}

TEST_CASE("unary x embedding uses sqrt(j) X_j / sqrt 2") {
  const auto e = fock_embeddings(4, Scheme::Unary);
  PauliSum expect(3);
  for (int j = 1; j <= 3; ++j) expect = expect + PauliSum::single(3, j - 1, 'X', std::sqrt(j / 2.0));
  CHECK((e.q_x - expect).normalize(1e-14).size() == 0);
}

TEST_CASE("closed forms match exact evolution of a large truncation") {
  const int n = 32;
  const oracle::Mat h = fock_hamiltonian(n, 2.0, -0.5).dense();
  const auto ops = fock_operators(n);
  Eigen::VectorXcd vac = Eigen::VectorXcd::Zero(n);
  vac[0] = 1.0;
  for (double t : {0.0, 0.7, 2.3, 5.0}) {
    const Eigen::VectorXcd psi = oracle::expm_herm(h, t) * vac;
    const auto [x, k] = harmonic_observables(2.0, -0.5, t);
    const double c = std::cos(std::sqrt(2.0) * t);
    CHECK(x == Approx(0.25 * (1 - c)).margin(1e-14));
    CHECK(k == Approx(-5.0 / 16 * c * c + 9.0 / 16).margin(1e-14));
    CHECK(expectation(ops.x_hat, psi) == Approx(x).margin(1e-6));
    CHECK(0.5 * expectation(ops.p2_hat, psi) == Approx(k).margin(1e-6));
  }
  CHECK_THROWS_AS(harmonic_observables(0.0, 1.0, 1.0), Error);
}

TEST_CASE("finite-difference operators") {
  const oracle::Mat d = fdm_second_derivative(4).dense();
  const double inv = 9.0;
  CHECK(d(0, 0).real() == Approx(-2 * inv));
  CHECK(d(1, 2).real() == Approx(inv));
  CHECK(d(0, 2).real() == 0.0);
  Eigen::VectorXd v = Eigen::VectorXd::LinSpaced(9, 0.0, 8.0);
  const oracle::Mat h = fdm_hamiltonian(3, v).dense();
  const oracle::Mat d3 = fdm_second_derivative(3).dense();
  const oracle::Mat i = oracle::Mat::Identity(3, 3);
  oracle::Mat expect = -0.5 * (oracle::kron(d3, i) + oracle::kron(i, d3));
  expect.diagonal() += v.cast<oracle::cd>();
  CHECK((h - expect).norm() < 1e-12);
  CHECK_THROWS_AS(fdm_second_derivative(2), Error);
  CHECK_THROWS_AS(fdm_hamiltonian(3, Eigen::VectorXd::Zero(4)), Error);
}
