#include "catch_amalgamated.hpp"
#include "circuit_oracle.hpp"

#include "hemb/algebra.hpp"
#include "hemb/errors.hpp"
#include "hemb/search.hpp"

using namespace hemb;
using Catch::Approx;

namespace {

oracle::Mat lattice_search(int N, double gamma, int marked) {
  const Eigen::MatrixXcd l = oracle::chain_laplacian(N).cast<oracle::cd>();
  const Eigen::MatrixXcd i = Eigen::MatrixXcd::Identity(N, N);
  oracle::Mat h = -gamma * (oracle::kron(l, i) + oracle::kron(i, l));
  h(marked, marked) -= 1.0;
  return h;
}

double dense_gap(int N, double gamma, int marked) {
  const Eigen::SelfAdjointEigenSolver<oracle::Mat> es(lattice_search(N, gamma, marked));
  return es.eigenvalues()[1] - es.eigenvalues()[0];
}

double dense_success(int N, double gamma, int marked, double t) {
  const int dim = N * N;
  const Eigen::VectorXcd u = Eigen::VectorXcd::Constant(dim, 1.0 / N);
  const Eigen::VectorXcd psi = oracle::expm_herm(lattice_search(N, gamma, marked), t) * u;
  return std::norm(psi[marked]);
}

std::vector<std::uint64_t> product_words(const Code& c, int d) {
  std::vector<std::uint64_t> words{0};
  for (int k = 0; k < d; ++k) {
    std::vector<std::uint64_t> next;
    for (auto hi : words) {
      for (auto lo : c.words) next.push_back((hi << c.q) | lo);
    }
    words = next;
  }
  return words;
}

}  // namespace

TEST_CASE("lattice index follows Kronecker order") {
  CHECK(lattice_index(4, {2, 3}) == 6);
  CHECK(lattice_index(5, {5, 1}) == 20);
  CHECK_THROWS_AS(lattice_index(4, {0, 1}), Error);
}

TEST_CASE("search Hamiltonian equals -gamma L - |v><v|") {
  const SparseHermitian h = search_hamiltonian({.N = 4, .d = 2, .marked = {2, 3}, .gamma = 0.7});
  CHECK((h.dense() - lattice_search(4, 0.7, 6)).norm() < 1e-14);
}

TEST_CASE("unary corner oracle is n_{N-1} (x) (I - n_1)") {
  const PauliSum o = embed_oracle({4, 1}, Scheme::Unary, 4, 2);
  const oracle::Mat id = oracle::Mat::Identity(64, 64);
  const oracle::Mat expect = oracle::number_op(6, 5) * (id - oracle::number_op(6, 0));
  CHECK((pauli_sum_to_matrix(o).dense() - expect).norm() < 1e-13);
}

TEST_CASE("antiferromagnetic 4x4 oracle can be a three-site product") {
  const PauliSum o = embed_oracle({4, 2}, Scheme::Antiferromagnetic, 4, 2);
  const oracle::Mat expect = oracle::number_op(6, 0) * oracle::number_op(6, 1) * oracle::number_op(6, 5);
  CHECK((pauli_sum_to_matrix(o).dense() - expect).norm() < 1e-13);
}

TEST_CASE("embedded oracles restrict to the marked projector") {
  std::mt19937_64 rng(23);
  for (Scheme s : {Scheme::Unary, Scheme::Antiferromagnetic, Scheme::OneHot, Scheme::PenaltyFreeOneHot}) {
    for (int N : {3, 4, 5}) {
      const std::vector<int> v{1 + static_cast<int>(rng() % N), 1 + static_cast<int>(rng() % N)};
      const Code c = make_code(s, N);
      const auto words = product_words(c, 2);
      const oracle::Mat r = oracle::restrict_to(pauli_sum_to_matrix(embed_oracle(v, s, N, 2)).dense(), words);
      oracle::Mat expect = oracle::Mat::Zero(N * N, N * N);
      expect(lattice_index(N, v), lattice_index(N, v)) = 1.0;
      CHECK((r - expect).norm() < 1e-13);
    }
  }
  try {
    embed_oracle({1, 1}, Scheme::CirculantUnary, 4, 2);
    FAIL("expected scheme constraint");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SchemeConstraint);
  }
}

TEST_CASE("search embedding restricts to the search Hamiltonian") {
  const SearchTask task{.N = 4, .d = 2, .marked = {3, 2}, .gamma = 0.6};
  for (Scheme s : {Scheme::Unary, Scheme::OneHot, Scheme::PenaltyFreeOneHot}) {
    const auto art = search_embedding(task, s);
    const oracle::Mat r = oracle::restrict_to(pauli_sum_to_matrix(art.q_op).dense(), art.code.words);
    CHECK((r - lattice_search(4, 0.6, lattice_index(4, {3, 2}))).norm() < 1e-12);
  }
}

TEST_CASE("optimized gamma minimizes the dense spectral gap") {
  for (int N : {3, 4, 5}) {
    const auto res = optimize_gamma(N, 2);
    CHECK(res.converged);
    const int marked = lattice_index(N, {N, 1});
    CHECK(res.gap == Approx(dense_gap(N, res.gamma, marked)).margin(1e-10));
    for (double dg : {-0.02, 0.02}) CHECK(dense_gap(N, res.gamma + dg, marked) >= res.gap - 1e-12);
  }
  CHECK(optimize_gamma(4, 2).gamma == Approx(0.695895).margin(1e-5));
}

TEST_CASE("success time is the first crossing under dense evolution") {
  const double gamma = optimize_gamma(4, 2).gamma;
  const double p = default_success_probability(4);
  CHECK(p == Approx(4 * std::pow(std::log(4.0) / 4, 2)));
  const double t = success_time(4, 2, gamma, p);
  const int marked = lattice_index(4, {4, 1});
  CHECK(dense_success(4, gamma, marked, t) == Approx(p).margin(1e-9));
  for (double s = 0.0; s < t - 1e-3; s += 0.01) CHECK(dense_success(4, gamma, marked, s) < p);
  CHECK(success_time(4, 2, gamma, 1.0 / 16) == 0.0);
}

TEST_CASE("unary search fidelity exceeds 0.99 with the penalty rule") {
  const double gamma = optimize_gamma(3, 2).gamma;
  const double tp = success_time(3, 2, gamma, default_success_probability(3));
  const SearchTask task{.N = 3, .d = 2, .marked = {3, 1}, .gamma = gamma, .t_p = tp};
  const double g = spatial_search_penalty(gamma, 3, 2, tp);
  CHECK(search_fidelity(task, Scheme::Unary, g, tp) > 0.99);
  CHECK(search_fidelity(task, Scheme::PenaltyFreeOneHot, 0.0, tp) == Approx(1.0).margin(1e-10));
}

TEST_CASE("unary loader prepares sum_j a_j |u_j>") {
  const std::vector<double> a{0.5, -0.3, 0.6, std::sqrt(1 - 0.25 - 0.09 - 0.36)};
  const Circuit c = state_prep_unary(a);
  CHECK(c.qubits == 3);
  const Code code = make_code(Scheme::Unary, 4);
  Eigen::VectorXcd expect = Eigen::VectorXcd::Zero(8);
  for (int j = 0; j < 4; ++j) expect[code.words[j]] = a[j];
  const Eigen::VectorXcd out = oracle::gate_product(c).col(0);
  CHECK(oracle::overlap(out, expect) == Approx(1.0).margin(1e-12));
  CHECK(oracle::gate_product(state_prep_unary({1, 0, 0})).col(0).cwiseAbs()[0] == Approx(1.0));
}

TEST_CASE("one-hot loaders prepare sum_j a_j |e_j> from the first codeword") {
  const std::vector<double> uniform(5, 1.0 / std::sqrt(5.0));
  const std::vector<double> mixed{0.1, -0.7, 0.5, 0.3, std::sqrt(1 - 0.01 - 0.49 - 0.25 - 0.09)};
  for (const auto& a : {uniform, mixed}) {
    Eigen::VectorXcd expect = Eigen::VectorXcd::Zero(32);
    for (int j = 0; j < 5; ++j) expect[1 << j] = a[j];
    CHECK(oracle::overlap(oracle::gate_product(state_prep_onehot(a)).col(1), expect) == Approx(1.0).margin(1e-12));
    const Circuit g = state_prep_onehot_givens(a);
    CHECK(oracle::overlap(oracle::gate_product(g).col(1), expect) == Approx(1.0).margin(1e-12));
    CHECK(count_gates(g).n_2q == 2 * 4);
  }
  Eigen::VectorXcd bell = Eigen::VectorXcd::Zero(4);
  bell[1] = bell[2] = 1 / std::sqrt(2.0);
  CHECK(oracle::overlap(oracle::gate_product(state_prep_onehot({1 / std::sqrt(2.0), 1 / std::sqrt(2.0)})).col(1), bell) ==
        Approx(1.0).margin(1e-12));
  CHECK_THROWS_AS(state_prep_unary({1.0, 1.0}), Error);
}

TEST_CASE("placing a circuit on an axis shifts its qubits") {
  Circuit c;
  c.qubits = 3;
  c.rx(1, 0.2);
  const Circuit placed = place_on_axis(c, 0, 2);
  CHECK(placed.qubits == 6);
  CHECK(placed.gates[0].q0 == 4);
  CHECK(place_on_axis(c, 1, 2).gates[0].q0 == 1);
}
