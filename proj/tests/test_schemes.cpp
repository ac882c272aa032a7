#include "catch_amalgamated.hpp"
#include "oracle.hpp"

#include "hemb/errors.hpp"
#include "hemb/schemes.hpp"

using namespace hemb;

namespace {

double restriction_gap(const EmbeddingArtifact& art, const Eigen::MatrixXcd& a) {
  const oracle::Mat q = pauli_sum_to_matrix(art.q_op).dense();
  return (oracle::restrict_to(q, art.code.words) - a).cwiseAbs().maxCoeff();
}

int max_weight(const PauliSum& p) {
  int w = 0;
  for (const auto& t : p.terms()) w = std::max(w, t.string.weight());
  return w;
}

}  // namespace

TEST_CASE("code sizes follow the scheme formulas") {
  CHECK(qubit_count(Scheme::Unary, 8) == 7);
  CHECK(qubit_count(Scheme::Antiferromagnetic, 8) == 7);
  CHECK(qubit_count(Scheme::CirculantUnary, 8) == 4);
  CHECK(qubit_count(Scheme::CirculantAntiferromagnetic, 8) == 4);
  CHECK(qubit_count(Scheme::OneHot, 8) == 8);
  CHECK(qubit_count(Scheme::PenaltyFreeOneHot, 8) == 8);
  CHECK_THROWS_AS(make_code(Scheme::CirculantUnary, 5), Error);
}

TEST_CASE("selected codewords") {
  CHECK(make_code(Scheme::Unary, 8).word_string(5) == "0001111");
  CHECK(make_code(Scheme::Antiferromagnetic, 8).word_string(4) == "0101101");
  CHECK(make_code(Scheme::CirculantUnary, 8).word_string(7) == "1100");
  CHECK(make_code(Scheme::CirculantAntiferromagnetic, 8).word_string(3) == "1001");
  CHECK(make_code(Scheme::OneHot, 8).word_string(6) == "00100000");
  const Code c = make_code(Scheme::Unary, 4);
  CHECK(c.index_of(0b011) == 2);
  CHECK(c.index_of(0b010) == -1);
}

TEST_CASE("unary penalty on four sites: -2 on the code, +2 elsewhere") {
  const Eigen::VectorXd d = diagonal_values(penalty_hamiltonian(Scheme::Unary, 4));
  const Code c = make_code(Scheme::Unary, 4);
  for (std::uint64_t b = 0; b < 8; ++b) CHECK(d[static_cast<Eigen::Index>(b)] == (c.index_of(b) >= 0 ? -2.0 : 2.0));
}

TEST_CASE("every penalty's minimal eigenspace is exactly the code") {
  for (Scheme s : kAllSchemes) {
    if (s == Scheme::PenaltyFreeOneHot) continue;
    for (int n : {4, 6, 8}) {
      const PauliSum h = penalty_hamiltonian(s, n);
      const Code c = make_code(s, n);
      const Eigen::VectorXd d = diagonal_values(h);
      const double lo = d.minCoeff();
      for (Eigen::Index b = 0; b < d.size(); ++b) {
        const bool in_code = c.index_of(static_cast<std::uint64_t>(b)) >= 0;
        if (in_code) CHECK(d[b] == Catch::Approx(lo));
        else CHECK(d[b] > lo + 0.5);
      }
    }
  }
}

TEST_CASE("sum-of-Z one-hot penalty holds the code in an excited eigenspace") {
  const PauliSum h = penalty_hamiltonian(Scheme::OneHot, 4, OneHotPenalty::SumZ);
  const Code c = make_code(Scheme::OneHot, 4);
  for (auto w : c.words) CHECK(h.diagonal_value(w) == Catch::Approx(2.0));
  const auto art = embed_matrix(SparseHermitian::from_dense(oracle::chain_laplacian(4)), Scheme::OneHot,
                                {.one_hot_form = OneHotPenalty::SumZ});
  CHECK_FALSE(art.code_is_ground);
}

TEST_CASE("5-node chain unary embedding matches the worked example") {
  const auto art = embed_matrix(SparseHermitian::from_dense(oracle::chain_laplacian(5)), Scheme::Unary);
  PauliSum expect(4, -1.0);
  expect = expect - PauliSum::number_op(4, 0) + PauliSum::number_op(4, 3);
  for (int j = 0; j < 4; ++j) expect.add(1.0, PauliString{4, std::uint64_t{1} << j, 0});
  CHECK(((art.q_op - expect).normalize(1e-14)).size() == 0);
  CHECK(std::abs(art.q_op.offset() - expect.offset()) < 1e-14);
  PauliSum pen(4);
  for (int j = 0; j < 3; ++j) pen.add(-1.0, PauliString{4, 0, (std::uint64_t{3} << j)});
  pen.add(1.0, PauliString::from_letters("IIIZ"));
  pen.add(-1.0, PauliString::from_letters("ZIII"));
  CHECK(((art.h_pen - pen).normalize(1e-14)).size() == 0);
}

TEST_CASE("glued-trees style adjacency: penalty-free one-hot gives XX + YY per edge") {
  const int n = 6;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  const std::pair<int, int> edges[] = {{0, 1}, {0, 2}, {1, 3}, {2, 4}, {3, 5}, {4, 5}, {1, 4}};
  for (auto [i, j] : edges) a(i, j) = a(j, i) = 1.0;
  const auto art = embed_matrix(SparseHermitian::from_dense(a), Scheme::PenaltyFreeOneHot);
  CHECK(art.q_op.size() == 2 * std::size(edges));
  for (const auto& t : art.q_op.terms()) {
    CHECK(t.string.weight() == 2);
    CHECK(t.coeff == Catch::Approx(0.5));
  }
  CHECK(art.penalty_free);
  const auto v = validate_embedding(art, SparseHermitian::from_dense(a), 0.0);
  CHECK(v.invariant_subspace);
  CHECK(v.leakage_norm == 0.0);
}

TEST_CASE("random banded matrices restrict exactly for all non-circulant schemes") {
  std::mt19937_64 rng(42);
  for (Scheme s : {Scheme::Unary, Scheme::Antiferromagnetic, Scheme::OneHot, Scheme::PenaltyFreeOneHot}) {
    for (int trial = 0; trial < 20; ++trial) {
      const int n = 2 + static_cast<int>(rng() % 7);
      const int band = 1 + static_cast<int>(rng() % 2);
      const Eigen::MatrixXcd a = oracle::random_banded(n, band, rng, trial % 2 == 1);
      const auto art = embed_matrix(SparseHermitian::from_dense(a), s);
      CHECK(restriction_gap(art, a) < 1e-12);
      if (!is_one_hot(s) && n > band + 1) CHECK(max_weight(art.hamiltonian(1.0)) == std::max(band, 2));
      if (is_one_hot(s)) CHECK(max_weight(art.q_op) <= 2);
    }
  }
}

TEST_CASE("random circulant matrices restrict exactly") {
  std::mt19937_64 rng(9);
  for (Scheme s : {Scheme::CirculantUnary, Scheme::CirculantAntiferromagnetic}) {
    for (int n : {4, 6, 8}) {
      const Eigen::MatrixXd a = oracle::random_circulant(n, rng);
      const auto art = embed_matrix(SparseHermitian::from_dense(a), s);
      CHECK(restriction_gap(art, a.cast<oracle::cd>()) < 1e-12);
    }
  }
}

TEST_CASE("circulant schemes reject non-circulant input") {
  CHECK_THROWS_AS(embed_matrix(SparseHermitian::from_dense(oracle::chain_laplacian(4)), Scheme::CirculantUnary), Error);
  try {
    embed_matrix(SparseHermitian::from_dense(oracle::chain_laplacian(4)), Scheme::CirculantUnary);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Structure);
  }
}

TEST_CASE("validation flags a wrong target matrix") {
  const auto art = embed_matrix(SparseHermitian::from_dense(oracle::chain_laplacian(5)), Scheme::Unary);
  const auto good = validate_embedding(art, SparseHermitian::from_dense(oracle::chain_laplacian(5)), 4.0);
  CHECK(good.ok());
  CHECK(good.leakage_norm > 0.0);
  Eigen::MatrixXd wrong = oracle::chain_laplacian(5);
  wrong(0, 0) = 3.0;
  CHECK_FALSE(validate_embedding(art, SparseHermitian::from_dense(wrong), 4.0).ok());
}

TEST_CASE("code energy is shifted to zero in the full Hamiltonian") {
  const auto art = embed_matrix(SparseHermitian::from_dense(oracle::chain_laplacian(4)), Scheme::Antiferromagnetic);
  const oracle::Mat h = pauli_sum_to_matrix(art.hamiltonian(7.0)).dense();
  const oracle::Mat q = pauli_sum_to_matrix(art.q_op).dense();
  CHECK((oracle::restrict_to(h, art.code.words) - oracle::restrict_to(q, art.code.words)).norm() < 1e-12);
}
