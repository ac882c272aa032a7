#include "catch_amalgamated.hpp"
#include "oracle.hpp"

#include <numbers>
#include <set>

#include "hemb/errors.hpp"
#include "hemb/rydberg.hpp"

using namespace hemb;
using Catch::Approx;

namespace {

/// Dense H = sum_j [Omega/2 (e^{i phi}|0><1| + h.c.) - Delta n_j] + sum_{j<k} V_jk n_j n_k.
oracle::Mat dense_rydberg(const AtomArray& atoms, double omega, double phi, double delta, double c6) {
  const int n = atoms.size();
  const int dim = 1 << n;
  oracle::Mat drive1(2, 2);
  drive1 << 0, 0.5 * omega * std::polar(1.0, phi), 0.5 * omega * std::polar(1.0, -phi), 0;
  oracle::Mat h = oracle::Mat::Zero(dim, dim);
  for (int j = 0; j < n; ++j) {
    oracle::Mat term = oracle::Mat::Identity(1, 1);
    for (int s = n - 1; s >= 0; --s) term = oracle::kron(term, s == j ? drive1 : oracle::Mat::Identity(2, 2));
    h += term - delta * oracle::number_op(n, j);
    for (int k = j + 1; k < n; ++k) {
      const double dx = atoms.positions[j][0] - atoms.positions[k][0];
      const double dy = atoms.positions[j][1] - atoms.positions[k][1];
      h += c6 / std::pow(dx * dx + dy * dy, 3) * oracle::number_op(n, j) * oracle::number_op(n, k);
    }
  }
  return h;
}

}  // namespace

TEST_CASE("chain interactions are C6 / r^6 and positive") {
  const AtomArray a = AtomArray::chain(3, 5.9);
  const auto terms = interaction_terms(a);
  REQUIRE(terms.size() == 3);
  const double c6 = RydbergParams{}.c6;
  for (const auto& t : terms) {
    CHECK(t.coeff > 0.0);
    CHECK(t.coeff == Approx(c6 / std::pow(5.9 * (t.k - t.j), 6)));
  }
  AtomArray clash;
  clash.positions = {{0.0, 0.0}, {0.0, 0.0}};
  CHECK_THROWS_AS(interaction_terms(clash), Error);
}

TEST_CASE("Rydberg Hamiltonian agrees with the dense Kronecker form") {
  const AtomArray a = AtomArray::chain(3, 6.5);
  const double c6 = RydbergParams{}.c6;
  const oracle::Mat h = rydberg_hamiltonian(a, 1.2e7, 0.3, {2.0e7}).dense();
  const oracle::Mat expect = dense_rydberg(a, 1.2e7, 0.3, 2.0e7, c6);
  CHECK((h - expect).norm() / expect.norm() < 1e-13);
  CHECK(std::abs(h(0, 1) - 0.5 * 1.2e7 * std::polar(1.0, 0.3)) < 1e-6);
  CHECK_THROWS_AS(rydberg_hamiltonian(a, 1.0, 0.0, {1.0, 2.0}), Error);
}

TEST_CASE("chain detunings make the antiferromagnetic code the degenerate ground space") {
  const double r = 5.9, c6 = RydbergParams{}.c6;
  for (int N : {2, 3, 4, 6, 8}) {
    const int n = N - 1;
    const auto delta = chain_detunings(N, r, c6);
    REQUIRE(static_cast<int>(delta.size()) == n);
    const Eigen::VectorXd d = rydberg_diagonal(AtomArray::chain(n, r), delta);
    const double lo = d.minCoeff();
    std::set<std::uint64_t> ground;
    for (Eigen::Index b = 0; b < d.size(); ++b) {
      if (std::abs(d[b] - lo) <= 1e-9 * std::abs(lo)) ground.insert(static_cast<std::uint64_t>(b));
    }
    const Code code = make_code(Scheme::Antiferromagnetic, N);
    CHECK(ground == std::set<std::uint64_t>(code.words.begin(), code.words.end()));
  }
}

TEST_CASE("effective potential is an N x N grid with minimum zero") {
  const Eigen::MatrixXd v = effective_potential({});
  CHECK(v.rows() == 7);
  CHECK(v.cols() == 7);
  CHECK(v.minCoeff() == 0.0);
  CHECK(v.maxCoeff() > 0.0);
}

TEST_CASE("waveforms interpolate linearly and pulses validate") {
  const Waveform w({0.0, 1.0, 3.0}, {0.0, 2.0, -2.0});
  CHECK(w.at(0.5) == Approx(1.0));
  CHECK(w.at(2.0) == Approx(0.0));
  CHECK(w.max_abs() == 2.0);
  const Pulse p = prep_pulse();
  CHECK_NOTHROW(p.validate());
  CHECK(p.duration() == Approx(0.5e-6));
  CHECK(p.omega.max_abs() == Approx(15.8e6));
  CHECK(p.delta.at(0.0) == Approx(-5e7));
  CHECK(p.delta.at(0.5e-6) == Approx(5e7));
  Pulse bad = p;
  bad.omega = Waveform({0.0, 0.5e-6}, {0.0, -1.0});
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("constant-control pulse evolution matches the dense exponential") {
  const AtomArray a = AtomArray::chain(2, 7.0);
  const double T = 0.1e-6;
  Pulse p;
  p.omega = Waveform({0.0, T}, {1e7, 1e7});
  p.delta = Waveform({0.0, T}, {3e6, 3e6});
  p.phi = Waveform({0.0, T}, {0.2, 0.2});
  const StateVector psi0 = basis_state(4, 0);
  const auto res = evolve_pulse(a, p, 1e-10, psi0);
  const Eigen::VectorXcd exact = oracle::expm_herm(dense_rydberg(a, 1e7, 0.2, 3e6, RydbergParams{}.c6), T) * psi0;
  CHECK((res.final_state - exact).norm() < 1e-4);
  CHECK(res.norm == Approx(1.0).margin(1e-12));
  CHECK_THROWS_AS(evolve_pulse(a, p, 3e-8, psi0), Error);
}

TEST_CASE("time and drive rescaling") {
  CHECK(time_rescale(2e-6) == Approx(2.0));
  CHECK(time_unscale(time_rescale(3.3e-7)) == Approx(3.3e-7));
  CHECK(drive_rescale(2 * std::numbers::pi * 1e6, 0.5) == Approx(0.25));
}

TEST_CASE("post-selection keeps codewords only") {
  const Code c = make_code(Scheme::Antiferromagnetic, 3);
  std::string outside;
  for (std::uint64_t b = 0; b < 4; ++b) {
    if (c.index_of(b) < 0) outside = std::string{b & 2 ? '1' : '0', b & 1 ? '1' : '0'};
  }
  REQUIRE_FALSE(outside.empty());
  const std::vector<std::string> shots{c.word_string(1), c.word_string(1), c.word_string(3), outside};
  const auto res = postselect(shots, c);
  CHECK(res.total == 4);
  CHECK(res.legit_fraction == Approx(0.75));
  CHECK(res.counts[0] == 2);
  CHECK(res.distribution[2] == Approx(1.0 / 3));
  CHECK(postselect({}, c).empty);
  CHECK_THROWS_AS(postselect({"101"}, c), Error);
}

TEST_CASE("bitstring sampling is seeded and follows the Born rule") {
  StateVector psi = StateVector::Zero(4);
  psi[1] = std::sqrt(0.2);
  psi[2] = std::sqrt(0.8);
  const auto a = sample_bitstrings(psi, 2, 20000, 3);
  CHECK(a == sample_bitstrings(psi, 2, 20000, 3));
  const auto n01 = std::count(a.begin(), a.end(), std::string("01"));
  const auto n10 = std::count(a.begin(), a.end(), std::string("10"));
  CHECK(n01 + n10 == 20000);
  CHECK(n01 / 20000.0 == Approx(0.2).margin(0.015));
}
