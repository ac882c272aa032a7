#include "catch_amalgamated.hpp"
#include "circuit_oracle.hpp"

#include <numbers>

#include "hemb/compiler.hpp"
#include "hemb/errors.hpp"
#include "hemb/graphs.hpp"

using namespace hemb;
using Catch::Approx;

using oracle::gate_product;
using oracle::phase_fidelity;

TEST_CASE("Pauli exponentials compile to the right unitary") {
  for (const std::string s : {"Z", "X", "Y", "ZZ", "XY", "YZX", "ZIZ", "XIY", "IYI"}) {
    const auto p = PauliString::from_letters(s);
    const Circuit c = compile_pauli_exp(p, 0.41);
    const oracle::Mat target = oracle::expm_herm(oracle::pauli(s), 0.41);
    CHECK(phase_fidelity(gate_product(c), target) == Approx(1.0).margin(1e-12));
    const auto rep = count_gates(c, {.virtual_rz = false});
    CHECK(rep.n_2q == std::max(0, p.weight() - 1) * 2 - (p.weight() == 2 ? 1 : 0));
  }
}

TEST_CASE("weight-2 exponentials cost one Rxx") {
  CHECK(count_gates(compile_pauli_exp(PauliString::from_letters("XX"), 0.3)).n_2q == 1);
  CHECK(count_gates(compile_pauli_exp(PauliString::from_letters("ZY"), 0.3)).n_2q == 1);
}

TEST_CASE("CNOT and CRy lowerings") {
  Circuit c;
  c.qubits = 2;
  c.cnot(1, 0);
  oracle::Mat cnot = oracle::Mat::Zero(4, 4);
  cnot(0, 0) = cnot(1, 1) = cnot(2, 3) = cnot(3, 2) = 1.0;
  CHECK(phase_fidelity(gate_product(c), cnot) == Approx(1.0).margin(1e-12));
  CHECK(count_gates(c).n_2q == 1);

  Circuit r;
  r.qubits = 2;
  r.cry(1, 0, 0.9);
  oracle::Mat cry = oracle::Mat::Identity(4, 4);
  cry.block(2, 2, 2, 2) = oracle::expm_herm(oracle::pauli("Y"), 0.45);
  CHECK(phase_fidelity(gate_product(r), cry) == Approx(1.0).margin(1e-12));
  CHECK(count_gates(r).n_2q == 1);
}

TEST_CASE("rotation merging") {
  Circuit c;
  c.qubits = 2;
  c.rx(0, 0.2);
  c.rx(0, 0.3);
  c.ry(1, 2 * std::numbers::pi);
  c.rz(0, 0.1);
  c.rz(0, -0.1);
  const Circuit m = merge_rotations(c);
  REQUIRE(m.gates.size() == 1);
  CHECK(m.gates[0].angle == Approx(0.5));
  CHECK(phase_fidelity(gate_product(m), gate_product(c)) == Approx(1.0).margin(1e-12));
}

TEST_CASE("virtual-Z policy") {
  Circuit c;
  c.qubits = 1;
  c.rz(0, 0.3);
  c.rx(0, 0.2);
  CHECK(count_gates(c).n_1q == 1);
  CHECK(count_gates(c).n_rz == 1);
  CHECK(count_gates(c, {.virtual_rz = false}).n_1q == 2);
}

TEST_CASE("compiled plans implement the simulated product formula") {
  const auto art = embed_matrix(SparseHermitian::from_dense(oracle::chain_laplacian(4)), Scheme::Unary);
  const SplitHamiltonian h = SplitHamiltonian::from_artifact(art, 3.0);
  for (Formula f : {Formula::First, Formula::Second, Formula::RandomizedFirst}) {
    const EvolutionPlan plan{f, 3, 0.8, 11};
    const auto compiled = compile_plan(plan, h);
    oracle::Mat sim(8, 8);
    for (int b = 0; b < 8; ++b) sim.col(b) = evolve_trotter(plan, h, basis_state(8, b)).final_state;
    CHECK(phase_fidelity(gate_product(compiled.circuit), sim) == Approx(1.0).margin(1e-10));
  }
}

TEST_CASE("penalty-free one-hot: two-qubit count is r times the number of terms") {
  const Graph g = build_graph(GraphKind::Chain, {.N = 5});
  const auto art = embed_matrix(laplacian(g), Scheme::PenaltyFreeOneHot);
  const SplitHamiltonian h = SplitHamiltonian::from_artifact(art, 0.0);
  int two_local = 0;
  for (const auto& t : art.q_op.terms()) two_local += t.string.weight() == 2;
  CHECK(two_local == 2 * 4);
  const auto compiled = compile_plan({Formula::First, 6, 1.0}, h);
  CHECK(compiled.report.n_2q == 6 * two_local);
  CHECK(compiled.report.steps.size() == 6);
}

TEST_CASE("prep circuits are counted as their own section") {
  const auto art = embed_matrix(SparseHermitian::from_dense(oracle::chain_laplacian(3)), Scheme::PenaltyFreeOneHot);
  Circuit prep;
  prep.qubits = 3;
  prep.rx(0, std::numbers::pi);
  const auto compiled = compile_plan({Formula::First, 2, 1.0}, SplitHamiltonian::from_artifact(art, 0.0), &prep);
  REQUIRE_FALSE(compiled.report.steps.empty());
  CHECK(compiled.report.steps.front().label == "prep");
  CHECK(compiled.report.steps.front().n_1q == 1);
}

TEST_CASE("binary baseline decouples the padding block") {
  const Eigen::MatrixXd l = oracle::chain_laplacian(5);
  const PauliSum p = binary_baseline(SparseHermitian::from_dense(l), 5, 7.0);
  CHECK(p.qubits() == 3);
  const oracle::Mat m = pauli_sum_to_matrix(p).dense();
  CHECK((m.topLeftCorner(5, 5) - l.cast<oracle::cd>()).norm() < 1e-12);
  CHECK(m.topRightCorner(5, 3).norm() < 1e-12);
  CHECK((m.bottomRightCorner(3, 3) - 7.0 * oracle::Mat::Identity(3, 3)).norm() < 1e-12);
}

TEST_CASE("power-law fits") {
  std::vector<std::pair<double, double>> pts, flat;
  for (double x : {2.0, 3.0, 5.0, 8.0}) {
    pts.emplace_back(x, 3.0 * x * x);
    flat.emplace_back(x, 4.0);
  }
  const auto fit = fit_power_law(pts);
  CHECK(fit.exponent == Approx(2.0).margin(1e-9));
  CHECK(fit.prefactor == Approx(3.0).margin(1e-9));
  CHECK(fit_power_law(flat).exponent == Approx(0.0).margin(1e-12));
  CHECK_THROWS_AS(fit_power_law({{1.0, 1.0}}), Error);
}

TEST_CASE("qasm export") {
  Circuit c;
  c.qubits = 2;
  c.rxx(0, 1, 0.5);
  const std::string q = to_qasm(c);
  CHECK(q.find("OPENQASM") != std::string::npos);
  CHECK(q.find("rxx(0.5) q[0], q[1];") != std::string::npos);
}
