#include "catch_amalgamated.hpp"
#include "oracle.hpp"

#include "hemb/errors.hpp"
#include "hemb/graphs.hpp"

using namespace hemb;
using Catch::Approx;

namespace {

Eigen::MatrixXd cycle_laplacian(int n) {
  Eigen::MatrixXd l = oracle::chain_laplacian(n);
  l(0, n - 1) = l(n - 1, 0) = 1.0;
  l(0, 0) = l(n - 1, n - 1) = -2.0;
  return l;
}

/// First grid time where <psi(t)|O|psi(t)> passes thr, via dense expm.
double dense_crossing(const Eigen::MatrixXd& h, const Eigen::VectorXd& o, int start, double thr, bool strict) {
  const Eigen::Index n = h.rows();
  const oracle::Mat step = oracle::expm_herm(h.cast<oracle::cd>(), 0.01);
  oracle::Mat psi = oracle::Mat::Zero(n, 1);
  psi(start, 0) = 1.0;
  for (int k = 0; k < 100000; ++k) {
    double v = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) v += o[i] * std::norm(psi(i, 0));
    if (strict ? v > thr : v >= thr) return k * 0.01;
    psi = step * psi;
  }
  return -1.0;
}

}  // namespace

TEST_CASE("chain, cycle and lattice Laplacians") {
  CHECK((laplacian(build_graph(GraphKind::Chain, {.N = 6})).dense() - oracle::chain_laplacian(6).cast<oracle::cd>()).norm() == 0.0);
  CHECK((laplacian(build_graph(GraphKind::Cycle, {.N = 6})).dense() - cycle_laplacian(6).cast<oracle::cd>()).norm() == 0.0);
  const Eigen::MatrixXcd l = oracle::chain_laplacian(4).cast<oracle::cd>();
  const Eigen::MatrixXcd i = Eigen::MatrixXcd::Identity(4, 4);
  const Eigen::MatrixXcd lat = oracle::kron(l, i) + oracle::kron(i, l);
  CHECK((laplacian(build_graph(GraphKind::Lattice, {.N = 4, .d = 2})).dense() - lat).norm() == 0.0);
  const Eigen::MatrixXcd c = cycle_laplacian(4).cast<oracle::cd>();
  CHECK((laplacian(build_graph(GraphKind::PeriodicLattice, {.N = 4, .d = 2})).dense() - (oracle::kron(c, i) + oracle::kron(i, c))).norm() == 0.0);
}

TEST_CASE("binary tree structure") {
  const Graph t = build_graph(GraphKind::BinaryTree, {.h = 3});
  CHECK(t.n == 15);
  CHECK(t.edges.size() == 14);
  CHECK(t.layers.size() == 4);
  CHECK(t.layers[3].size() == 8);
  const auto deg = t.degrees();
  CHECK(deg[0] == 2);
  CHECK(std::count(deg.begin(), deg.end(), 1) == 8);
}

TEST_CASE("height-2 glued trees: 14 vertices, 20 edges, symmetric columns") {
  const Graph g = build_graph(GraphKind::GluedTrees, {.h = 2});
  CHECK(g.n == 14);
  CHECK(g.edges.size() == 20);
  REQUIRE(g.layers.size() == 6);
  const std::size_t sizes[] = {1, 2, 4, 4, 2, 1};
  for (int j = 0; j < 6; ++j) CHECK(g.layers[j].size() == sizes[j]);
  const auto deg = g.degrees();
  CHECK(deg[g.layers[0][0]] == 2);
  CHECK(deg[g.layers[5][0]] == 2);
  for (int j = 1; j < 5; ++j) {
    for (int v : g.layers[j]) CHECK(deg[v] == 3);
  }
  // The column subspace is invariant under the adjacency matrix.
  const oracle::Mat a = adjacency(g).dense();
  for (int j = 0; j < 6; ++j) {
    const StateVector c = column_state(g, j);
    StateVector proj = StateVector::Zero(14);
    const StateVector ac = a * c;
    for (int k = 0; k < 6; ++k) {
      const StateVector ck = column_state(g, k);
      proj += ck * ck.dot(ac);
    }
    CHECK((proj - ac).norm() < 1e-12);
  }
}

TEST_CASE("seeded gluing is reproducible and still 3-regular inside") {
  const Graph a = build_graph(GraphKind::GluedTrees, {.h = 3, .gluing_seed = 5});
  const Graph b = build_graph(GraphKind::GluedTrees, {.h = 3, .gluing_seed = 5});
  CHECK(a.edges == b.edges);
  CHECK(a.n == 30);
  const auto deg = a.degrees();
  CHECK(std::count(deg.begin(), deg.end(), 3) == 28);
}

TEST_CASE("BFS distances") {
  const Graph c = build_graph(GraphKind::Cycle, {.N = 7});
  const auto d = graph_distances(c, 0);
  CHECK(d[3] == 3);
  CHECK(d[4] == 3);
  CHECK(d[6] == 1);
}

TEST_CASE("propagation time matches a dense expm scan") {
  const Graph g = build_graph(GraphKind::Chain, {.N = 15});
  const auto res = propagation_time(g, 0, false);
  const auto dist = graph_distances(g, 0);
  Eigen::VectorXd o(15);
  for (int v = 0; v < 15; ++v) o[v] = dist[v];
  CHECK(res.t == Approx(dense_crossing(oracle::chain_laplacian(15), o, 0, 15 / 4.0, true)).margin(1e-9));
}

TEST_CASE("two-vertex chain crosses at the first grid point after pi/4") {
  const auto res = propagation_time(build_graph(GraphKind::Chain, {.N = 2}), 0, false);
  CHECK(res.t == Approx(0.79).margin(1e-9));
  CHECK(res.value == Approx(std::pow(std::sin(0.79), 2)).margin(1e-12));
  CHECK(propagation_time(build_graph(GraphKind::Chain, {.N = 4}), 0, false, -1.0).t == 0.0);
}

TEST_CASE("glued-trees traversal time matches a dense expm scan") {
  const Graph g = build_graph(GraphKind::GluedTrees, {.h = 2});
  const auto res = glued_trees_traversal_time(2, 0.4);
  const Eigen::MatrixXd a = adjacency(g).dense().real();
  Eigen::VectorXd o = Eigen::VectorXd::Zero(14);
  o[g.layers.back().front()] = 1.0;
  CHECK(res.t == Approx(dense_crossing(a, o, g.layers[0][0], 0.4, false)).margin(1e-9));
  CHECK(res.value >= 0.4);
}

TEST_CASE("unreachable thresholds saturate") {
  try {
    glued_trees_traversal_time(2, 0.999);
    FAIL("expected saturation");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Saturation);
  }
  CHECK_THROWS_AS(graph_kind_from_string("hypercube"), Error);
  CHECK(graph_kind_from_string("glued-trees") == GraphKind::GluedTrees);
}
