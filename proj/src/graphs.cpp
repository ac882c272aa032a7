#include "hemb/graphs.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <random>
#include <set>

#include <Eigen/Eigenvalues>

#include "hemb/errors.hpp"

namespace hemb {

namespace {

void add_edge(std::set<std::pair<int, int>>& edges, int a, int b) {
  if (a == b) return;
  edges.insert({std::min(a, b), std::max(a, b)});
}

Graph finish(GraphKind kind, int n, const std::set<std::pair<int, int>>& edges) {
  Graph g;
  g.kind = kind;
  g.n = n;
  g.edges.assign(edges.begin(), edges.end());
  return g;
}

Graph lattice(GraphKind kind, int N, int d, bool periodic) {
  if (N < 2 || d < 1) fail(ErrorKind::Input, "lattice requires N >= 2 and d >= 1");
  std::int64_t n = 1;
  for (int k = 0; k < d; ++k) {
    n *= N;
    if (n > (1 << 22)) fail(ErrorKind::Capacity, "lattice has too many vertices");
  }
  std::set<std::pair<int, int>> edges;
  std::vector<std::int64_t> stride(d);
  for (int k = d - 1, s = 1; k >= 0; --k, s *= N) stride[k] = s;
  for (std::int64_t v = 0; v < n; ++v) {
    for (int k = 0; k < d; ++k) {
      const int c = static_cast<int>((v / stride[k]) % N);
      if (c + 1 < N) {
        add_edge(edges, static_cast<int>(v), static_cast<int>(v + stride[k]));
      } else if (periodic) {
        add_edge(edges, static_cast<int>(v), static_cast<int>(v - c * stride[k]));
      }
    }
  }
  return finish(kind, static_cast<int>(n), edges);
}

// Vertex labels follow the W-matrix figure: tree 1 is BFS-indexed from the
// entrance, tree 2 is indexed in reverse BFS order so the exit is the last vertex.
Graph glued_trees(int h, std::optional<std::uint64_t> seed) {
  if (h < 1 || h > 18) fail(ErrorKind::Input, "glued trees require 1 <= h <= 18");
  const int tree = (1 << (h + 1)) - 1;
  const int n = 2 * tree;
  const int m = 1 << h;
  auto second = [&](int b) { return n - 1 - b; };
  std::set<std::pair<int, int>> edges;
  for (int b = 0; 2 * b + 2 < tree; ++b) {
    add_edge(edges, b, 2 * b + 1);
    add_edge(edges, b, 2 * b + 2);
    add_edge(edges, second(b), second(2 * b + 1));
    add_edge(edges, second(b), second(2 * b + 2));
  }
  std::vector<int> leaves1(m), leaves2(m);
  for (int i = 0; i < m; ++i) leaves1[i] = m - 1 + i;
  for (int i = 0; i < m; ++i) leaves2[i] = tree + i;

  if (!seed && h == 2) {
    const int w[4][2] = {{7, 8}, {7, 9}, {8, 10}, {9, 10}};
    for (int i = 0; i < 4; ++i) {
      add_edge(edges, leaves1[i], w[i][0]);
      add_edge(edges, leaves1[i], w[i][1]);
    }
  } else {
    if (seed) {
      std::mt19937_64 rng(*seed);
      std::shuffle(leaves1.begin() + 1, leaves1.end(), rng);
      std::shuffle(leaves2.begin(), leaves2.end(), rng);
    }
    for (int i = 0; i < m; ++i) {
      add_edge(edges, leaves1[i], leaves2[i]);
      add_edge(edges, leaves2[i], leaves1[(i + 1) % m]);
    }
  }
  Graph g = finish(GraphKind::GluedTrees, n, edges);
  for (int depth = 0; depth <= h; ++depth) {
    std::vector<int> layer;
    for (int b = (1 << depth) - 1; b < (1 << (depth + 1)) - 1; ++b) layer.push_back(b);
    g.layers.push_back(layer);
  }
  for (int depth = h; depth >= 0; --depth) {
    std::vector<int> layer;
    for (int b = (1 << depth) - 1; b < (1 << (depth + 1)) - 1; ++b) layer.push_back(second(b));
    std::sort(layer.begin(), layer.end());
    g.layers.push_back(layer);
  }
  return g;
}

}  // namespace

std::vector<int> Graph::degrees() const {
  std::vector<int> deg(n, 0);
  for (auto [a, b] : edges) {
    ++deg[a];
    ++deg[b];
  }
  return deg;
}

Graph build_graph(GraphKind kind, const GraphParams& p) {
  switch (kind) {
    case GraphKind::Chain:
    case GraphKind::Cycle: {
      if (p.N < 2) fail(ErrorKind::Input, "chain and cycle require N >= 2");
      std::set<std::pair<int, int>> edges;
      for (int i = 0; i + 1 < p.N; ++i) add_edge(edges, i, i + 1);
      if (kind == GraphKind::Cycle) add_edge(edges, p.N - 1, 0);
      return finish(kind, p.N, edges);
    }
    case GraphKind::Lattice: return lattice(kind, p.N, p.d, false);
    case GraphKind::PeriodicLattice: return lattice(kind, p.N, p.d, true);
    case GraphKind::BinaryTree: {
      if (p.h < 1 || p.h > 20) fail(ErrorKind::Input, "binary tree requires 1 <= h <= 20");
      const int n = (1 << (p.h + 1)) - 1;
      std::set<std::pair<int, int>> edges;
      for (int b = 0; 2 * b + 2 < n; ++b) {
        add_edge(edges, b, 2 * b + 1);
        add_edge(edges, b, 2 * b + 2);
      }
      Graph g = finish(kind, n, edges);
      for (int depth = 0; depth <= p.h; ++depth) {
        std::vector<int> layer(1 << depth);
        std::iota(layer.begin(), layer.end(), (1 << depth) - 1);
        g.layers.push_back(layer);
      }
      return g;
    }
    case GraphKind::GluedTrees: return glued_trees(p.h, p.gluing_seed);
  }
  fail(ErrorKind::Input, "unknown graph kind");
}

GraphKind graph_kind_from_string(const std::string& s) {
  if (s == "chain") return GraphKind::Chain;
  if (s == "cycle") return GraphKind::Cycle;
  if (s == "lattice") return GraphKind::Lattice;
  if (s == "periodic-lattice") return GraphKind::PeriodicLattice;
  if (s == "binary-tree") return GraphKind::BinaryTree;
  if (s == "glued-trees") return GraphKind::GluedTrees;
  fail(ErrorKind::Input, "unknown graph kind '" + s + "'");
}

SparseHermitian adjacency(const Graph& g) {
  std::vector<MatrixEntry> e;
  e.reserve(g.edges.size());
  for (auto [a, b] : g.edges) e.push_back({a, b, 1.0});
  return SparseHermitian(g.n, e);
}

SparseHermitian laplacian(const Graph& g) {
  std::vector<MatrixEntry> e;
  e.reserve(g.edges.size() + g.n);
  for (auto [a, b] : g.edges) e.push_back({a, b, 1.0});
  const auto deg = g.degrees();
  for (int v = 0; v < g.n; ++v) {
    if (deg[v] != 0) e.push_back({v, v, -static_cast<double>(deg[v])});
  }
  return SparseHermitian(g.n, e);
}

std::vector<int> graph_distances(const Graph& g, int start) {
  if (start < 0 || start >= g.n) fail(ErrorKind::Input, "start vertex out of range");
  std::vector<std::vector<int>> adj(g.n);
  for (auto [a, b] : g.edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::vector<int> dist(g.n, -1);
  std::queue<int> queue;
  dist[start] = 0;
  queue.push(start);
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop();
    for (int w : adj[v]) {
      if (dist[w] < 0) {
        dist[w] = dist[v] + 1;
        queue.push(w);
      }
    }
  }
  return dist;
}

namespace {

/// Evaluates <psi(t)|O|psi(t)> for diagonal O from one eigendecomposition.
class SpectralScan {
 public:
  SpectralScan(const SparseHermitian& h, const StateVector& psi0) {
    if (h.dim() > kDenseLimit) fail(ErrorKind::Capacity, "spectral scan exceeds the dense limit");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.dense());
    evals_ = es.eigenvalues();
    evecs_ = es.eigenvectors();
    coeffs_ = evecs_.adjoint() * psi0;
  }

  StateVector state(double t) const {
    StateVector c = coeffs_;
    for (Eigen::Index k = 0; k < c.size(); ++k) c[k] *= std::exp(cplx(0.0, -evals_[k] * t));
    return evecs_ * c;
  }

  double diagonal_expectation(const Eigen::VectorXd& o, double t) const {
    const StateVector psi = state(t);
    return (psi.cwiseAbs2().array() * o.array()).sum();
  }

 private:
  Eigen::VectorXd evals_;
  Eigen::MatrixXcd evecs_;
  StateVector coeffs_;
};

}  // namespace

CrossingTime propagation_time(const Graph& g, int start, bool use_adjacency, std::optional<double> threshold,
                              double step) {
  const auto dist = graph_distances(g, start);
  Eigen::VectorXd o(g.n);
  for (int v = 0; v < g.n; ++v) {
    if (dist[v] < 0) fail(ErrorKind::Input, "graph is not connected");
    o[v] = dist[v];
  }
  double thr = threshold.value_or(g.kind == GraphKind::BinaryTree
                                      ? std::floor(std::log2(static_cast<double>(g.n))) / 2.0
                                      : g.n / 4.0);
  const SparseHermitian h = use_adjacency ? adjacency(g) : laplacian(g);
  SpectralScan scan(h, basis_state(g.n, start));
  const double t_max = 10.0 * g.n;
  const auto steps = static_cast<std::int64_t>(std::ceil(t_max / step));
  for (std::int64_t k = 0; k <= steps; ++k) {
    const double t = k * step;
    const double value = scan.diagonal_expectation(o, t);
    if (value > thr) return {t, value};
  }
  fail(ErrorKind::Saturation, "propagation threshold not reached before t_max = 10N");
}

StateVector column_state(const Graph& g, int j) {
  if (j < 0 || j >= static_cast<int>(g.layers.size())) fail(ErrorKind::Input, "column index out of range");
  StateVector psi = StateVector::Zero(g.n);
  const double a = 1.0 / std::sqrt(static_cast<double>(g.layers[j].size()));
  for (int v : g.layers[j]) psi[v] = a;
  return psi;
}

CrossingTime glued_trees_traversal_time(int h, double s, double step) {
  if (!(s > 0.0 && s < 1.0)) fail(ErrorKind::Input, "s must lie in (0,1)");
  GraphParams p;
  p.h = h;
  const Graph g = build_graph(GraphKind::GluedTrees, p);
  Eigen::VectorXd exit_proj = Eigen::VectorXd::Zero(g.n);
  exit_proj[g.layers.back().front()] = 1.0;
  SpectralScan scan(adjacency(g), column_state(g, 0));
  const double t_max = 10.0 * g.n;
  const auto steps = static_cast<std::int64_t>(std::ceil(t_max / step));
  for (std::int64_t k = 0; k <= steps; ++k) {
    const double t = k * step;
    const double value = scan.diagonal_expectation(exit_proj, t);
    if (value >= s) return {t, value};
  }
  fail(ErrorKind::Saturation, "exit probability never reaches the requested s");
}

}  // namespace hemb
