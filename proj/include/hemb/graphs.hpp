#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hemb/matrix.hpp"

namespace hemb {

enum class GraphKind { Chain, Cycle, Lattice, PeriodicLattice, BinaryTree, GluedTrees };

struct Graph {
  GraphKind kind = GraphKind::Chain;
  int n = 0;
  std::vector<std::pair<int, int>> edges;  ///< 0-based, first < second, sorted
  std::vector<std::vector<int>> layers;    ///< populated for trees and glued trees

  std::vector<int> degrees() const;
};

struct GraphParams {
  int N = 2;      ///< vertices per axis (chain, cycle, lattices)
  int d = 1;      ///< lattice dimension
  int h = 1;      ///< tree height
  std::optional<std::uint64_t> gluing_seed;  ///< random cycle gluing for glued trees
};

Graph build_graph(GraphKind kind, const GraphParams& p);
GraphKind graph_kind_from_string(const std::string& s);

SparseHermitian adjacency(const Graph& g);
/// L = A_adj - diag(deg).
SparseHermitian laplacian(const Graph& g);

/// BFS distances from a start vertex.
std::vector<int> graph_distances(const Graph& g, int start);

struct CrossingTime {
  double t = 0.0;
  double value = 0.0;
};

/// First grid time (step 0.01) with <O_prop> > threshold; threshold defaults to n/4.
CrossingTime propagation_time(const Graph& g, int start, bool use_adjacency,
                              std::optional<double> threshold = std::nullopt, double step = 0.01);

/// Column state |col j> of a glued-trees graph as an n-vector.
StateVector column_state(const Graph& g, int j);

/// min t on a 0.01 grid with |<col 0| e^{-itA} |col 2h+1>|^2 >= s.
CrossingTime glued_trees_traversal_time(int h, double s, double step = 0.01);

}  // namespace hemb
