#pragma once

#include <vector>

#include "hemb/compiler.hpp"
#include "hemb/schemes.hpp"

namespace hemb {

struct SearchTask {
  int N = 4;
  int d = 2;
  std::vector<int> marked;  ///< 1-based coordinates, first coordinate most significant
  double gamma = 0.5;
  double p_target = 0.0;
  double t_p = 0.0;
};

/// Linear index of a 1-based lattice coordinate in Kronecker order.
std::int64_t lattice_index(int N, const std::vector<int>& v);

SparseHermitian search_hamiltonian(const SearchTask& task);

/// Embedding of |v><v| on the product code: per coordinate, the product of
/// n or (I - n) over the fewest qubits that single out the codeword.
PauliSum embed_oracle(const std::vector<int>& v, Scheme s, int N, int d);

/// Single-axis marker for codeword j (1-based) of a code.
PauliSum codeword_marker(const Code& code, int j);

/// Embedded search Hamiltonian -gamma L - H_v as an artifact on the product code.
EmbeddingArtifact search_embedding(const SearchTask& task, Scheme s);

struct GammaResult {
  double gamma = 0.0;
  double gap = 0.0;
  int iterations = 0;
  bool converged = false;
};

double search_gap(int N, int d, double gamma, const std::vector<int>& marked);
GammaResult optimize_gamma(int N, int d, const std::vector<int>& marked = {}, double tol = 1e-6,
                           int max_iter = 500);

double default_success_probability(int N);

/// min t with |<v|psi(t)>|^2 >= p from the uniform state (grid 1e-3, bisection refinement).
double success_time(int N, int d, double gamma, double p, const std::vector<int>& marked = {});

/// |tr(U_search^dagger P_S U_ebd P_S)| / N^d.
double search_fidelity(const SearchTask& task, Scheme s, double g, double T);

/// Algorithm-2 style unary loader; starts from |0...0>.
Circuit state_prep_unary(const std::vector<double>& amplitudes);
/// Algorithm-3 style one-hot loader; starts from |0...01> (first codeword).
Circuit state_prep_onehot(const std::vector<double>& amplitudes);
/// Sequential Givens (partial-swap) one-hot loader, two Rxx per rotation;
/// starts from |0...01>.
Circuit state_prep_onehot_givens(const std::vector<double>& amplitudes);

/// Places a per-axis circuit on axis `axis` (0 = most significant) of a d-axis register.
Circuit place_on_axis(const Circuit& c, int axis, int d);

}  // namespace hemb
