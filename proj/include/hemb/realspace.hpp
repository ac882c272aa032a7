#pragma once

#include <utility>

#include "hemb/schemes.hpp"

namespace hemb {

struct FockOperators {
  int levels = 0;
  SparseHermitian x_hat;
  SparseHermitian p2_hat;
  SparseHermitian x2_hat;
};

FockOperators fock_operators(int N);

struct FockEmbeddings {
  PauliSum q_x;
  PauliSum q_p2;
  PauliSum q_x2;
  double dropped_x = 0.0;
  double dropped_p2 = 0.0;
  double dropped_x2 = 0.0;
  EmbeddingArtifact frame;  ///< code and penalty shared by the three operators
};

/// Embeds x, p^2, x^2; identity constants are removed and reported.
FockEmbeddings fock_embeddings(int N, Scheme s);

/// Truncated H = 1/2 p^2 + (a/2) x^2 + b x.
SparseHermitian fock_hamiltonian(int N, double a, double b);

/// Embedded counterpart of fock_hamiltonian (identity constants dropped).
PauliSum fock_hamiltonian_embedded(const FockEmbeddings& e, double a, double b);

/// Closed forms for the vacuum initial state: (<x>_t, <p^2>_t / 2).
std::pair<double, double> harmonic_observables(double a, double b, double t);

/// 1D central-difference second-derivative matrix with h = 1/(N-1).
SparseHermitian fdm_second_derivative(int N);
/// -1/2 (D (x) I + I (x) D) + diag(V), V given row-major on the N x N grid.
SparseHermitian fdm_hamiltonian(int N, const Eigen::VectorXd& V);

}  // namespace hemb
