#pragma once

#include <cstdint>
#include <optional>
#include <tuple>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "hemb/pauli.hpp"

namespace hemb {

using SparseMat = Eigen::SparseMatrix<cplx, Eigen::RowMajor, std::int64_t>;

struct MatrixEntry {
  std::int64_t row = 0;
  std::int64_t col = 0;
  cplx value;
};

/// Hermitian matrix in coordinate form. Only the upper triangle and the
/// diagonal are stored; the full CSR operator is materialized once.
class SparseHermitian {
 public:
  SparseHermitian() = default;
  /// Entries may be given in either triangle; lower entries are conjugated
  /// onto the upper triangle and duplicates are summed.
  SparseHermitian(std::int64_t dim, const std::vector<MatrixEntry>& entries);

  static SparseHermitian from_dense(const Eigen::MatrixXcd& m, double tol = 0.0);
  static SparseHermitian from_dense(const Eigen::MatrixXd& m, double tol = 0.0);
  static SparseHermitian diagonal(const Eigen::VectorXd& d);
  static SparseHermitian identity(std::int64_t dim);
  static SparseHermitian zero(std::int64_t dim) { return SparseHermitian(dim, {}); }

  std::int64_t dim() const { return dim_; }
  const std::vector<MatrixEntry>& entries() const { return upper_; }
  const SparseMat& csr() const { return full_; }
  std::size_t nnz() const { return upper_.size(); }

  cplx at(std::int64_t r, std::int64_t c) const;
  Eigen::MatrixXcd dense() const;
  /// Largest distance |r - c| among nonzero entries.
  std::int64_t bandwidth() const;

  StateVector apply(const StateVector& x) const;

  SparseHermitian operator+(const SparseHermitian& o) const;
  SparseHermitian operator*(double a) const;
  /// Kronecker product (this) (x) other.
  SparseHermitian kron(const SparseHermitian& other) const;

 private:
  std::int64_t dim_ = 0;
  std::vector<MatrixEntry> upper_;
  SparseMat full_;
};

using Observable = SparseHermitian;

/// Dense guard used by every dense eigen-decomposition in the library.
inline constexpr std::int64_t kDenseLimit = 4096;

SparseHermitian pauli_sum_to_matrix(const PauliSum& p);
PauliSum pauli_decompose(const SparseHermitian& a, double tol = 1e-12);

StateVector basis_state(std::int64_t dim, std::int64_t index);
StateVector evolve_exact(const SparseHermitian& h, double t, const StateVector& psi0);

/// Largest |eigenvalue|.
double spectral_norm(const SparseHermitian& h, double tol = 1e-9);

/// Extremal eigenvalues (ascending) of a Hermitian matrix; dense below the
/// dense limit, Lanczos above it.
std::pair<double, double> extremal_eigenvalues(const SparseHermitian& h, double tol = 1e-9);

SparseHermitian restrict(const SparseHermitian& h, const std::vector<std::uint64_t>& codewords);
Eigen::MatrixXcd restrict_dense(const SparseHermitian& h, const std::vector<std::uint64_t>& rows,
                                const std::vector<std::uint64_t>& cols);

double expectation(const SparseHermitian& o, const StateVector& psi);

/// Reusable propagator exp(-iHt). Dense eigendecomposition below the dense
/// limit and a restarted Lanczos exponential above it.
class ExactEvolver {
 public:
  explicit ExactEvolver(const SparseHermitian& h);
  StateVector evolve(double t, const StateVector& psi0) const;
  bool dense() const { return dense_; }
  const Eigen::VectorXd& eigenvalues() const { return evals_; }
  const Eigen::MatrixXcd& eigenvectors() const { return evecs_; }

 private:
  SparseHermitian h_;
  bool dense_ = false;
  Eigen::VectorXd evals_;
  Eigen::MatrixXcd evecs_;
};

/// Krylov exp(-i H t) v with error control; exposed for testing the large-dim path.
StateVector krylov_expmv(const SparseHermitian& h, double t, const StateVector& v, int krylov_dim = 30,
                         double tol = 1e-12);

}  // namespace hemb
