#pragma once

// Independent dense oracles shared by the unit tests. They build operators
// from 2x2 Kronecker factors and never call the bitmask code paths.

#include <cstdint>
#include <random>
#include <vector>
#include <string>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

namespace oracle {

using Mat = Eigen::MatrixXcd;
using cd = std::complex<double>;

inline Mat letter(char c) {
  Mat m(2, 2);
  switch (c) {
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, cd(0, -1), cd(0, 1), 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: m << 1, 0, 0, 1; break;
  }
  return m;
}

inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  }
  return out;
}

/// Leftmost letter is the highest qubit, matching the printed convention.
inline Mat pauli(const std::string& letters) {
  Mat m = Mat::Identity(1, 1);
  for (char c : letters) m = kron(m, letter(c));
  return m;
}

inline Mat number_op(int q, int site) {
  std::string s(q, 'I');
  s[q - 1 - site] = 'Z';
  return 0.5 * (Mat::Identity(1 << q, 1 << q) - pauli(s));
}

inline Mat expm_herm(const Mat& h, double t) { return (cd(0, -t) * h).exp(); }

inline Eigen::MatrixXd random_symmetric(int n, std::mt19937_64& rng, double density = 1.0) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> keep(0.0, 1.0);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      if (i != j && keep(rng) > density) continue;
      a(i, j) = a(j, i) = u(rng);
    }
  }
  return a;
}

}  // namespace oracle

namespace oracle {

/// Dense restriction <w_a| M |w_b> of a q-qubit operator onto a list of basis states.
inline Mat restrict_to(const Mat& m, const std::vector<std::uint64_t>& words) {
  const auto n = static_cast<Eigen::Index>(words.size());
  Mat out(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) out(a, b) = m(static_cast<Eigen::Index>(words[a]), static_cast<Eigen::Index>(words[b]));
  }
  return out;
}

/// Path Laplacian: -1 on the diagonal ends, -2 inside, +1 off-diagonal (A - D).
inline Eigen::MatrixXd chain_laplacian(int n) {
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j + 1 < n; ++j) {
    l(j, j + 1) = l(j + 1, j) = 1.0;
    l(j, j) -= 1.0;
    l(j + 1, j + 1) -= 1.0;
  }
  return l;
}

inline Eigen::MatrixXd random_circulant(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> row(n);
  for (int k = 0; k <= n / 2; ++k) row[k] = row[(n - k) % n] = u(rng);
  Eigen::MatrixXd a(n, n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) a(r, c) = row[((c - r) % n + n) % n];
  }
  return a;
}

inline Eigen::MatrixXcd random_banded(int n, int band, std::mt19937_64& rng, bool complex_entries) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    a(i, i) = u(rng);
    for (int j = i + 1; j < n && j <= i + band; ++j) {
      a(i, j) = cd(u(rng), complex_entries ? u(rng) : 0.0);
      a(j, i) = std::conj(a(i, j));
    }
  }
  return a;
}

}  // namespace oracle
