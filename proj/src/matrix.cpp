#include "hemb/matrix.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <random>

#include <Eigen/Eigenvalues>

#include "hemb/errors.hpp"

namespace hemb {

SparseHermitian::SparseHermitian(std::int64_t dim, const std::vector<MatrixEntry>& entries)
    : dim_(dim) {
  if (dim < 1) fail(ErrorKind::Shape, "matrix dimension must be positive");
  std::map<std::pair<std::int64_t, std::int64_t>, cplx> acc;
  for (const auto& e : entries) {
    if (e.row < 0 || e.col < 0 || e.row >= dim || e.col >= dim) {
      fail(ErrorKind::Input, "matrix entry index out of range");
    }
    if (e.row <= e.col) {
      acc[{e.row, e.col}] += e.value;
    } else {
      acc[{e.col, e.row}] += std::conj(e.value);
    }
  }
  std::vector<Eigen::Triplet<cplx, std::int64_t>> trips;
  trips.reserve(2 * acc.size());
  for (auto& [rc, v] : acc) {
    if (v == cplx(0.0)) continue;
    if (rc.first == rc.second) v = cplx(v.real(), 0.0);
    upper_.push_back({rc.first, rc.second, v});
    trips.emplace_back(rc.first, rc.second, v);
    if (rc.first != rc.second) trips.emplace_back(rc.second, rc.first, std::conj(v));
  }
  full_.resize(dim, dim);
  full_.setFromTriplets(trips.begin(), trips.end());
  full_.makeCompressed();
}

SparseHermitian SparseHermitian::from_dense(const Eigen::MatrixXcd& m, double tol) {
  if (m.rows() != m.cols()) fail(ErrorKind::Shape, "matrix must be square");
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, m.cwiseAbs().maxCoeff())) {
    fail(ErrorKind::Input, "matrix is not Hermitian");
  }
  std::vector<MatrixEntry> e;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = r; c < m.cols(); ++c) {
      if (std::abs(m(r, c)) > tol) e.push_back({r, c, m(r, c)});
    }
  }
  return SparseHermitian(m.rows(), e);
}

SparseHermitian SparseHermitian::from_dense(const Eigen::MatrixXd& m, double tol) {
  return from_dense(Eigen::MatrixXcd(m.cast<cplx>()), tol);
}

SparseHermitian SparseHermitian::diagonal(const Eigen::VectorXd& d) {
  std::vector<MatrixEntry> e;
  for (Eigen::Index i = 0; i < d.size(); ++i) e.push_back({i, i, d[i]});
  return SparseHermitian(d.size(), e);
}

SparseHermitian SparseHermitian::identity(std::int64_t dim) {
  return diagonal(Eigen::VectorXd::Ones(dim));
}

cplx SparseHermitian::at(std::int64_t r, std::int64_t c) const { return full_.coeff(r, c); }

Eigen::MatrixXcd SparseHermitian::dense() const {
  if (dim_ > 4 * kDenseLimit) fail(ErrorKind::Capacity, "matrix too large for dense form");
  return Eigen::MatrixXcd(full_);
}

std::int64_t SparseHermitian::bandwidth() const {
  std::int64_t b = 0;
  for (const auto& e : upper_) b = std::max(b, e.col - e.row);
  return b;
}

StateVector SparseHermitian::apply(const StateVector& x) const {
  if (x.size() != dim_) fail(ErrorKind::Shape, "vector dimension does not match matrix");
  return full_ * x;
}

SparseHermitian SparseHermitian::operator+(const SparseHermitian& o) const {
  if (o.dim_ != dim_) fail(ErrorKind::Shape, "cannot add matrices of different dimension");
  std::vector<MatrixEntry> e = upper_;
  e.insert(e.end(), o.upper_.begin(), o.upper_.end());
  return SparseHermitian(dim_, e);
}

SparseHermitian SparseHermitian::operator*(double a) const {
  std::vector<MatrixEntry> e = upper_;
  for (auto& x : e) x.value *= a;
  return SparseHermitian(dim_, e);
}

SparseHermitian SparseHermitian::kron(const SparseHermitian& other) const {
  std::vector<MatrixEntry> e;
  const std::int64_t m = other.dim_;
  for (int k1 = 0; k1 < full_.outerSize(); ++k1) {
    for (SparseMat::InnerIterator a(full_, k1); a; ++a) {
      for (int k2 = 0; k2 < other.full_.outerSize(); ++k2) {
        for (SparseMat::InnerIterator b(other.full_, k2); b; ++b) {
          const std::int64_t r = a.row() * m + b.row();
          const std::int64_t c = a.col() * m + b.col();
          if (r <= c) e.push_back({r, c, a.value() * b.value()});
        }
      }
    }
  }
  return SparseHermitian(dim_ * m, e);
}

SparseHermitian pauli_sum_to_matrix(const PauliSum& p) {
  if (p.qubits() > 24) fail(ErrorKind::Capacity, "pauli_sum_to_matrix supports at most 24 qubits");
  const std::uint64_t dim = std::uint64_t{1} << p.qubits();
  std::vector<MatrixEntry> e;
  e.reserve(dim * (p.size() / 2 + 1));
  if (p.offset() != 0.0) {
    for (std::uint64_t b = 0; b < dim; ++b) e.push_back({(std::int64_t)b, (std::int64_t)b, p.offset()});
  }
  for (const auto& t : p.terms()) {
    for (std::uint64_t b = 0; b < dim; ++b) {
      const std::uint64_t r = b ^ t.string.x;
      if (r > b) continue;
      e.push_back({(std::int64_t)r, (std::int64_t)b, t.coeff * t.string.phase(b)});
    }
  }
  return SparseHermitian(static_cast<std::int64_t>(dim), e);
}

PauliSum pauli_decompose(const SparseHermitian& a, double tol) {
  const std::int64_t dim = a.dim();
  if (dim < 1 || (dim & (dim - 1)) != 0) fail(ErrorKind::Shape, "pauli_decompose needs a power-of-two dimension");
  const int q = std::countr_zero(static_cast<std::uint64_t>(dim));
  if (q > 12) fail(ErrorKind::Capacity, "pauli_decompose supports at most 12 qubits");
  // Tr(A P) = sum_b phase_P(b) A[b, b ^ x]; group the full entry list by x = row ^ col.
  std::map<std::uint64_t, std::vector<std::pair<std::uint64_t, cplx>>> by_x;
  const SparseMat& m = a.csr();
  for (int r = 0; r < m.outerSize(); ++r) {
    for (SparseMat::InnerIterator it(m, r); it; ++it) {
      const auto row = static_cast<std::uint64_t>(it.row());
      const auto col = static_cast<std::uint64_t>(it.col());
      by_x[row ^ col].emplace_back(row, it.value());
    }
  }
  PauliSum out(q);
  const double norm = 1.0 / static_cast<double>(dim);
  for (const auto& [x, list] : by_x) {
    for (std::uint64_t z = 0; z < static_cast<std::uint64_t>(dim); ++z) {
      const PauliString p{q, x, z};
      cplx tr = 0.0;
      for (const auto& [row, v] : list) tr += p.phase(row) * v;
      tr *= norm;
      if (std::abs(tr) > tol) out.add(tr.real(), p);
    }
  }
  return out.normalize(tol);
}

StateVector basis_state(std::int64_t dim, std::int64_t index) {
  if (index < 0 || index >= dim) fail(ErrorKind::Input, "basis index out of range");
  StateVector v = StateVector::Zero(dim);
  v[index] = 1.0;
  return v;
}

StateVector krylov_expmv(const SparseHermitian& h, double t, const StateVector& v, int krylov_dim,
                         double tol) {
  const std::int64_t n = h.dim();
  if (v.size() != n) fail(ErrorKind::Shape, "state dimension does not match Hamiltonian");
  StateVector w = v;
  const double vnorm = v.norm();
  if (vnorm == 0.0 || t == 0.0) return w;
  const int m_max = static_cast<int>(std::min<std::int64_t>(krylov_dim, n));
  double remaining = t;
  double tau = t;
  while (std::abs(remaining) > 0.0) {
    const double beta0 = w.norm();
    std::vector<StateVector> basis;
    basis.push_back(w / beta0);
    std::vector<double> alpha, beta;
    int m = 0;
    bool breakdown = false;
    double beta_last = 0.0;
    for (; m < m_max; ++m) {
      StateVector u = h.apply(basis[m]);
      const double a = basis[m].dot(u).real();
      u -= a * basis[m];
      if (m > 0) u -= beta.back() * basis[m - 1];
      for (const auto& b : basis) u -= b.dot(u) * b;  // full reorthogonalisation
      alpha.push_back(a);
      const double bn = u.norm();
      beta_last = bn;
      if (bn < 1e-14 * std::max(1.0, std::abs(a))) {
        breakdown = true;
        ++m;
        break;
      }
      if (m + 1 < m_max) {
        beta.push_back(bn);
        basis.push_back(u / bn);
      }
    }
    const int k = static_cast<int>(alpha.size());
    Eigen::MatrixXd tmat = Eigen::MatrixXd::Zero(k, k);
    for (int i = 0; i < k; ++i) tmat(i, i) = alpha[i];
    for (int i = 0; i + 1 < k; ++i) tmat(i, i + 1) = tmat(i + 1, i) = beta[i];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tmat);
    for (;;) {
      const double step = std::abs(tau) < std::abs(remaining) ? tau : remaining;
      Eigen::VectorXcd phases(k);
      for (int i = 0; i < k; ++i) phases[i] = std::polar(1.0, -step * es.eigenvalues()[i]);
      const Eigen::VectorXcd c =
          es.eigenvectors().cast<cplx>() * (phases.asDiagonal() * es.eigenvectors().row(0).transpose().cast<cplx>());
      const double err = breakdown ? 0.0 : beta0 * beta_last * std::abs(c[k - 1]) * std::abs(step);
      if (err <= tol * vnorm || std::abs(step) < 1e-14) {
        StateVector next = StateVector::Zero(n);
        for (int i = 0; i < k; ++i) next += (beta0 * c[i]) * basis[i];
        w = next;
        remaining -= step;
        if (std::abs(remaining) < 1e-15 * std::abs(t)) remaining = 0.0;
        if (err < 0.01 * tol * vnorm) tau = step * 2.0;
        break;
      }
      tau = step / 2.0;
    }
  }
  return w;
}

ExactEvolver::ExactEvolver(const SparseHermitian& h) : h_(h), dense_(h.dim() <= kDenseLimit) {
  if (dense_) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h_.dense());
    evals_ = es.eigenvalues();
    evecs_ = es.eigenvectors();
  }
}

StateVector ExactEvolver::evolve(double t, const StateVector& psi0) const {
  if (psi0.size() != h_.dim()) fail(ErrorKind::Shape, "state dimension does not match Hamiltonian");
  if (t == 0.0) return psi0;
  if (!dense_) return krylov_expmv(h_, t, psi0);
  Eigen::VectorXcd c = evecs_.adjoint() * psi0;
  for (Eigen::Index i = 0; i < c.size(); ++i) c[i] *= std::polar(1.0, -t * evals_[i]);
  return evecs_ * c;
}

StateVector evolve_exact(const SparseHermitian& h, double t, const StateVector& psi0) {
  if (psi0.size() != h.dim()) fail(ErrorKind::Shape, "state dimension does not match Hamiltonian");
  if (t == 0.0) return psi0;
  if (h.dim() > kDenseLimit) return krylov_expmv(h, t, psi0);
  return ExactEvolver(h).evolve(t, psi0);
}

namespace {

std::pair<double, double> lanczos_extremes(const SparseHermitian& h, double tol) {
  const std::int64_t n = h.dim();
  std::mt19937_64 rng(0x5EEDULL);
  std::normal_distribution<double> nd;
  StateVector v(n);
  for (std::int64_t i = 0; i < n; ++i) v[i] = cplx(nd(rng), nd(rng));
  v.normalize();
  std::vector<StateVector> basis{v};
  std::vector<double> alpha, beta;
  double lo_prev = 0, hi_prev = 0, lo = 0, hi = 0;
  const int m_max = static_cast<int>(std::min<std::int64_t>(n, 400));
  for (int m = 0; m < m_max; ++m) {
    StateVector u = h.apply(basis[m]);
    const double a = basis[m].dot(u).real();
    u -= a * basis[m];
    if (m > 0) u -= beta.back() * basis[m - 1];
    for (const auto& b : basis) u -= b.dot(u) * b;
    alpha.push_back(a);
    const double bn = u.norm();
    const int k = static_cast<int>(alpha.size());
    Eigen::MatrixXd tmat = Eigen::MatrixXd::Zero(k, k);
    for (int i = 0; i < k; ++i) tmat(i, i) = alpha[i];
    for (int i = 0; i + 1 < k; ++i) tmat(i, i + 1) = tmat(i + 1, i) = beta[i];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tmat, Eigen::EigenvaluesOnly);
    lo = es.eigenvalues()[0];
    hi = es.eigenvalues()[k - 1];
    const double scale = std::max({1.0, std::abs(lo), std::abs(hi)});
    if (m > 5 && std::abs(lo - lo_prev) < tol * scale && std::abs(hi - hi_prev) < tol * scale) break;
    if (bn < 1e-13) break;
    lo_prev = lo;
    hi_prev = hi;
    beta.push_back(bn);
    basis.push_back(u / bn);
  }
  return {lo, hi};
}

}  // namespace

std::pair<double, double> extremal_eigenvalues(const SparseHermitian& h, double tol) {
  if (h.dim() <= kDenseLimit) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.dense(), Eigen::EigenvaluesOnly);
    return {es.eigenvalues()[0], es.eigenvalues()[h.dim() - 1]};
  }
  return lanczos_extremes(h, tol);
}

double spectral_norm(const SparseHermitian& h, double tol) {
  if (h.nnz() == 0) return 0.0;
  auto [lo, hi] = extremal_eigenvalues(h, tol);
  return std::max(std::abs(lo), std::abs(hi));
}

SparseHermitian restrict(const SparseHermitian& h, const std::vector<std::uint64_t>& codewords) {
  std::vector<std::uint64_t> sorted = codewords;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    fail(ErrorKind::Input, "restrict: duplicate codeword index");
  }
  for (auto c : codewords) {
    if (c >= static_cast<std::uint64_t>(h.dim())) fail(ErrorKind::Input, "restrict: index out of range");
  }
  std::map<std::uint64_t, std::int64_t> pos;
  for (std::size_t i = 0; i < codewords.size(); ++i) pos[codewords[i]] = static_cast<std::int64_t>(i);
  std::vector<MatrixEntry> e;
  for (const auto& x : h.entries()) {
    auto r = pos.find(static_cast<std::uint64_t>(x.row));
    auto c = pos.find(static_cast<std::uint64_t>(x.col));
    if (r == pos.end() || c == pos.end()) continue;
    e.push_back({r->second, c->second, x.value});
  }
  return SparseHermitian(static_cast<std::int64_t>(codewords.size()), e);
}

Eigen::MatrixXcd restrict_dense(const SparseHermitian& h, const std::vector<std::uint64_t>& rows,
                                const std::vector<std::uint64_t>& cols) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(rows.size(), cols.size());
  std::map<std::uint64_t, std::int64_t> cpos;
  for (std::size_t i = 0; i < cols.size(); ++i) cpos[cols[i]] = static_cast<std::int64_t>(i);
  const SparseMat& m = h.csr();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (SparseMat::InnerIterator it(m, static_cast<std::int64_t>(rows[i])); it; ++it) {
      auto c = cpos.find(static_cast<std::uint64_t>(it.col()));
      if (c != cpos.end()) out(static_cast<Eigen::Index>(i), c->second) = it.value();
    }
  }
  return out;
}

double expectation(const SparseHermitian& o, const StateVector& psi) {
  return psi.dot(o.apply(psi)).real();
}

}  // namespace hemb
