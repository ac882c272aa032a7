#include "hemb/schemes.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>

#include <Eigen/Eigenvalues>

#include "hemb/errors.hpp"

namespace hemb {

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::Unary: return "unary";
    case Scheme::Antiferromagnetic: return "antiferromagnetic";
    case Scheme::CirculantUnary: return "circulant-unary";
    case Scheme::CirculantAntiferromagnetic: return "circulant-antiferromagnetic";
    case Scheme::OneHot: return "one-hot";
    case Scheme::PenaltyFreeOneHot: return "penalty-free-one-hot";
  }
  return "unknown";
}

Scheme scheme_from_string(const std::string& name) {
  for (Scheme s : kAllSchemes) {
    if (to_string(s) == name) return s;
  }
  fail(ErrorKind::Input, "unknown scheme '" + name + "'");
}

bool is_circulant(Scheme s) {
  return s == Scheme::CirculantUnary || s == Scheme::CirculantAntiferromagnetic;
}

bool is_one_hot(Scheme s) { return s == Scheme::OneHot || s == Scheme::PenaltyFreeOneHot; }

std::string Code::word_string(int j) const {
  if (j < 1 || j > n) fail(ErrorKind::Input, "codeword index out of range");
  std::string out(q, '0');
  for (int b = 0; b < q; ++b) {
    if ((words[j - 1] >> b) & 1U) out[q - 1 - b] = '1';
  }
  return out;
}

int Code::index_of(std::uint64_t basis) const {
  auto it = std::find(words.begin(), words.end(), basis);
  return it == words.end() ? -1 : static_cast<int>(it - words.begin());
}

namespace {

void check_n(Scheme s, int n) {
  if (n < 1) fail(ErrorKind::Input, "logical dimension must be positive");
  if (is_circulant(s) && (n % 2 != 0 || n < 2)) {
    fail(ErrorKind::SchemeConstraint, to_string(s) + " requires an even dimension, got " + std::to_string(n));
  }
  if (qubit_count(s, n) > 62) fail(ErrorKind::Capacity, "code needs more than 62 qubits");
}

std::uint64_t alternating_from_zero(int q) {
  std::uint64_t w = 0;
  for (int b = 1; b < q; b += 2) w |= std::uint64_t{1} << b;
  return w;
}

PauliString zz(int q, int a, int b) {
  PauliString p = PauliString::single(q, a, 'Z');
  p.z |= std::uint64_t{1} << b;
  return p;
}

}  // namespace

int qubit_count(Scheme s, int n) {
  switch (s) {
    case Scheme::Unary:
    case Scheme::Antiferromagnetic: return std::max(n - 1, 1);
    case Scheme::CirculantUnary:
    case Scheme::CirculantAntiferromagnetic: return n / 2;
    case Scheme::OneHot:
    case Scheme::PenaltyFreeOneHot: return n;
  }
  return 0;
}

Code make_code(Scheme s, int n) {
  check_n(s, n);
  Code c{n, qubit_count(s, n), {}};
  const std::uint64_t all = (c.q >= 64) ? ~std::uint64_t{0} : ((std::uint64_t{1} << c.q) - 1);
  switch (s) {
    case Scheme::Unary:
      for (int j = 1; j <= n; ++j) c.words.push_back((std::uint64_t{1} << (j - 1)) - 1);
      break;
    case Scheme::Antiferromagnetic: {
      std::uint64_t w = alternating_from_zero(c.q);
      c.words.push_back(w);
      for (int j = 2; j <= n; ++j) {
        w ^= std::uint64_t{1} << (j - 2);
        c.words.push_back(w);
      }
      break;
    }
    case Scheme::CirculantUnary:
    case Scheme::CirculantAntiferromagnetic: {
      std::uint64_t w = (s == Scheme::CirculantUnary) ? 0 : alternating_from_zero(c.q);
      c.words.push_back(w);
      for (int j = 2; j <= n / 2; ++j) {
        w ^= std::uint64_t{1} << (j - 2);
        c.words.push_back(w);
      }
      for (int j = n / 2 + 1; j <= n; ++j) c.words.push_back(~c.words[j - n / 2 - 1] & all);
      break;
    }
    case Scheme::OneHot:
    case Scheme::PenaltyFreeOneHot:
      for (int j = 1; j <= n; ++j) c.words.push_back(std::uint64_t{1} << (j - 1));
      break;
  }
  return c;
}

PauliSum penalty_hamiltonian(Scheme s, int n, OneHotPenalty form) {
  check_n(s, n);
  const int q = qubit_count(s, n);
  PauliSum h(q);
  switch (s) {
    case Scheme::Unary:
      if (n == 1) {
        h.add(1.0, PauliString::single(q, 0, 'Z'));
        break;
      }
      for (int j = 0; j + 1 < q; ++j) h.add(-1.0, zz(q, j, j + 1));
      h.add(1.0, PauliString::single(q, 0, 'Z'));
      h.add(-1.0, PauliString::single(q, q - 1, 'Z'));
      break;
    case Scheme::Antiferromagnetic:
      if (n == 1) {
        h.add(1.0, PauliString::single(q, 0, 'Z'));
        break;
      }
      for (int j = 0; j + 1 < q; ++j) h.add(1.0, zz(q, j, j + 1));
      h.add(1.0, PauliString::single(q, 0, 'Z'));
      h.add((n - 1) % 2 == 0 ? 1.0 : -1.0, PauliString::single(q, q - 1, 'Z'));
      break;
    case Scheme::CirculantUnary:
      for (int j = 0; j + 1 < q; ++j) h.add(-1.0, zz(q, j, j + 1));
      h.add(1.0, zz(q, q - 1, 0));
      break;
    case Scheme::CirculantAntiferromagnetic:
      for (int j = 0; j + 1 < q; ++j) h.add(1.0, zz(q, j, j + 1));
      h.add((n / 2) % 2 == 0 ? -1.0 : 1.0, zz(q, q - 1, 0));
      break;
    case Scheme::OneHot:
      if (form == OneHotPenalty::SumZ) {
        for (int j = 0; j < q; ++j) h.add(1.0, PauliString::single(q, j, 'Z'));
      } else {
        PauliSum count(q, -1.0);
        for (int j = 0; j < q; ++j) count = count + PauliSum::number_op(q, j);
        h = count * count;
      }
      break;
    case Scheme::PenaltyFreeOneHot: break;
  }
  return h.normalize();
}

PauliSum EmbeddingArtifact::hamiltonian(double g) const {
  if (penalty_free || g == 0.0) return q_op;
  PauliSum pen = h_pen * g;
  pen.add_offset(-g * pen_code_energy);
  return (pen + q_op).normalize();
}

std::optional<std::vector<double>> circulant_first_row(const SparseHermitian& a) {
  const std::int64_t n = a.dim();
  std::vector<double> row(n, 0.0);
  for (std::int64_t k = 0; k < n; ++k) {
    const cplx v = a.at(0, k);
    if (v.imag() != 0.0) return std::nullopt;
    row[k] = v.real();
  }
  for (std::int64_t r = 0; r < n; ++r) {
    for (std::int64_t c = 0; c < n; ++c) {
      if (a.at(r, c) != cplx(row[((c - r) % n + n) % n], 0.0)) return std::nullopt;
    }
  }
  return row;
}

namespace {

bool code_is_ground_space(const PauliSum& h, const Code& code, double& energy) {
  energy = h.diagonal_value(code.words[0]);
  for (auto w : code.words) {
    if (std::abs(h.diagonal_value(w) - energy) > 1e-12) return false;
  }
  if (h.qubits() > 22) return true;
  const std::uint64_t dim = std::uint64_t{1} << h.qubits();
  const Eigen::VectorXd d = diagonal_values(h);
  std::size_t count = 0;
  for (std::uint64_t b = 0; b < dim; ++b) {
    const double v = d[static_cast<Eigen::Index>(b)];
    if (v < energy - 1e-12) return false;
    if (std::abs(v - energy) <= 1e-12) ++count;
  }
  return count == code.words.size();
}

void add_offdiagonal_mask(PauliSum& q, std::uint64_t w_lo, std::uint64_t w_hi, cplx v) {
  const int nq = q.qubits();
  const std::uint64_t mask = w_lo ^ w_hi;
  if (v.real() != 0.0) q.add(v.real(), PauliString{nq, mask, 0});
  if (v.imag() != 0.0) {
    const int s = std::countr_zero(mask);
    const std::uint64_t bit = std::uint64_t{1} << s;
    const double sign = (w_lo & bit) ? -1.0 : 1.0;
    q.add(-v.imag() * sign, PauliString{nq, mask, bit});
  }
}

void add_number_diagonal(PauliSum& q, int site, double coeff, bool flipped) {
  const int nq = q.qubits();
  if (flipped) {
    q.add_offset(coeff);
    q = q - PauliSum::number_op(nq, site) * coeff;
  } else {
    q = q + PauliSum::number_op(nq, site) * coeff;
  }
}

}  // namespace

EmbeddingArtifact embed_matrix(const SparseHermitian& a, Scheme s, const EmbedOptions& opt) {
  const int n = static_cast<int>(a.dim());
  EmbeddingArtifact art;
  art.label = to_string(s);
  art.scheme = s;
  art.one_hot_form = opt.one_hot_form;
  art.code = make_code(s, n);
  art.h_pen = penalty_hamiltonian(s, n, opt.one_hot_form);
  art.penalty_free = (s == Scheme::PenaltyFreeOneHot);
  const int q = art.code.q;
  const auto& w = art.code.words;
  PauliSum qop(q);

  switch (s) {
    case Scheme::Unary:
    case Scheme::Antiferromagnetic: {
      double prev = a.at(0, 0).real();
      qop.add_offset(prev);
      for (int j = 1; j < n; ++j) {
        const double cur = a.at(j, j).real();
        const bool flipped = (w[0] >> (j - 1)) & 1U;
        if (cur != prev) add_number_diagonal(qop, j - 1, cur - prev, flipped);
        prev = cur;
      }
      for (const auto& e : a.entries()) {
        if (e.row != e.col) add_offdiagonal_mask(qop, w[e.row], w[e.col], e.value);
      }
      break;
    }
    case Scheme::OneHot:
      for (const auto& e : a.entries()) {
        if (e.row == e.col) {
          qop = qop + PauliSum::number_op(q, static_cast<int>(e.row)) * e.value.real();
        } else {
          add_offdiagonal_mask(qop, w[e.row], w[e.col], e.value);
        }
      }
      break;
    case Scheme::PenaltyFreeOneHot:
      for (const auto& e : a.entries()) {
        const int r = static_cast<int>(e.row), c = static_cast<int>(e.col);
        if (r == c) {
          qop = qop + PauliSum::number_op(q, r) * e.value.real();
          continue;
        }
        const std::uint64_t br = std::uint64_t{1} << r, bc = std::uint64_t{1} << c;
        const double re = e.value.real(), im = e.value.imag();
        if (re != 0.0) {
          qop.add(0.5 * re, PauliString{q, br | bc, 0});
          qop.add(0.5 * re, PauliString{q, br | bc, br | bc});
        }
        if (im != 0.0) {
          qop.add(0.5 * im, PauliString{q, br | bc, br});   // X_c Y_r
          qop.add(-0.5 * im, PauliString{q, br | bc, bc});  // Y_c X_r
        }
      }
      break;
    case Scheme::CirculantUnary:
    case Scheme::CirculantAntiferromagnetic: {
      auto row = circulant_first_row(a);
      if (!row) fail(ErrorKind::Structure, to_string(s) + " requires a real symmetric circulant matrix");
      for (int k = 1; k < n; ++k) {
        if ((*row)[k] != (*row)[n - k]) {
          fail(ErrorKind::Structure, to_string(s) + " requires a real symmetric circulant matrix");
        }
      }
      qop.add_offset((*row)[0]);
      for (int k = 1; k <= n / 2; ++k) {
        const double v = (*row)[k];
        if (v == 0.0) continue;
        std::set<std::uint64_t> masks;
        for (int j = 0; j < n; ++j) masks.insert(w[j] ^ w[(j + k) % n]);
        for (auto m : masks) qop.add(v, PauliString{q, m, 0});
      }
      break;
    }
  }
  art.q_op = qop.normalize(opt.tol);
  art.code_is_ground = code_is_ground_space(art.h_pen, art.code, art.pen_code_energy);
  if (art.penalty_free) art.code_is_ground = true;
  return art;
}

EmbeddingArtifact artifact_with_q(const EmbeddingArtifact& base, PauliSum q_op, const std::string& label) {
  if (q_op.qubits() != base.qubits()) fail(ErrorKind::Shape, "operator width does not match the code");
  EmbeddingArtifact out = base;
  out.q_op = std::move(q_op.normalize());
  out.label = label;
  return out;
}

namespace {

double rect_norm(const Eigen::MatrixXcd& r) {
  if (r.size() == 0) return 0.0;
  const Eigen::MatrixXcd g = r.adjoint() * r;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

}  // namespace

ValidationReport validate_embedding(const EmbeddingArtifact& art, const SparseHermitian& a, double g) {
  ValidationReport rep;
  if (a.dim() != art.code.n) {
    rep.failures.push_back("logical dimension mismatch");
    rep.restriction_error = INFINITY;
    return rep;
  }
  if (art.qubits() > 20) fail(ErrorKind::Capacity, "validate_embedding supports at most 20 qubits");
  const SparseHermitian qm = pauli_sum_to_matrix(art.q_op);
  const Eigen::MatrixXcd restricted = restrict_dense(qm, art.code.words, art.code.words);
  rep.restriction_error = (restricted - a.dense()).cwiseAbs().maxCoeff();
  if (rep.restriction_error > 1e-10) rep.failures.push_back("restriction differs from target");

  double e0 = 0.0;
  rep.ground_space_ok = art.penalty_free || code_is_ground_space(art.h_pen, art.code, e0);
  if (!rep.ground_space_ok && art.code_is_ground) rep.failures.push_back("code is not the ground space of h_pen");

  std::vector<std::uint64_t> comp;
  const std::uint64_t dim = std::uint64_t{1} << art.qubits();
  for (std::uint64_t b = 0; b < dim; ++b) {
    if (art.code.index_of(b) < 0) comp.push_back(b);
  }
  const SparseHermitian hm = pauli_sum_to_matrix(art.hamiltonian(g));
  rep.leakage_norm = rect_norm(restrict_dense(hm, comp, art.code.words));
  rep.invariant_subspace = rep.leakage_norm == 0.0;
  if (art.penalty_free && !rep.invariant_subspace) rep.failures.push_back("penalty-free leakage block is nonzero");
  return rep;
}

}  // namespace hemb
