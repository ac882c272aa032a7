#include "hemb/pauli.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "hemb/errors.hpp"

namespace hemb {

namespace {

cplx i_pow(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

void check_site(int q, int site) {
  if (site < 0 || site >= q || site >= 64) {
    fail(ErrorKind::Input, "qubit index " + std::to_string(site) + " out of range for " +
                               std::to_string(q) + " qubits");
  }
}

}  // namespace

PauliString PauliString::single(int q, int site, char letter) {
  check_site(q, site);
  PauliString p{q, 0, 0};
  const std::uint64_t bit = std::uint64_t{1} << site;
  switch (letter) {
    case 'I': break;
    case 'X': p.x = bit; break;
    case 'Y': p.x = bit; p.z = bit; break;
    case 'Z': p.z = bit; break;
    default: fail(ErrorKind::Input, std::string("unknown Pauli letter ") + letter);
  }
  return p;
}

PauliString PauliString::from_letters(const std::string& letters) {
  const int q = static_cast<int>(letters.size());
  PauliString p{q, 0, 0};
  for (int pos = 0; pos < q; ++pos) {
    const int site = q - 1 - pos;
    const PauliString s = single(q, site, letters[pos]);
    p.x |= s.x;
    p.z |= s.z;
  }
  return p;
}

int PauliString::weight() const { return std::popcount(x | z); }

char PauliString::letter(int site) const {
  const bool bx = (x >> site) & 1U;
  const bool bz = (z >> site) & 1U;
  if (bx && bz) return 'Y';
  if (bx) return 'X';
  if (bz) return 'Z';
  return 'I';
}

std::string PauliString::letters() const {
  std::string s(qubits, 'I');
  for (int site = 0; site < qubits; ++site) s[qubits - 1 - site] = letter(site);
  return s;
}

bool PauliString::commutes_with(const PauliString& o) const {
  return (std::popcount(x & o.z) + std::popcount(z & o.x)) % 2 == 0;
}

cplx PauliString::phase(std::uint64_t basis) const {
  const int ny = std::popcount(x & z);
  const int sign = std::popcount(basis & z);
  return i_pow(ny + 2 * sign);
}

std::pair<cplx, PauliString> multiply(const PauliString& a, const PauliString& b) {
  const int q = std::max(a.qubits, b.qubits);
  PauliString r{q, a.x ^ b.x, a.z ^ b.z};
  const int k = std::popcount(a.x & a.z) + std::popcount(b.x & b.z) - std::popcount(r.x & r.z) +
                2 * std::popcount(a.z & b.x);
  return {i_pow(k), r};
}

void PauliSum::add(double coeff, const PauliString& s) {
  if (s.qubits != qubits_) fail(ErrorKind::Shape, "Pauli string width differs from sum width");
  if (s.is_identity()) {
    offset_ += coeff;
    return;
  }
  terms_.push_back({coeff, s});
}

PauliSum& PauliSum::normalize(double tol) {
  std::sort(terms_.begin(), terms_.end(),
            [](const PauliTerm& a, const PauliTerm& b) { return a.string < b.string; });
  std::vector<PauliTerm> merged;
  merged.reserve(terms_.size());
  for (const auto& t : terms_) {
    if (!merged.empty() && merged.back().string == t.string) {
      merged.back().coeff += t.coeff;
    } else {
      merged.push_back(t);
    }
  }
  std::erase_if(merged, [tol](const PauliTerm& t) { return std::abs(t.coeff) <= tol; });
  terms_ = std::move(merged);
  if (std::abs(offset_) <= tol) offset_ = 0.0;
  return *this;
}

PauliSum PauliSum::operator+(const PauliSum& o) const {
  if (o.qubits_ != qubits_) fail(ErrorKind::Shape, "cannot add Pauli sums of different widths");
  PauliSum r = *this;
  r.offset_ += o.offset_;
  r.terms_.insert(r.terms_.end(), o.terms_.begin(), o.terms_.end());
  return r.normalize();
}

PauliSum PauliSum::operator-(const PauliSum& o) const { return *this + o * -1.0; }

PauliSum PauliSum::operator*(double a) const {
  PauliSum r = *this;
  r.offset_ *= a;
  for (auto& t : r.terms_) t.coeff *= a;
  return r.normalize();
}

PauliSum PauliSum::operator*(const PauliSum& o) const {
  if (o.qubits_ != qubits_) fail(ErrorKind::Shape, "cannot multiply Pauli sums of different widths");
  std::vector<std::pair<cplx, PauliString>> acc;
  auto all_a = terms_;
  all_a.push_back({offset_, PauliString::identity(qubits_)});
  auto all_b = o.terms_;
  all_b.push_back({o.offset_, PauliString::identity(qubits_)});
  for (const auto& ta : all_a) {
    for (const auto& tb : all_b) {
      auto [ph, s] = multiply(ta.string, tb.string);
      acc.emplace_back(ph * ta.coeff * tb.coeff, s);
    }
  }
  std::sort(acc.begin(), acc.end(), [](const auto& a, const auto& b) { return a.second < b.second; });
  PauliSum r(qubits_);
  for (std::size_t i = 0; i < acc.size();) {
    cplx c = 0.0;
    std::size_t j = i;
    for (; j < acc.size() && acc[j].second == acc[i].second; ++j) c += acc[j].first;
    if (std::abs(c.imag()) > 1e-12) fail(ErrorKind::Input, "operator product is not Hermitian");
    r.add(c.real(), acc[i].second);
    i = j;
  }
  return r.normalize();
}

PauliSum PauliSum::kron(const PauliSum& low) const {
  const int q = qubits_ + low.qubits_;
  const PauliSum a = lifted(q, low.qubits_);
  const PauliSum b = low.lifted(q, 0);
  return a * b;
}

PauliSum PauliSum::lifted(int q_total, int shift) const {
  if (shift < 0 || shift + qubits_ > q_total || q_total > 64) {
    fail(ErrorKind::Shape, "invalid lift of Pauli sum");
  }
  PauliSum r(q_total, offset_);
  for (const auto& t : terms_) {
    r.terms_.push_back({t.coeff, PauliString{q_total, t.string.x << shift, t.string.z << shift}});
  }
  return r;
}

int PauliSum::max_weight() const {
  int w = 0;
  for (const auto& t : terms_) w = std::max(w, t.string.weight());
  return w;
}

bool PauliSum::is_diagonal() const {
  return std::all_of(terms_.begin(), terms_.end(),
                     [](const PauliTerm& t) { return t.string.is_diagonal(); });
}

double PauliSum::one_norm() const {
  double s = 0.0;
  for (const auto& t : terms_) s += std::abs(t.coeff);
  return s;
}

double PauliSum::diagonal_value(std::uint64_t basis) const {
  double v = offset_;
  for (const auto& t : terms_) {
    if (t.string.x != 0) continue;
    v += (std::popcount(basis & t.string.z) % 2 ? -t.coeff : t.coeff);
  }
  return v;
}

void PauliSum::apply(const StateVector& x, StateVector& y) const {
  const std::uint64_t dim = std::uint64_t{1} << qubits_;
  if (static_cast<std::uint64_t>(x.size()) != dim || y.size() != x.size()) {
    fail(ErrorKind::Shape, "statevector dimension does not match Pauli sum");
  }
  if (offset_ != 0.0) y += offset_ * x;
  for (const auto& t : terms_) {
    const auto& p = t.string;
    const int ny = std::popcount(p.x & p.z);
    const cplx base = i_pow(ny) * t.coeff;
    for (std::uint64_t b = 0; b < dim; ++b) {
      const cplx ph = (std::popcount(b & p.z) & 1) ? -base : base;
      y[static_cast<Eigen::Index>(b ^ p.x)] += ph * x[static_cast<Eigen::Index>(b)];
    }
  }
}

PauliSum PauliSum::number_op(int q, int site) {
  PauliSum r(q, 0.5);
  r.add(-0.5, PauliString::single(q, site, 'Z'));
  return r;
}

PauliSum PauliSum::single(int q, int site, char letter, double coeff) {
  PauliSum r(q);
  r.add(coeff, PauliString::single(q, site, letter));
  return r;
}

void apply_pauli_rotation(const PauliString& p, double theta, StateVector& psi) {
  const std::uint64_t dim = static_cast<std::uint64_t>(psi.size());
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  if (p.is_diagonal()) {
    const cplx e_plus(c, -s), e_minus(c, s);
    for (std::uint64_t b = 0; b < dim; ++b) {
      psi[static_cast<Eigen::Index>(b)] *= (std::popcount(b & p.z) & 1) ? e_minus : e_plus;
    }
    return;
  }
  // Pair up b and b^x; each 2x2 block is cos*I - i sin*P restricted to the pair.
  const int ny = std::popcount(p.x & p.z);
  const cplx base = i_pow(ny);
  const std::uint64_t pivot = std::uint64_t{1} << (63 - std::countl_zero(p.x));
  for (std::uint64_t b = 0; b < dim; ++b) {
    if (b & pivot) continue;
    const std::uint64_t b2 = b ^ p.x;
    const cplx ph1 = (std::popcount(b & p.z) & 1) ? -base : base;   // <b2|P|b>
    const cplx ph2 = (std::popcount(b2 & p.z) & 1) ? -base : base;  // <b|P|b2>
    const auto i1 = static_cast<Eigen::Index>(b), i2 = static_cast<Eigen::Index>(b2);
    const cplx a1 = psi[i1], a2 = psi[i2];
    psi[i1] = c * a1 - cplx(0, s) * ph2 * a2;
    psi[i2] = c * a2 - cplx(0, s) * ph1 * a1;
  }
}

Eigen::VectorXd diagonal_values(const PauliSum& diag) {
  if (!diag.is_diagonal()) fail(ErrorKind::FastForward, "Pauli sum is not diagonal");
  const std::uint64_t dim = std::uint64_t{1} << diag.qubits();
  Eigen::VectorXd d = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(dim), diag.offset());
  for (const auto& t : diag.terms()) {
    for (std::uint64_t b = 0; b < dim; ++b) {
      d[static_cast<Eigen::Index>(b)] += (std::popcount(b & t.string.z) & 1) ? -t.coeff : t.coeff;
    }
  }
  return d;
}

void apply_diagonal_phase(const PauliSum& diag, double t, StateVector& psi) {
  const Eigen::VectorXd d = diagonal_values(diag);
  if (d.size() != psi.size()) fail(ErrorKind::Shape, "diagonal phase dimension mismatch");
  for (Eigen::Index b = 0; b < psi.size(); ++b) psi[b] *= std::polar(1.0, -t * d[b]);
}

}  // namespace hemb
