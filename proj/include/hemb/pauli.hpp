#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace hemb {

using cplx = std::complex<double>;
using StateVector = Eigen::VectorXcd;

/// Phase-free Pauli string on q qubits stored as X and Z bitmasks.
/// Bit j of a mask addresses qubit j+1 in the paper-style 1-based numbering,
/// so the string prints right-to-left: the rightmost letter is qubit 1.
/// A site with both bits set denotes the Hermitian Y, not XZ.
struct PauliString {
  int qubits = 0;
  std::uint64_t x = 0;
  std::uint64_t z = 0;

  static PauliString identity(int q) { return {q, 0, 0}; }
  static PauliString single(int q, int site, char letter);
  static PauliString from_letters(const std::string& letters);

  int weight() const;
  bool is_identity() const { return x == 0 && z == 0; }
  bool is_diagonal() const { return x == 0; }
  char letter(int site) const;
  std::string letters() const;
  std::uint64_t support() const { return x | z; }
  bool commutes_with(const PauliString& other) const;

  /// Matrix element phase: P|b> = phase(b) |b ^ x>.
  cplx phase(std::uint64_t basis) const;

  auto operator<=>(const PauliString& o) const {
    if (auto c = x <=> o.x; c != 0) return c;
    if (auto c = z <=> o.z; c != 0) return c;
    return qubits <=> o.qubits;
  }
  bool operator==(const PauliString& o) const = default;
};

/// Product of two Pauli strings: a*b = coeff * result.
std::pair<cplx, PauliString> multiply(const PauliString& a, const PauliString& b);

struct PauliTerm {
  double coeff = 0.0;
  PauliString string;
};

/// Real-weighted sum of Pauli strings plus a scalar multiple of the identity.
/// The identity part lives in `offset` and never appears in `terms`.
class PauliSum {
 public:
  PauliSum() = default;
  explicit PauliSum(int qubits, double offset = 0.0) : qubits_(qubits), offset_(offset) {}

  int qubits() const { return qubits_; }
  double offset() const { return offset_; }
  const std::vector<PauliTerm>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty() && offset_ == 0.0; }

  void add(double coeff, const PauliString& s);
  void add_offset(double c) { offset_ += c; }
  void set_offset(double c) { offset_ = c; }

  /// Sorts terms, merges duplicates and drops coefficients below tol.
  PauliSum& normalize(double tol = 1e-14);

  PauliSum operator+(const PauliSum& o) const;
  PauliSum operator-(const PauliSum& o) const;
  PauliSum operator*(double a) const;
  /// Operator product; throws when the product is not Hermitian.
  PauliSum operator*(const PauliSum& o) const;

  /// Kronecker product A (x) B where `this` acts on the high qubits.
  PauliSum kron(const PauliSum& low) const;
  /// Embed into q_total qubits, shifting all sites up by `shift`.
  PauliSum lifted(int q_total, int shift) const;

  int max_weight() const;
  bool is_diagonal() const;
  double one_norm() const;
  /// Diagonal value at a basis state (valid for any sum; off-diagonal terms contribute 0).
  double diagonal_value(std::uint64_t basis) const;

  /// y += (this) * x, applied directly on a 2^q statevector.
  void apply(const StateVector& x, StateVector& y) const;

  static PauliSum number_op(int q, int site);
  static PauliSum single(int q, int site, char letter, double coeff = 1.0);

 private:
  int qubits_ = 0;
  double offset_ = 0.0;
  std::vector<PauliTerm> terms_;
};

/// In-place psi <- exp(-i theta P) psi.
void apply_pauli_rotation(const PauliString& p, double theta, StateVector& psi);

/// In-place psi <- diag(exp(-i t d_b)) psi for a diagonal PauliSum.
void apply_diagonal_phase(const PauliSum& diag, double t, StateVector& psi);

/// Diagonal of a diagonal PauliSum as a dense vector (offset included).
Eigen::VectorXd diagonal_values(const PauliSum& diag);

}  // namespace hemb
