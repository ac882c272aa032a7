#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hemb/matrix.hpp"
#include "hemb/pauli.hpp"

namespace hemb {

enum class Scheme {
  Unary,
  Antiferromagnetic,
  CirculantUnary,
  CirculantAntiferromagnetic,
  OneHot,
  PenaltyFreeOneHot,
};

inline constexpr Scheme kAllSchemes[] = {Scheme::Unary,          Scheme::Antiferromagnetic,
                                         Scheme::CirculantUnary, Scheme::CirculantAntiferromagnetic,
                                         Scheme::OneHot,         Scheme::PenaltyFreeOneHot};

std::string to_string(Scheme s);
Scheme scheme_from_string(const std::string& name);
bool is_circulant(Scheme s);
bool is_one_hot(Scheme s);

/// Which penalty to use for the penalty-bearing one-hot scheme.
enum class OneHotPenalty {
  GroundProjector,  ///< (sum n_j - 1)^2, code is the zero-energy ground space
  SumZ,             ///< sum Z_j, code is an excited eigenspace
};

struct Code {
  int n = 0;
  int q = 0;
  std::vector<std::uint64_t> words;

  /// Codeword j (1-based) as a q-character string, qubit 1 rightmost.
  std::string word_string(int j) const;
  /// Index of a basis state within the code, or -1.
  int index_of(std::uint64_t basis) const;
};

int qubit_count(Scheme s, int n);
Code make_code(Scheme s, int n);
PauliSum penalty_hamiltonian(Scheme s, int n, OneHotPenalty form = OneHotPenalty::GroundProjector);

struct EmbeddingArtifact {
  std::string label;  ///< scheme name, or a composite expression
  Scheme scheme = Scheme::Unary;
  OneHotPenalty one_hot_form = OneHotPenalty::GroundProjector;
  Code code;
  PauliSum h_pen;
  PauliSum q_op;
  bool penalty_free = false;
  /// Energy of h_pen on the code subspace.
  double pen_code_energy = 0.0;
  /// True when the code is the full minimal-eigenvalue space of h_pen.
  bool code_is_ground = true;

  int qubits() const { return code.q; }
  /// gH_pen + Q as a PauliSum, with the code energy shifted to zero.
  PauliSum hamiltonian(double g) const;
};

struct EmbedOptions {
  OneHotPenalty one_hot_form = OneHotPenalty::GroundProjector;
  double tol = 1e-14;
};

EmbeddingArtifact embed_matrix(const SparseHermitian& a, Scheme s, const EmbedOptions& opt = {});

/// Artifact for a Pauli operator Q chosen by hand on an existing code.
EmbeddingArtifact artifact_with_q(const EmbeddingArtifact& base, PauliSum q_op, const std::string& label);

struct ValidationReport {
  double restriction_error = 0.0;
  bool ground_space_ok = true;
  bool invariant_subspace = false;
  double leakage_norm = 0.0;
  std::vector<std::string> failures;
  bool ok(double tol = 1e-10) const { return failures.empty() && restriction_error <= tol; }
};

ValidationReport validate_embedding(const EmbeddingArtifact& art, const SparseHermitian& a, double g);

/// Checks whether a matrix is real symmetric circulant; returns the first row.
std::optional<std::vector<double>> circulant_first_row(const SparseHermitian& a);

}  // namespace hemb
