#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hemb/matrix.hpp"
#include "hemb/schemes.hpp"

namespace hemb {

enum class Formula { First, RandomizedFirst, Second, QDrift };
enum class Grouping { PenaltyVsQ, PerPauliTerm };
enum class RandomizationMode { Permutation, CoinFlip };

std::string to_string(Formula f);
Formula formula_from_string(const std::string& s);

struct EvolutionPlan {
  Formula formula = Formula::First;
  int trotter_r = 1;
  double time = 0.0;
  std::uint64_t rng_seed = 0;
  Grouping term_grouping = Grouping::PerPauliTerm;
  RandomizationMode randomization = RandomizationMode::CoinFlip;
};

struct SimResult {
  StateVector final_state;
  double leakage = 0.0;
  std::optional<double> observable_mean;
  std::optional<double> standard_error;
  int samples_used = 0;
};

/// g * h_pen + q_op split into the two parts a product formula alternates.
struct SplitHamiltonian {
  PauliSum h_pen;
  PauliSum q_op;
  double g = 0.0;

  static SplitHamiltonian from_artifact(const EmbeddingArtifact& art, double g);
  int qubits() const { return q_op.qubits(); }
  PauliSum total() const;
};

/// Product-formula term order shared by the simulators and the compiler:
/// g * h_pen terms, then Q terms; within each group off-diagonal terms come
/// first and diagonal terms last, both in canonical order.
std::vector<PauliTerm> ordered_terms(const SplitHamiltonian& h);

/// 1 - ||P_S psi||^2.
double leakage(const StateVector& psi, const Code& code);

SimResult evolve_trotter(const EvolutionPlan& plan, const SplitHamiltonian& h, const StateVector& psi0,
                         const Code* code = nullptr);

/// Interaction-picture continuous qDRIFT. The observable must be given on the
/// full 2^q space.
SimResult evolve_qdrift(const SplitHamiltonian& h, double T, int K, int M, const SparseHermitian& observable,
                        const StateVector& psi0, std::uint64_t seed, const Code* code = nullptr);

/// Expected value of the qDRIFT estimator for M -> infinity, computed by
/// propagating the density matrix through the averaged step channel with
/// Gauss-Legendre quadrature over xi_k.
double qdrift_channel_expectation(const SplitHamiltonian& h, double T, int K, const SparseHermitian& observable,
                                  const StateVector& psi0, int quadrature_nodes = 24);

struct TrotterErrorOptions {
  int n_samples = 10;
  std::uint64_t seed = 0xEB5EEDULL;
  /// When set, Haar states are drawn inside span(code) instead of the full space.
  const Code* subspace = nullptr;
};

/// max over Haar-random states of ||(U_plan - U_exact) psi||. For randomized
/// plans U_plan is the ensemble-averaged propagator over step orderings.
double estimate_trotter_error(const EvolutionPlan& plan, const SplitHamiltonian& h,
                              const TrotterErrorOptions& opt = {});

struct TrotterSearch {
  int r = 0;
  double error = 0.0;
  int evaluations = 0;
};

TrotterSearch find_trotter_number(const EvolutionPlan& plan_template, const SplitHamiltonian& h, double T,
                                  double epsilon = 5e-2, const TrotterErrorOptions& opt = {},
                                  int r_cap = 1 << 16);

/// Haar-random state, optionally supported on a list of basis indices.
StateVector haar_state(std::int64_t dim, std::uint64_t seed, const std::vector<std::uint64_t>* support = nullptr);

/// Independent 64-bit stream seed for (seed, index).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace hemb
