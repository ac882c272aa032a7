#pragma once

#include <limits>

#include "hemb/schemes.hpp"

namespace hemb {

EmbeddingArtifact compose_add(const EmbeddingArtifact& a1, const EmbeddingArtifact& a2);
EmbeddingArtifact compose_scale(const EmbeddingArtifact& a, double alpha);
/// Embeds A1 (x) I + I (x) A2; a1 occupies the high qubits.
EmbeddingArtifact compose_cartesian(const EmbeddingArtifact& a1, const EmbeddingArtifact& a2);
/// Embeds A1 (x) A2 with Q1 (x) Q2 and the summed penalty.
EmbeddingArtifact compose_tensor(const EmbeddingArtifact& a1, const EmbeddingArtifact& a2);

/// Trivial artifact embedding the 1x1 matrix [value] on one qubit.
EmbeddingArtifact trivial_artifact(Scheme s, double value = 0.0);

struct PerturbationReport {
  double delta = 0.0;       ///< lambda_min(G) - lambda_max(A)
  double delta0 = 0.0;      ///< lambda_min(B) - lambda_max(A)
  double lambda1 = 0.0;     ///< smallest penalty energy on the complement
  double r_norm = 0.0;      ///< ||R||
  double kappa = std::numeric_limits<double>::infinity();
  double eta_bound = std::numeric_limits<double>::infinity();
  bool sw_valid = false;
  bool applicable = false;  ///< false when delta <= 0

  /// 4 sqrt(2) kappa ||R|| t
  double leakage_bound(double t) const;
  /// 4 sqrt(2) kappa
  double cross_bound() const;
};

PerturbationReport perturbation_analysis(const EmbeddingArtifact& art, const SparseHermitian& a, double g);

struct PenaltyChoice {
  double g = 0.0;
  double bound = 0.0;
  int evaluations = 0;
};

/// Smallest g (doubling grid, then 10 bisection steps) with leakage_bound(t) <= delta_target.
PenaltyChoice choose_penalty(const EmbeddingArtifact& art, const SparseHermitian& a, double t,
                             double delta_target);

/// Penalty rule used for spatial search: g = gamma * n * d * T_p.
double spatial_search_penalty(double gamma, int n, int d, double t_p);

}  // namespace hemb
