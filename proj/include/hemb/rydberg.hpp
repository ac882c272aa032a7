#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "hemb/matrix.hpp"
#include "hemb/schemes.hpp"

namespace hemb {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

struct RydbergParams {
  double c6 = 862690.0 * kTwoPi * 1e6;  ///< rad/s * um^6
};

struct AtomArray {
  std::vector<std::array<double, 2>> positions;  ///< micrometers

  int size() const { return static_cast<int>(positions.size()); }
  /// n atoms at (x, j r), j = 0..n-1.
  static AtomArray chain(int n, double r, double x = 0.0);
  /// Two parallel chains: atoms 0..n-1 at x = separation form the low
  /// register (second coordinate), atoms n..2n-1 at x = 0 the high register.
  static AtomArray two_chains(int n, double r, double separation);
};

struct Interaction {
  int j = 0;
  int k = 0;
  double coeff = 0.0;
};

/// C6 / |r_j - r_k|^6 for all pairs j < k; all strictly positive.
std::vector<Interaction> interaction_terms(const AtomArray& atoms, const RydbergParams& p = {});

/// Diagonal of sum V_jk n_j n_k - sum Delta_j n_j; delta has one entry (global) or one per atom.
Eigen::VectorXd rydberg_diagonal(const AtomArray& atoms, const std::vector<double>& delta,
                                 const RydbergParams& p = {});

/// H / hbar at fixed control values.
SparseHermitian rydberg_hamiltonian(const AtomArray& atoms, double omega, double phi,
                                    const std::vector<double>& delta, const RydbergParams& p = {});

/// Per-atom detunings that make the antiferromagnetic code the N-fold
/// degenerate ground space of an equally spaced chain of N-1 atoms.
std::vector<double> chain_detunings(int N, double r, double c6 = RydbergParams{}.c6);

/// Product of two codes with the first code on the high qubits.
Code product_code(const Code& high, const Code& low);

struct PotentialOptions {
  int atoms_per_chain = 6;
  double r = 5.9;
  double separation = 11.8;
  double global_delta = 5e7;
  /// Optional per-atom detunings (2 * atoms_per_chain values) replacing the global one.
  std::vector<double> per_atom_delta;
  RydbergParams params;
};

/// Diagonal energy on the product antiferromagnetic code as an N x N grid,
/// shifted so its minimum is 0 (rad/s). Entry (j, k) is logical point (x_j, y_k).
Eigen::MatrixXd effective_potential(const PotentialOptions& opt);

class Waveform {
 public:
  Waveform() = default;
  Waveform(std::vector<double> times, std::vector<double> values);
  double at(double t) const;
  double start() const { return times_.front(); }
  double end() const { return times_.back(); }
  double max_abs() const;
  const std::vector<double>& times() const { return times_; }
  const std::vector<double>& values() const { return values_; }

 private:
  std::vector<double> times_;
  std::vector<double> values_;
};

struct Pulse {
  Waveform omega;  ///< rad/s, >= 0
  Waveform delta;  ///< rad/s
  Waveform phi;    ///< rad

  double duration() const { return omega.end(); }
  void validate() const;
};

/// Three-stage quasi-adiabatic preparation: Omega ramps up at delta0, delta
/// sweeps linearly to delta1 at Omega_max, then Omega ramps down.
Pulse prep_pulse(double duration = 0.5e-6, double omega_max = 15.8e6, double delta0 = -5e7,
                 double delta1 = 5e7, double ramp = 0.05e-6);

struct PulseResult {
  StateVector final_state;
  double code_overlap = 0.0;
  double norm = 1.0;
  bool coarse_step_warning = false;
};

/// Midpoint-sampled Strang splitting between the diagonal and the drive.
PulseResult evolve_pulse(const AtomArray& atoms, const Pulse& pulse, double dt, const StateVector& psi0,
                         const Code* code = nullptr, const RydbergParams& p = {});

double time_rescale(double t_physical);
double time_unscale(double t_eff);
/// Dimensionless drive phi = h^2 Omega / (2 pi 10^6).
double drive_rescale(double omega, double h);

struct PostselectResult {
  double legit_fraction = 0.0;
  std::vector<double> distribution;  ///< over codewords, normalized
  std::vector<std::int64_t> counts;
  std::int64_t total = 0;
  bool empty = false;
};

/// Bitstrings use the library convention: qubit 1 is the rightmost character.
PostselectResult postselect(const std::vector<std::string>& samples, const Code& code);

std::vector<std::string> sample_bitstrings(const StateVector& psi, int qubits, int shots, std::uint64_t seed);

}  // namespace hemb
