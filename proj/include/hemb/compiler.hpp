#pragma once

#include <string>
#include <vector>

#include "hemb/matrix.hpp"
#include "hemb/simulators.hpp"

namespace hemb {

enum class GateKind { Rx, Ry, Rz, Rxx };

std::string to_string(GateKind k);

/// R_sigma(theta) = exp(-i theta sigma / 2); Rxx(theta) = exp(-i theta X(x)X / 2).
struct Gate {
  GateKind kind = GateKind::Rx;
  int q0 = 0;
  int q1 = -1;
  double angle = 0.0;
  bool two_qubit() const { return kind == GateKind::Rxx; }
};

struct Circuit {
  int qubits = 0;
  std::vector<Gate> gates;

  void add(const Gate& g);
  void rx(int q, double a) { add({GateKind::Rx, q, -1, a}); }
  void ry(int q, double a) { add({GateKind::Ry, q, -1, a}); }
  void rz(int q, double a) { add({GateKind::Rz, q, -1, a}); }
  void rxx(int a, int b, double angle) { add({GateKind::Rxx, a, b, angle}); }
  /// CNOT lowered to one Rxx and four single-qubit rotations.
  void cnot(int control, int target);
  /// Controlled-Ry lowered to one Ry and a single Z(x)Y Pauli exponential (one Rxx).
  void cry(int control, int target, double angle);
  void append(const Circuit& other);
};

/// Rz gates are treated as virtual (frame updates) by default and reported
/// separately; this is the single documented counting policy.
struct CountPolicy {
  bool virtual_rz = true;
};

struct StepCount {
  std::string label;
  int n_1q = 0;
  int n_2q = 0;
  int n_rz = 0;
};

struct GateCountReport {
  int n_qubits = 0;
  int n_1q = 0;
  int n_2q = 0;
  int n_rz = 0;
  std::vector<StepCount> steps;
};

/// Peephole pass: merges consecutive same-axis single-qubit rotations on a
/// site and drops rotations whose angle is a multiple of 2 pi.
Circuit merge_rotations(const Circuit& c);

GateCountReport count_gates(const Circuit& c, const CountPolicy& policy = {});

Circuit compile_pauli_exp(const PauliString& p, double theta);

struct CompiledPlan {
  Circuit circuit;
  GateCountReport report;
};

/// Term-by-term compilation of a product-formula plan. The optional prep
/// circuit is prepended and counted as its own section.
CompiledPlan compile_plan(const EvolutionPlan& plan, const SplitHamiltonian& h, const Circuit* prep = nullptr,
                          const CountPolicy& policy = {});

/// Pads A to the next power of two, removes coupling to the padding block,
/// applies an optional diagonal value on the padding, then Pauli-decomposes.
PauliSum binary_baseline(const SparseHermitian& a, int n_logical, double padding_diagonal = 0.0);

struct PowerLawFit {
  double exponent = 0.0;
  double prefactor = 0.0;
  double r_squared = 0.0;
};

PowerLawFit fit_power_law(const std::vector<std::pair<double, double>>& points);

/// Dense unitary of a circuit (q <= 10), for verification.
Eigen::MatrixXcd circuit_unitary(const Circuit& c);
void apply_circuit(const Circuit& c, StateVector& psi);

std::string to_qasm(const Circuit& c);

}  // namespace hemb
