#include "hemb/algebra.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "hemb/errors.hpp"

namespace hemb {

namespace {

bool same_sum(const PauliSum& a, const PauliSum& b) {
  PauliSum d = a - b;
  d.normalize(1e-12);
  return d.size() == 0 && d.offset() == 0.0;
}

void require_composable(const EmbeddingArtifact& a) {
  if (!a.penalty_free && !a.code_is_ground) {
    fail(ErrorKind::Composition, "artifact '" + a.label +
                                     "' does not have its code as the penalty ground space; "
                                     "use the ground-projector penalty form");
  }
}

EmbeddingArtifact product_frame(const EmbeddingArtifact& a1, const EmbeddingArtifact& a2) {
  require_composable(a1);
  require_composable(a2);
  if (a1.penalty_free != a2.penalty_free) {
    fail(ErrorKind::Composition, "cannot compose a penalty-free artifact with a penalty-bearing one");
  }
  const int q1 = a1.qubits(), q2 = a2.qubits();
  if (q1 + q2 > 62) fail(ErrorKind::Capacity, "composed artifact exceeds 62 qubits");
  EmbeddingArtifact out;
  out.scheme = a1.scheme;
  out.one_hot_form = a1.one_hot_form;
  out.penalty_free = a1.penalty_free;
  out.code.n = a1.code.n * a2.code.n;
  out.code.q = q1 + q2;
  for (auto w1 : a1.code.words) {
    for (auto w2 : a2.code.words) out.code.words.push_back((w1 << q2) | w2);
  }
  out.h_pen = (a1.h_pen.lifted(q1 + q2, q2) + a2.h_pen.lifted(q1 + q2, 0)).normalize();
  out.pen_code_energy = a1.pen_code_energy + a2.pen_code_energy;
  out.code_is_ground = true;
  return out;
}

}  // namespace

EmbeddingArtifact compose_add(const EmbeddingArtifact& a1, const EmbeddingArtifact& a2) {
  if (a1.code.words != a2.code.words || a1.code.q != a2.code.q) {
    fail(ErrorKind::Composition, "addition requires identical codes");
  }
  if (a1.penalty_free != a2.penalty_free || !same_sum(a1.h_pen, a2.h_pen)) {
    fail(ErrorKind::Composition, "addition requires identical penalty Hamiltonians");
  }
  EmbeddingArtifact out = a1;
  out.q_op = (a1.q_op + a2.q_op).normalize();
  out.label = "(" + a1.label + " + " + a2.label + ")";
  return out;
}

EmbeddingArtifact compose_scale(const EmbeddingArtifact& a, double alpha) {
  EmbeddingArtifact out = a;
  out.q_op = a.q_op * alpha;
  out.label = std::to_string(alpha) + "*" + a.label;
  return out;
}

EmbeddingArtifact compose_cartesian(const EmbeddingArtifact& a1, const EmbeddingArtifact& a2) {
  EmbeddingArtifact out = product_frame(a1, a2);
  const int q = out.code.q, q2 = a2.qubits();
  out.q_op = (a1.q_op.lifted(q, q2) + a2.q_op.lifted(q, 0)).normalize();
  out.label = "(" + a1.label + " [] " + a2.label + ")";
  return out;
}

EmbeddingArtifact compose_tensor(const EmbeddingArtifact& a1, const EmbeddingArtifact& a2) {
  EmbeddingArtifact out = product_frame(a1, a2);
  out.q_op = a1.q_op.kron(a2.q_op);
  out.label = "(" + a1.label + " (x) " + a2.label + ")";
  return out;
}

EmbeddingArtifact trivial_artifact(Scheme s, double value) {
  if (is_circulant(s)) fail(ErrorKind::SchemeConstraint, "circulant schemes have no 1-dimensional artifact");
  EmbeddingArtifact art;
  art.label = to_string(s);
  art.scheme = s;
  art.code = Code{1, 1, {0}};
  art.penalty_free = (s == Scheme::PenaltyFreeOneHot);
  art.h_pen = art.penalty_free ? PauliSum(1) : PauliSum::number_op(1, 0);
  art.q_op = PauliSum(1, value);
  return art;
}

double PerturbationReport::leakage_bound(double t) const {
  return 4.0 * std::sqrt(2.0) * kappa * r_norm * std::abs(t);
}

double PerturbationReport::cross_bound() const { return 4.0 * std::sqrt(2.0) * kappa; }

namespace {

double rect_norm(const Eigen::MatrixXcd& r) {
  if (r.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(r.adjoint() * r, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

double lambda_min(const SparseHermitian& m) { return extremal_eigenvalues(m).first; }

}  // namespace

PerturbationReport perturbation_analysis(const EmbeddingArtifact& art, const SparseHermitian& a, double g) {
  if (art.qubits() > 14) fail(ErrorKind::Capacity, "perturbation_analysis supports at most 14 qubits");
  if (a.dim() != art.code.n) fail(ErrorKind::Shape, "target dimension does not match the code");
  PerturbationReport rep;
  std::vector<std::uint64_t> comp;
  const std::uint64_t dim = std::uint64_t{1} << art.qubits();
  for (std::uint64_t b = 0; b < dim; ++b) {
    if (art.code.index_of(b) < 0) comp.push_back(b);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ea(a.dense(), Eigen::EigenvaluesOnly);
  const double amax = ea.eigenvalues().maxCoeff();
  if (comp.empty()) {
    rep.delta = rep.delta0 = std::numeric_limits<double>::infinity();
    rep.kappa = rep.eta_bound = 0.0;
    rep.sw_valid = rep.applicable = true;
    return rep;
  }
  const SparseHermitian qm = pauli_sum_to_matrix(art.q_op);
  rep.r_norm = rect_norm(restrict_dense(qm, comp, art.code.words));
  const SparseHermitian hm = pauli_sum_to_matrix(art.hamiltonian(g));
  rep.delta = lambda_min(restrict(hm, comp)) - amax;
  rep.delta0 = lambda_min(restrict(qm, comp)) - amax;
  rep.lambda1 = std::numeric_limits<double>::infinity();
  for (auto b : comp) rep.lambda1 = std::min(rep.lambda1, art.h_pen.diagonal_value(b) - art.pen_code_energy);
  if (art.penalty_free) rep.lambda1 = 0.0;
  rep.applicable = rep.delta > 0.0;
  if (rep.r_norm == 0.0) {
    rep.kappa = 0.0;
  } else if (rep.applicable) {
    rep.kappa = rep.r_norm / rep.delta;
  }
  rep.eta_bound = 2.0 * std::sqrt(2.0) * rep.kappa;
  rep.sw_valid = rep.kappa < 0.5;
  return rep;
}

PenaltyChoice choose_penalty(const EmbeddingArtifact& art, const SparseHermitian& a, double t,
                             double delta_target) {
  if (!(delta_target > 0.0)) fail(ErrorKind::Input, "delta_target must be positive");
  PenaltyChoice out;
  if (art.penalty_free || std::isinf(delta_target)) return out;
  auto ok = [&](double g, double& bound) {
    ++out.evaluations;
    const PerturbationReport rep = perturbation_analysis(art, a, g);
    if (!rep.sw_valid) return false;
    bound = rep.leakage_bound(t);
    return bound <= delta_target;
  };
  double bound = 0.0;
  if (ok(0.0, bound)) {
    out.bound = bound;
    return out;
  }
  const double cap = std::ldexp(std::max(art.q_op.one_norm(), 1.0), 20);
  double hi = 1.0;
  while (!ok(hi, bound)) {
    hi *= 2.0;
    if (hi > cap) fail(ErrorKind::Saturation, "no penalty coefficient satisfies the leakage target");
  }
  double hi_bound = bound;
  double lo = hi / 2.0;
  for (int i = 0; i < 10; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (ok(mid, bound)) {
      hi = mid;
      hi_bound = bound;
    } else {
      lo = mid;
    }
  }
  out.g = hi;
  out.bound = hi_bound;
  return out;
}

double spatial_search_penalty(double gamma, int n, int d, double t_p) { return gamma * n * d * t_p; }

}  // namespace hemb
