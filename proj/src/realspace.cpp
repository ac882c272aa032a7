#include "hemb/realspace.hpp"

#include <cmath>

#include "hemb/errors.hpp"

namespace hemb {

FockOperators fock_operators(int N) {
  if (N < 2) fail(ErrorKind::Input, "Fock truncation requires N >= 2");
  std::vector<MatrixEntry> x, p2, x2;
  for (int j = 0; j < N; ++j) {
    const double diag = (2.0 * j + 1.0) / 2.0;
    p2.push_back({j, j, diag});
    x2.push_back({j, j, diag});
    if (j + 1 < N) x.push_back({j, j + 1, std::sqrt((j + 1.0) / 2.0)});
    if (j + 2 < N) {
      const double off = 0.5 * std::sqrt((j + 1.0) * (j + 2.0));
      p2.push_back({j, j + 2, -off});
      x2.push_back({j, j + 2, off});
    }
  }
  return {N, SparseHermitian(N, x), SparseHermitian(N, p2), SparseHermitian(N, x2)};
}

FockEmbeddings fock_embeddings(int N, Scheme s) {
  const FockOperators ops = fock_operators(N);
  FockEmbeddings out;
  auto strip = [](EmbeddingArtifact art, double& dropped) {
    dropped = art.q_op.offset();
    art.q_op.set_offset(0.0);
    return art;
  };
  const EmbeddingArtifact ax = strip(embed_matrix(ops.x_hat, s), out.dropped_x);
  const EmbeddingArtifact ap = strip(embed_matrix(ops.p2_hat, s), out.dropped_p2);
  const EmbeddingArtifact ax2 = strip(embed_matrix(ops.x2_hat, s), out.dropped_x2);
  out.q_x = ax.q_op;
  out.q_p2 = ap.q_op;
  out.q_x2 = ax2.q_op;
  out.frame = ax;
  out.frame.q_op = PauliSum(ax.qubits());
  out.frame.label = "fock(" + to_string(s) + ")";
  return out;
}

SparseHermitian fock_hamiltonian(int N, double a, double b) {
  if (!(a > 0.0)) fail(ErrorKind::Input, "Fock model requires a > 0");
  const FockOperators ops = fock_operators(N);
  return ops.p2_hat * 0.5 + ops.x2_hat * (0.5 * a) + ops.x_hat * b;
}

PauliSum fock_hamiltonian_embedded(const FockEmbeddings& e, double a, double b) {
  if (!(a > 0.0)) fail(ErrorKind::Input, "Fock model requires a > 0");
  PauliSum h = e.q_p2 * 0.5 + e.q_x2 * (0.5 * a) + e.q_x * b;
  return h.normalize();
}

std::pair<double, double> harmonic_observables(double a, double b, double t) {
  if (!(a > 0.0)) fail(ErrorKind::Input, "closed forms require a > 0");
  const double w = std::sqrt(a);
  const double c = std::cos(w * t), s = std::sin(w * t);
  const double x_mean = (b / a) * (c - 1.0);
  // Vacuum of the unit oscillator evolved under frequency w, displaced by the linear term.
  const double kinetic = 0.25 * (a * s * s + c * c) + (b * b / (2.0 * a)) * s * s;
  return {x_mean, kinetic};
}

SparseHermitian fdm_second_derivative(int N) {
  if (N < 3) fail(ErrorKind::Input, "finite differences require N >= 3");
  const double h = 1.0 / (N - 1);
  const double inv = 1.0 / (h * h);
  std::vector<MatrixEntry> e;
  for (int j = 0; j < N; ++j) {
    e.push_back({j, j, -2.0 * inv});
    if (j + 1 < N) e.push_back({j, j + 1, inv});
  }
  return SparseHermitian(N, e);
}

SparseHermitian fdm_hamiltonian(int N, const Eigen::VectorXd& V) {
  const SparseHermitian d = fdm_second_derivative(N);
  if (V.size() != static_cast<Eigen::Index>(N) * N) fail(ErrorKind::Shape, "potential must have N*N values");
  const SparseHermitian id = SparseHermitian::identity(N);
  return (d.kron(id) + id.kron(d)) * -0.5 + SparseHermitian::diagonal(V);
}

}  // namespace hemb
