#include "hemb/search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "hemb/algebra.hpp"
#include "hemb/errors.hpp"
#include "hemb/graphs.hpp"

namespace hemb {

namespace {

std::vector<int> default_marked(int N, int d, const std::vector<int>& marked) {
  if (!marked.empty()) return marked;
  std::vector<int> v(d, 1);
  v[0] = N;
  return v;
}

void check_vertex(int N, int d, const std::vector<int>& v) {
  if (static_cast<int>(v.size()) != d) fail(ErrorKind::Input, "marked vertex has the wrong dimension");
  for (int c : v) {
    if (c < 1 || c > N) fail(ErrorKind::Input, "marked vertex out of range");
  }
}

std::int64_t lattice_dim(int N, int d) {
  std::int64_t n = 1;
  for (int k = 0; k < d; ++k) n *= N;
  return n;
}

void check_amplitudes(const std::vector<double>& a, std::size_t min_size) {
  if (a.size() < min_size) fail(ErrorKind::Input, "too few amplitudes");
  double norm = 0.0;
  for (double x : a) {
    if (!std::isfinite(x)) fail(ErrorKind::Input, "amplitudes must be finite");
    norm += x * x;
  }
  if (std::abs(norm - 1.0) > 1e-10) fail(ErrorKind::Input, "amplitudes must be normalized");
}

/// Rotation angles that peel amplitudes off one codeword at a time:
/// cos(theta_m / 2) = a_m / R_m with R_m the norm of the tail a_m..a_last.
/// The final rotation carries the sign of the last amplitude.
std::vector<double> peel_angles(const std::vector<double>& a) {
  const std::size_t n = a.size();
  std::vector<double> tail(n + 1, 0.0);
  for (std::size_t m = n; m-- > 0;) tail[m] = tail[m + 1] + a[m] * a[m];
  std::vector<double> theta(n - 1, 0.0);
  for (std::size_t m = 0; m + 1 < n; ++m) {
    if (tail[m] < 1e-30) {
      theta[m] = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    const double s = (m + 2 == n) ? a[n - 1] : std::sqrt(tail[m + 1]);
    theta[m] = 2.0 * std::atan2(s, a[m]);
  }
  return theta;
}

}  // namespace

std::int64_t lattice_index(int N, const std::vector<int>& v) {
  std::int64_t idx = 0;
  for (int c : v) {
    if (c < 1 || c > N) fail(ErrorKind::Input, "lattice coordinate out of range");
    idx = idx * N + (c - 1);
  }
  return idx;
}

SparseHermitian search_hamiltonian(const SearchTask& task) {
  if (task.gamma < 0.0) fail(ErrorKind::Input, "gamma must be nonnegative");
  check_vertex(task.N, task.d, task.marked);
  GraphParams p;
  p.N = task.N;
  p.d = task.d;
  const SparseHermitian l = laplacian(build_graph(GraphKind::Lattice, p));
  std::vector<MatrixEntry> e;
  for (const auto& x : l.entries()) e.push_back({x.row, x.col, -task.gamma * x.value});
  const std::int64_t v = lattice_index(task.N, task.marked);
  e.push_back({v, v, -1.0});
  return SparseHermitian(l.dim(), e);
}

PauliSum codeword_marker(const Code& code, int j) {
  if (j < 1 || j > code.n) fail(ErrorKind::Input, "codeword index out of range");
  const std::uint64_t w = code.words[j - 1];
  const int q = code.q;
  // Smallest set of sites (then lexicographically first) whose values single out w.
  for (int k = 0; k <= q; ++k) {
    std::vector<int> sel(k);
    std::iota(sel.begin(), sel.end(), 0);
    while (true) {
      std::uint64_t mask = 0;
      for (int s : sel) mask |= 1ULL << s;
      int matches = 0;
      for (auto u : code.words) matches += ((u ^ w) & mask) == 0;
      if (matches == 1) {
        PauliSum op(q, 1.0);
        for (int s : sel) {
          const double sign = ((w >> s) & 1) ? -0.5 : 0.5;
          PauliSum f(q, 0.5);
          f.add(sign, PauliString::single(q, s, 'Z'));
          op = op * f;
        }
        return op.normalize();
      }
      int i = k - 1;
      while (i >= 0 && sel[i] == q - k + i) --i;
      if (i < 0) break;
      ++sel[i];
      for (int t = i + 1; t < k; ++t) sel[t] = sel[t - 1] + 1;
    }
  }
  fail(ErrorKind::Structure, "codeword is not unique within the code");
}

PauliSum embed_oracle(const std::vector<int>& v, Scheme s, int N, int d) {
  if (is_circulant(s)) {
    fail(ErrorKind::SchemeConstraint, "oracle embedding is not supported for circulant codes");
  }
  check_vertex(N, d, v);
  const Code code = make_code(s, N);
  PauliSum acc = codeword_marker(code, v[0]);
  for (int k = 1; k < d; ++k) acc = acc.kron(codeword_marker(code, v[k]));
  return acc.normalize();
}

EmbeddingArtifact search_embedding(const SearchTask& task, Scheme s) {
  check_vertex(task.N, task.d, task.marked);
  GraphParams p;
  p.N = task.N;
  const EmbeddingArtifact line = embed_matrix(laplacian(build_graph(GraphKind::Chain, p)), s);
  EmbeddingArtifact lat = line;
  for (int k = 1; k < task.d; ++k) lat = compose_cartesian(lat, line);
  EmbeddingArtifact walk = compose_scale(lat, -task.gamma);
  const EmbeddingArtifact oracle =
      artifact_with_q(walk, embed_oracle(task.marked, s, task.N, task.d) * -1.0, "oracle");
  EmbeddingArtifact out = compose_add(walk, oracle);
  out.label = "search(" + to_string(s) + ")";
  return out;
}

double search_gap(int N, int d, double gamma, const std::vector<int>& marked) {
  SearchTask t;
  t.N = N;
  t.d = d;
  t.gamma = gamma;
  t.marked = default_marked(N, d, marked);
  const SparseHermitian h = search_hamiltonian(t);
  if (h.dim() > kDenseLimit) fail(ErrorKind::Capacity, "search lattice exceeds the dense limit");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.dense(), Eigen::EigenvaluesOnly);
  return es.eigenvalues()[1] - es.eigenvalues()[0];
}

GammaResult optimize_gamma(int N, int d, const std::vector<int>& marked, double tol, int max_iter) {
  auto f = [&](double g) {
    return g <= 0.0 ? std::numeric_limits<double>::infinity() : search_gap(N, d, g, marked);
  };
  // One-dimensional Nelder-Mead: the simplex is a pair of points.
  double x0 = 1.0 / d, x1 = 1.05 / d;
  double f0 = f(x0), f1 = f(x1);
  GammaResult res;
  for (res.iterations = 0; res.iterations < max_iter; ++res.iterations) {
    if (f1 < f0) {
      std::swap(x0, x1);
      std::swap(f0, f1);
    }
    if (std::abs(x1 - x0) <= tol && std::abs(f1 - f0) <= tol) {
      res.converged = true;
      break;
    }
    const double xr = 2.0 * x0 - x1, fr = f(xr);
    if (fr < f0) {
      const double xe = 3.0 * x0 - 2.0 * x1, fe = f(xe);
      if (fe < fr) {
        x1 = xe;
        f1 = fe;
      } else {
        x1 = xr;
        f1 = fr;
      }
    } else {
      const double xc = (fr < f1) ? 1.5 * x0 - 0.5 * x1 : 0.5 * (x0 + x1);
      const double fc = f(xc);
      if (fc < std::min(fr, f1)) {
        x1 = xc;
        f1 = fc;
      } else {
        x1 = 0.5 * (x0 + x1);
        f1 = f(x1);
      }
    }
  }
  if (f1 < f0) {
    x0 = x1;
    f0 = f1;
  }
  res.gamma = x0;
  res.gap = f0;
  return res;
}

double default_success_probability(int N) {
  const double r = std::log(static_cast<double>(N)) / N;
  return 4.0 * r * r;
}

double success_time(int N, int d, double gamma, double p, const std::vector<int>& marked) {
  if (!(p > 0.0 && p < 1.0)) fail(ErrorKind::Input, "p must lie in (0,1)");
  SearchTask task;
  task.N = N;
  task.d = d;
  task.gamma = gamma;
  task.marked = default_marked(N, d, marked);
  const SparseHermitian h = search_hamiltonian(task);
  if (h.dim() > kDenseLimit) fail(ErrorKind::Capacity, "search lattice exceeds the dense limit");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.dense());
  const std::int64_t dim = h.dim();
  const std::int64_t v = lattice_index(N, task.marked);
  const StateVector uniform = StateVector::Constant(dim, 1.0 / std::sqrt(static_cast<double>(dim)));
  const Eigen::VectorXcd c = es.eigenvectors().adjoint() * uniform;
  const Eigen::VectorXcd row = es.eigenvectors().row(v).transpose();
  const Eigen::VectorXd& lam = es.eigenvalues();
  auto prob = [&](double t) {
    cplx amp = 0.0;
    for (std::int64_t k = 0; k < dim; ++k) amp += row[k] * c[k] * std::exp(cplx(0.0, -lam[k] * t));
    return std::norm(amp);
  };
  const double step = 1e-3;
  const double t_max = 10.0 * static_cast<double>(dim) + 10.0;
  if (prob(0.0) >= p) return 0.0;
  double prev = 0.0;
  for (std::int64_t k = 1; k * step <= t_max; ++k) {
    const double t = k * step;
    if (prob(t) >= p) {
      double lo = prev, hi = t;
      for (int it = 0; it < 60 && hi - lo > 1e-12; ++it) {
        const double mid = 0.5 * (lo + hi);
        (prob(mid) >= p ? hi : lo) = mid;
      }
      return hi;
    }
    prev = t;
  }
  fail(ErrorKind::Saturation, "success probability never reaches p");
}

double search_fidelity(const SearchTask& task, Scheme s, double g, double T) {
  const EmbeddingArtifact art = search_embedding(task, s);
  const SparseHermitian h_ebd = pauli_sum_to_matrix(art.hamiltonian(g));
  const ExactEvolver ebd(h_ebd);
  const std::int64_t n = static_cast<std::int64_t>(art.code.words.size());
  Eigen::MatrixXcd u_r(n, n);
  for (std::int64_t j = 0; j < n; ++j) {
    const StateVector out = ebd.evolve(T, basis_state(h_ebd.dim(), static_cast<std::int64_t>(art.code.words[j])));
    for (std::int64_t i = 0; i < n; ++i) u_r(i, j) = out[static_cast<std::int64_t>(art.code.words[i])];
  }
  const ExactEvolver logical(search_hamiltonian(task));
  cplx tr = 0.0;
  for (std::int64_t j = 0; j < n; ++j) tr += logical.evolve(T, basis_state(n, j)).dot(u_r.col(j));
  return std::abs(tr) / static_cast<double>(lattice_dim(task.N, task.d));
}

Circuit state_prep_unary(const std::vector<double>& a) {
  check_amplitudes(a, 2);
  const int q = static_cast<int>(a.size()) - 1;
  if (q > 62) fail(ErrorKind::Capacity, "too many amplitudes");
  const auto theta = peel_angles(a);
  Circuit c{q, {}};
  c.ry(0, theta[0]);
  for (int m = 1; m < q; ++m) {
    if (std::isnan(theta[m])) break;
    c.cry(m - 1, m, theta[m]);
  }
  return c;
}

Circuit state_prep_onehot(const std::vector<double>& a) {
  check_amplitudes(a, 1);
  const int q = static_cast<int>(a.size());
  if (q > 62) fail(ErrorKind::Capacity, "too many amplitudes");
  Circuit c{q, {}};
  if (q == 1) return c;
  const auto theta = peel_angles(a);
  c.ry(1, theta[0]);
  c.cnot(1, 0);
  for (int m = 1; m + 1 < q; ++m) {
    if (std::isnan(theta[m])) break;
    c.cry(m, m + 1, theta[m]);
    c.cnot(m + 1, m);
  }
  return c;
}

Circuit state_prep_onehot_givens(const std::vector<double>& a) {
  check_amplitudes(a, 1);
  const int q = static_cast<int>(a.size());
  if (q > 62) fail(ErrorKind::Capacity, "too many amplitudes");
  Circuit c{q, {}};
  if (q == 1) return c;
  const auto theta = peel_angles(a);
  for (int m = 0; m + 1 < q; ++m) {
    if (std::isnan(theta[m])) break;
    // exp(-i phi/2 (X_b Y_a - Y_b X_a)) maps h_a to cos(phi) h_a - sin(phi) h_b.
    const double phi = -0.5 * theta[m];
    PauliString xy = PauliString::single(q, m + 1, 'X');
    xy.x |= 1ULL << m;
    xy.z |= 1ULL << m;
    PauliString yx = PauliString::single(q, m + 1, 'Y');
    yx.x |= 1ULL << m;
    c.append(compile_pauli_exp(xy, phi / 2));
    c.append(compile_pauli_exp(yx, -phi / 2));
  }
  return c;
}

Circuit place_on_axis(const Circuit& c, int axis, int d) {
  if (axis < 0 || axis >= d) fail(ErrorKind::Input, "axis out of range");
  const int shift = (d - 1 - axis) * c.qubits;
  Circuit out{c.qubits * d, {}};
  for (Gate g : c.gates) {
    g.q0 += shift;
    if (g.two_qubit()) g.q1 += shift;
    out.add(g);
  }
  return out;
}

}  // namespace hemb
