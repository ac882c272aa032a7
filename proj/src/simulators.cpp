#include "hemb/simulators.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <numeric>
#include <random>

#include <Eigen/Eigenvalues>

#include "hemb/errors.hpp"

namespace hemb {

std::string to_string(Formula f) {
  switch (f) {
    case Formula::First: return "first";
    case Formula::RandomizedFirst: return "randomized-first";
    case Formula::Second: return "second";
    case Formula::QDrift: return "qdrift";
  }
  return "unknown";
}

Formula formula_from_string(const std::string& s) {
  for (Formula f : {Formula::First, Formula::RandomizedFirst, Formula::Second, Formula::QDrift}) {
    if (to_string(f) == s) return f;
  }
  fail(ErrorKind::Input, "unknown formula '" + s + "'");
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  auto mix = [](std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  };
  return mix(seed ^ mix(index + 0x632BE59BD9B4E019ULL));
}

SplitHamiltonian SplitHamiltonian::from_artifact(const EmbeddingArtifact& art, double g) {
  SplitHamiltonian h;
  h.q_op = art.q_op;
  h.g = art.penalty_free ? 0.0 : g;
  if (art.penalty_free) {
    h.h_pen = PauliSum(art.qubits());
  } else {
    h.h_pen = art.h_pen;
    h.h_pen.add_offset(-art.pen_code_energy);
    h.h_pen.normalize();
  }
  return h;
}

PauliSum SplitHamiltonian::total() const {
  if (g == 0.0) return q_op;
  return (h_pen * g + q_op).normalize();
}

std::vector<PauliTerm> ordered_terms(const SplitHamiltonian& h) {
  std::vector<PauliTerm> out;
  auto push_group = [&](const PauliSum& p) {
    const std::size_t start = out.size();
    out.insert(out.end(), p.terms().begin(), p.terms().end());
    std::stable_partition(out.begin() + static_cast<std::ptrdiff_t>(start), out.end(),
                          [](const PauliTerm& t) { return !t.string.is_diagonal(); });
  };
  if (h.g != 0.0) push_group(h.h_pen * h.g);
  push_group(h.q_op);
  return out;
}

double leakage(const StateVector& psi, const Code& code) {
  double in = 0.0;
  for (auto w : code.words) in += std::norm(psi[static_cast<Eigen::Index>(w)]);
  return std::clamp(1.0 - in / psi.squaredNorm(), 0.0, 1.0);
}

namespace {

struct Fragment {
  enum class Kind { Rotation, Diagonal, Dense } kind;
  PauliString string;
  double coeff = 0.0;
  Eigen::VectorXd diag;
  std::shared_ptr<ExactEvolver> evolver;
};

void apply_fragment(const Fragment& f, double tau, StateVector& psi) {
  switch (f.kind) {
    case Fragment::Kind::Rotation: apply_pauli_rotation(f.string, f.coeff * tau, psi); break;
    case Fragment::Kind::Diagonal:
      for (Eigen::Index b = 0; b < psi.size(); ++b) psi[b] *= std::polar(1.0, -tau * f.diag[b]);
      break;
    case Fragment::Kind::Dense: psi = f.evolver->evolve(tau, psi); break;
  }
}

class ProductFormula {
 public:
  ProductFormula(const EvolutionPlan& plan, const SplitHamiltonian& h) : plan_(plan) {
    if (plan.formula == Formula::QDrift) fail(ErrorKind::Input, "use evolve_qdrift for qDRIFT plans");
    if (plan.trotter_r < 1) fail(ErrorKind::Input, "Trotter number must be at least 1");
    if (plan.term_grouping == Grouping::PerPauliTerm) {
      for (const auto& t : ordered_terms(h)) frags_.push_back({Fragment::Kind::Rotation, t.string, t.coeff, {}, {}});
      global_offset_ = (h.g == 0.0 ? 0.0 : h.g * h.h_pen.offset()) + h.q_op.offset();
    } else {
      if (h.g != 0.0) {
        const PauliSum pen = h.h_pen * h.g;
        if (pen.is_diagonal()) {
          frags_.push_back({Fragment::Kind::Diagonal, {}, 0.0, diagonal_values(pen), {}});
        } else {
          frags_.push_back({Fragment::Kind::Dense, {}, 0.0, {},
                            std::make_shared<ExactEvolver>(pauli_sum_to_matrix(pen))});
        }
      }
      frags_.push_back({Fragment::Kind::Dense, {}, 0.0, {},
                        std::make_shared<ExactEvolver>(pauli_sum_to_matrix(h.q_op))});
    }
  }

  StateVector run(const StateVector& psi0) const {
    StateVector psi = psi0;
    const int r = plan_.trotter_r;
    const double dt = plan_.time / r;
    const std::size_t m = frags_.size();
    std::mt19937_64 rng(plan_.rng_seed);
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    for (int step = 0; step < r; ++step) {
      switch (plan_.formula) {
        case Formula::First:
          for (std::size_t i = 0; i < m; ++i) apply_fragment(frags_[i], dt, psi);
          break;
        case Formula::RandomizedFirst:
          if (plan_.randomization == RandomizationMode::Permutation) {
            std::iota(order.begin(), order.end(), 0);
            std::shuffle(order.begin(), order.end(), rng);
          } else if (rng() & 1U) {
            std::reverse(order.begin(), order.end());
          }
          for (std::size_t i : order) apply_fragment(frags_[i], dt, psi);
          break;
        case Formula::Second:
          if (m == 0) break;
          for (std::size_t i = 0; i + 1 < m; ++i) apply_fragment(frags_[i], dt / 2, psi);
          apply_fragment(frags_[m - 1], dt, psi);
          for (std::size_t i = m - 1; i-- > 0;) apply_fragment(frags_[i], dt / 2, psi);
          break;
        case Formula::QDrift: break;
      }
    }
    if (global_offset_ != 0.0) psi *= std::polar(1.0, -global_offset_ * plan_.time);
    return psi;
  }

  /// Ensemble-averaged propagator of a randomized plan applied to psi0. The
  /// step orderings are independent, so the average factorizes per step:
  /// exactly over forward/reverse for coin-flip mode, and over
  /// kAveragedOrderings seeded permutations for permutation mode.
  StateVector run_average(const StateVector& psi0) const {
    if (plan_.formula != Formula::RandomizedFirst) return run(psi0);
    constexpr int kAveragedOrderings = 32;
    StateVector psi = psi0;
    const double dt = plan_.time / plan_.trotter_r;
    const std::size_t m = frags_.size();
    std::mt19937_64 rng(plan_.rng_seed);
    std::vector<std::size_t> order(m);
    for (int step = 0; step < plan_.trotter_r; ++step) {
      StateVector acc = StateVector::Zero(psi.size());
      const int k_max = plan_.randomization == RandomizationMode::CoinFlip ? 2 : kAveragedOrderings;
      for (int k = 0; k < k_max; ++k) {
        std::iota(order.begin(), order.end(), 0);
        if (plan_.randomization == RandomizationMode::CoinFlip) {
          if (k == 1) std::reverse(order.begin(), order.end());
        } else {
          std::shuffle(order.begin(), order.end(), rng);
        }
        StateVector phi = psi;
        for (std::size_t i : order) apply_fragment(frags_[i], dt, phi);
        acc += phi;
      }
      psi = acc / static_cast<double>(k_max);
    }
    if (global_offset_ != 0.0) psi *= std::polar(1.0, -global_offset_ * plan_.time);
    return psi;
  }

 private:
  EvolutionPlan plan_;
  std::vector<Fragment> frags_;
  double global_offset_ = 0.0;
};

}  // namespace

SimResult evolve_trotter(const EvolutionPlan& plan, const SplitHamiltonian& h, const StateVector& psi0,
                         const Code* code) {
  if (psi0.size() != (Eigen::Index{1} << h.qubits())) fail(ErrorKind::Shape, "state dimension mismatch");
  SimResult res;
  res.final_state = ProductFormula(plan, h).run(psi0);
  if (code) res.leakage = leakage(res.final_state, *code);
  res.samples_used = 1;
  return res;
}

SimResult evolve_qdrift(const SplitHamiltonian& h, double T, int K, int M, const SparseHermitian& observable,
                        const StateVector& psi0, std::uint64_t seed, const Code* code) {
  if (K < 1 || M < 1) fail(ErrorKind::Input, "qDRIFT needs K >= 1 and M >= 1");
  const PauliSum pen = h.g == 0.0 ? PauliSum(h.qubits()) : h.h_pen * h.g;
  if (!pen.is_diagonal()) fail(ErrorKind::FastForward, "qDRIFT requires a diagonal (fast-forwardable) penalty");
  if (psi0.size() != observable.dim()) fail(ErrorKind::Shape, "observable dimension mismatch");
  const Eigen::VectorXd d = diagonal_values(pen);
  const ExactEvolver qev(pauli_sum_to_matrix(h.q_op));
  const double dt = T / K;
  auto phase = [&](StateVector& psi, double t) {
    for (Eigen::Index b = 0; b < psi.size(); ++b) psi[b] *= std::polar(1.0, -t * d[b]);
  };
  SimResult res;
  double sum = 0.0, sum2 = 0.0, leak = 0.0;
  for (int j = 0; j < M; ++j) {
    std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(j)));
    std::uniform_real_distribution<double> u(0.0, 1.0);
    StateVector psi = psi0;
    for (int k = 0; k < K; ++k) {
      const double xi = (k + u(rng)) * dt;
      phase(psi, xi);
      psi = qev.evolve(dt, psi);
      phase(psi, -xi);
    }
    phase(psi, T);
    const double m = expectation(observable, psi);
    sum += m;
    sum2 += m * m;
    if (code) leak += leakage(psi, *code);
    if (j == 0) res.final_state = psi;
  }
  const double mean = sum / M;
  res.observable_mean = mean;
  const double var = M > 1 ? std::max(0.0, (sum2 - M * mean * mean) / (M - 1)) : 0.0;
  res.standard_error = std::sqrt(var / M);
  res.leakage = leak / M;
  res.samples_used = M;
  return res;
}

namespace {

void gauss_legendre(int n, Eigen::VectorXd& x, Eigen::VectorXd& w) {
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) {
    const double b = i / std::sqrt(4.0 * i * i - 1.0);
    j(i, i - 1) = j(i - 1, i) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
  x = es.eigenvalues();
  w = 2.0 * es.eigenvectors().row(0).transpose().array().square().matrix();
}

}  // namespace

double qdrift_channel_expectation(const SplitHamiltonian& h, double T, int K, const SparseHermitian& observable,
                                  const StateVector& psi0, int quadrature_nodes) {
  const PauliSum pen = h.g == 0.0 ? PauliSum(h.qubits()) : h.h_pen * h.g;
  if (!pen.is_diagonal()) fail(ErrorKind::FastForward, "qDRIFT requires a diagonal (fast-forwardable) penalty");
  const Eigen::Index dim = psi0.size();
  if (dim > 256) fail(ErrorKind::Capacity, "density-matrix qDRIFT channel limited to 8 qubits");
  const Eigen::VectorXd d = diagonal_values(pen);
  const Eigen::MatrixXcd qd = pauli_sum_to_matrix(h.q_op).dense();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(qd);
  const double dt = T / K;
  Eigen::VectorXcd ph(dim);
  for (Eigen::Index i = 0; i < dim; ++i) ph[i] = std::polar(1.0, -dt * es.eigenvalues()[i]);
  const Eigen::MatrixXcd v = es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
  Eigen::VectorXd x, w;
  gauss_legendre(quadrature_nodes, x, w);
  Eigen::MatrixXcd rho = psi0 * psi0.adjoint();
  for (int k = 0; k < K; ++k) {
    Eigen::MatrixXcd next = Eigen::MatrixXcd::Zero(dim, dim);
    for (int n = 0; n < quadrature_nodes; ++n) {
      const double xi = (k + 0.5 * (x[n] + 1.0)) * dt;
      Eigen::MatrixXcd u(dim, dim);
      for (Eigen::Index a = 0; a < dim; ++a) {
        for (Eigen::Index b = 0; b < dim; ++b) u(a, b) = std::polar(1.0, xi * (d[a] - d[b])) * v(a, b);
      }
      next += (0.5 * w[n]) * (u * rho * u.adjoint());
    }
    rho = next;
  }
  Eigen::VectorXcd pt(dim);
  for (Eigen::Index i = 0; i < dim; ++i) pt[i] = std::polar(1.0, -T * d[i]);
  const Eigen::MatrixXcd lab = pt.asDiagonal() * rho * pt.conjugate().asDiagonal();
  return (observable.dense() * lab).trace().real();
}

StateVector haar_state(std::int64_t dim, std::uint64_t seed, const std::vector<std::uint64_t>* support) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  StateVector v = StateVector::Zero(dim);
  if (support) {
    for (auto b : *support) v[static_cast<Eigen::Index>(b)] = cplx(nd(rng), nd(rng));
  } else {
    for (std::int64_t i = 0; i < dim; ++i) v[i] = cplx(nd(rng), nd(rng));
  }
  v.normalize();
  return v;
}

namespace {

struct ErrorOracle {
  std::vector<StateVector> inputs;
  std::vector<StateVector> exact;

  ErrorOracle(const SplitHamiltonian& h, double T, const TrotterErrorOptions& opt) {
    const std::int64_t dim = std::int64_t{1} << h.qubits();
    const ExactEvolver ev(pauli_sum_to_matrix(h.total()));
    for (int i = 0; i < opt.n_samples; ++i) {
      inputs.push_back(haar_state(dim, derive_seed(opt.seed, static_cast<std::uint64_t>(i)),
                                  opt.subspace ? &opt.subspace->words : nullptr));
      exact.push_back(ev.evolve(T, inputs.back()));
    }
  }

  double error(const EvolutionPlan& plan, const SplitHamiltonian& h) const {
    const ProductFormula pf(plan, h);
    double worst = 0.0;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
      worst = std::max(worst, (pf.run_average(inputs[i]) - exact[i]).norm());
    }
    return worst;
  }
};

}  // namespace

double estimate_trotter_error(const EvolutionPlan& plan, const SplitHamiltonian& h,
                              const TrotterErrorOptions& opt) {
  return ErrorOracle(h, plan.time, opt).error(plan, h);
}

TrotterSearch find_trotter_number(const EvolutionPlan& plan_template, const SplitHamiltonian& h, double T,
                                  double epsilon, const TrotterErrorOptions& opt, int r_cap) {
  const ErrorOracle oracle(h, T, opt);
  TrotterSearch out;
  std::map<int, double> cache;
  auto err = [&](int r) {
    auto it = cache.find(r);
    if (it != cache.end()) return it->second;
    EvolutionPlan p = plan_template;
    p.trotter_r = r;
    p.time = T;
    ++out.evaluations;
    return cache[r] = oracle.error(p, h);
  };
  auto pass = [&](int r) { return err(r) <= epsilon; };
  int hi = 1;
  while (!pass(hi)) {
    if (hi >= r_cap) fail(ErrorKind::Saturation, "Trotter number exceeds the search cap");
    hi = std::min(hi * 2, r_cap);
  }
  int lo = hi / 2;  // lo fails (or is 0)
  while (hi - lo > 1) {
    const int mid = lo + (hi - lo) / 2;
    if (pass(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  int c = hi;
  while (c + 2 <= r_cap && !(pass(c) && pass(c + 1) && pass(c + 2))) ++c;
  out.r = c;
  out.error = err(c);
  return out;
}

}  // namespace hemb
