#include "hemb/compiler.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "hemb/errors.hpp"

namespace hemb {

namespace {
constexpr double kHalfPi = 1.5707963267948966;
constexpr double kAngleTol = 1e-12;

bool trivial_angle(double a) { return std::abs(std::remainder(a, 2.0 * M_PI)) < kAngleTol; }
}  // namespace

std::string to_string(GateKind k) {
  switch (k) {
    case GateKind::Rx: return "rx";
    case GateKind::Ry: return "ry";
    case GateKind::Rz: return "rz";
    case GateKind::Rxx: return "rxx";
  }
  return "?";
}

void Circuit::add(const Gate& g) {
  if (g.q0 < 0 || g.q0 >= qubits) fail(ErrorKind::Input, "gate qubit out of range");
  if (g.two_qubit() && (g.q1 < 0 || g.q1 >= qubits || g.q1 == g.q0)) {
    fail(ErrorKind::Input, "Rxx needs two distinct qubits");
  }
  gates.push_back(g);
}

void Circuit::cnot(int control, int target) {
  ry(control, kHalfPi);
  rxx(control, target, kHalfPi);
  ry(control, -kHalfPi);
  rx(target, -kHalfPi);
  rz(control, -kHalfPi);
}

void Circuit::cry(int control, int target, double angle) {
  // CRy(a) = exp(-i a/2 n_c Y_t) = Ry_t(a/2) exp(+i a/4 Z_c Y_t)
  ry(target, angle / 2);
  PauliString zy = PauliString::single(qubits, control, 'Z');
  zy.x |= std::uint64_t{1} << target;
  zy.z |= std::uint64_t{1} << target;
  append(compile_pauli_exp(zy, -angle / 4));
}

void Circuit::append(const Circuit& other) {
  if (other.qubits > qubits) fail(ErrorKind::Shape, "appended circuit is wider than the target");
  gates.insert(gates.end(), other.gates.begin(), other.gates.end());
}

namespace {

struct Tagged {
  Gate g;
  int tag;
};

std::vector<Tagged> merge_tagged(int qubits, const std::vector<Gate>& gates, const std::vector<int>& tags) {
  std::vector<Tagged> out;
  std::vector<char> live;
  std::vector<std::vector<std::size_t>> last(qubits);
  for (std::size_t k = 0; k < gates.size(); ++k) {
    const Gate& g = gates[k];
    if (trivial_angle(g.angle)) continue;
    if (g.two_qubit()) {
      last[g.q0].push_back(out.size());
      last[g.q1].push_back(out.size());
      out.push_back({g, tags[k]});
      live.push_back(1);
      continue;
    }
    auto& st = last[g.q0];
    if (!st.empty() && !out[st.back()].g.two_qubit() && out[st.back()].g.kind == g.kind) {
      Gate& prev = out[st.back()].g;
      prev.angle += g.angle;
      if (trivial_angle(prev.angle)) {
        live[st.back()] = 0;
        st.pop_back();
      }
      continue;
    }
    st.push_back(out.size());
    out.push_back({g, tags[k]});
    live.push_back(1);
  }
  std::vector<Tagged> kept;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (live[i]) kept.push_back(out[i]);
  }
  return kept;
}

}  // namespace

Circuit merge_rotations(const Circuit& c) {
  Circuit r{c.qubits, {}};
  for (const auto& t : merge_tagged(c.qubits, c.gates, std::vector<int>(c.gates.size(), 0))) r.gates.push_back(t.g);
  return r;
}

GateCountReport count_gates(const Circuit& c, const CountPolicy& policy) {
  GateCountReport rep;
  rep.n_qubits = c.qubits;
  for (const Gate& g : c.gates) {
    if (g.two_qubit()) {
      ++rep.n_2q;
    } else if (g.kind == GateKind::Rz) {
      ++rep.n_rz;
      if (!policy.virtual_rz) ++rep.n_1q;
    } else {
      ++rep.n_1q;
    }
  }
  rep.steps.push_back({"total", rep.n_1q, rep.n_2q, rep.n_rz});
  return rep;
}

Circuit compile_pauli_exp(const PauliString& p, double theta) {
  if (p.weight() < 1) fail(ErrorKind::Input, "cannot compile the identity string");
  Circuit c{p.qubits, {}};
  std::vector<int> sites;
  for (int s = 0; s < p.qubits; ++s) {
    if (p.letter(s) != 'I') sites.push_back(s);
  }
  if (sites.size() == 1) {
    const int s = sites[0];
    switch (p.letter(s)) {
      case 'X': c.rx(s, 2 * theta); break;
      case 'Y': c.ry(s, 2 * theta); break;
      default: c.rz(s, 2 * theta); break;
    }
    return c;
  }
  if (sites.size() == 2) {
    // Rotate every site into the X basis, then a single Rxx.
    auto pre = [&](int s) {
      if (p.letter(s) == 'Y') c.rz(s, -kHalfPi);
      if (p.letter(s) == 'Z') c.ry(s, kHalfPi);
    };
    auto post = [&](int s) {
      if (p.letter(s) == 'Y') c.rz(s, kHalfPi);
      if (p.letter(s) == 'Z') c.ry(s, -kHalfPi);
    };
    pre(sites[0]);
    pre(sites[1]);
    c.rxx(sites[0], sites[1], 2 * theta);
    post(sites[0]);
    post(sites[1]);
    return c;
  }
  // Weight >= 3: rotate into the Z basis and use a CNOT parity ladder.
  for (int s : sites) {
    if (p.letter(s) == 'X') c.ry(s, -kHalfPi);
    if (p.letter(s) == 'Y') c.rx(s, kHalfPi);
  }
  for (std::size_t i = 0; i + 1 < sites.size(); ++i) c.cnot(sites[i], sites[i + 1]);
  c.rz(sites.back(), 2 * theta);
  for (std::size_t i = sites.size() - 1; i-- > 0;) c.cnot(sites[i], sites[i + 1]);
  for (int s : sites) {
    if (p.letter(s) == 'X') c.ry(s, kHalfPi);
    if (p.letter(s) == 'Y') c.rx(s, -kHalfPi);
  }
  return c;
}

CompiledPlan compile_plan(const EvolutionPlan& plan, const SplitHamiltonian& h, const Circuit* prep,
                          const CountPolicy& policy) {
  if (plan.formula == Formula::QDrift) {
    fail(ErrorKind::Input, "qDRIFT plans are compiled per trajectory, not as a fixed circuit");
  }
  if (plan.trotter_r < 1) fail(ErrorKind::Input, "Trotter number must be at least 1");
  const int q = h.qubits();
  const std::vector<PauliTerm> terms = ordered_terms(h);
  const std::size_t m = terms.size();
  const double dt = plan.time / plan.trotter_r;

  // Sections are merged as one stream; each surviving gate is attributed to
  // the section that emitted it.
  Circuit raw{q, {}};
  std::vector<int> section;
  std::vector<std::string> labels;
  auto emit = [&](const Circuit& c, int sec) {
    raw.append(c);
    section.insert(section.end(), c.gates.size(), sec);
  };
  if (prep) {
    labels.push_back("prep");
    emit(*prep, 0);
  }
  std::mt19937_64 rng(plan.rng_seed);
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  for (int step = 0; step < plan.trotter_r; ++step) {
    const int sec = static_cast<int>(labels.size());
    labels.push_back("step " + std::to_string(step + 1));
    auto put = [&](std::size_t i, double tau) { emit(compile_pauli_exp(terms[i].string, terms[i].coeff * tau), sec); };
    switch (plan.formula) {
      case Formula::First:
        for (std::size_t i = 0; i < m; ++i) put(i, dt);
        break;
      case Formula::RandomizedFirst:
        if (plan.randomization == RandomizationMode::Permutation) {
          std::iota(order.begin(), order.end(), 0);
          std::shuffle(order.begin(), order.end(), rng);
        } else if (rng() & 1U) {
          std::reverse(order.begin(), order.end());
        }
        for (std::size_t i : order) put(i, dt);
        break;
      case Formula::Second:
        if (m == 0) break;
        for (std::size_t i = 0; i + 1 < m; ++i) put(i, dt / 2);
        put(m - 1, dt);
        for (std::size_t i = m - 1; i-- > 0;) put(i, dt / 2);
        break;
      case Formula::QDrift: break;
    }
  }

  CompiledPlan res;
  res.circuit.qubits = q;
  res.report.n_qubits = q;
  for (const auto& l : labels) res.report.steps.push_back({l, 0, 0, 0});
  for (const auto& t : merge_tagged(q, raw.gates, section)) {
    const Gate& g = t.g;
    res.circuit.gates.push_back(g);
    StepCount& sc = res.report.steps[t.tag];
    if (g.two_qubit()) {
      ++sc.n_2q;
      ++res.report.n_2q;
    } else if (g.kind == GateKind::Rz) {
      ++sc.n_rz;
      ++res.report.n_rz;
      if (!policy.virtual_rz) {
        ++sc.n_1q;
        ++res.report.n_1q;
      }
    } else {
      ++sc.n_1q;
      ++res.report.n_1q;
    }
  }
  return res;
}

PauliSum binary_baseline(const SparseHermitian& a, int n_logical, double padding_diagonal) {
  if (n_logical < 1 || n_logical > a.dim()) fail(ErrorKind::Input, "invalid logical dimension");
  std::int64_t dim = 1;
  while (dim < a.dim()) dim *= 2;
  std::vector<MatrixEntry> e;
  for (const auto& x : a.entries()) {
    const bool r_in = x.row < n_logical, c_in = x.col < n_logical;
    if (r_in != c_in) continue;
    e.push_back(x);
  }
  for (std::int64_t i = n_logical; i < dim; ++i) {
    if (i >= a.dim() && padding_diagonal != 0.0) e.push_back({i, i, padding_diagonal});
  }
  return pauli_decompose(SparseHermitian(dim, e));
}

PowerLawFit fit_power_law(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 4) fail(ErrorKind::Input, "power-law fit needs at least 4 points");
  const std::size_t n = points.size();
  Eigen::MatrixXd a(n, 2);
  Eigen::VectorXd y(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (points[i].first <= 0.0 || points[i].second <= 0.0) fail(ErrorKind::Input, "power-law fit needs positive data");
    a(i, 0) = 1.0;
    a(i, 1) = std::log(points[i].first);
    y[i] = std::log(points[i].second);
  }
  const Eigen::Vector2d beta = a.colPivHouseholderQr().solve(y);
  const Eigen::VectorXd resid = y - a * beta;
  const double mean = y.mean();
  const double ss_tot = (y.array() - mean).square().sum();
  PowerLawFit f;
  f.exponent = beta[1];
  f.prefactor = std::exp(beta[0]);
  f.r_squared = ss_tot > 0.0 ? 1.0 - resid.squaredNorm() / ss_tot : 1.0;
  return f;
}

void apply_circuit(const Circuit& c, StateVector& psi) {
  if (psi.size() != (Eigen::Index{1} << c.qubits)) fail(ErrorKind::Shape, "state dimension mismatch");
  for (const Gate& g : c.gates) {
    const char letter = g.kind == GateKind::Rx ? 'X' : g.kind == GateKind::Ry ? 'Y' : g.kind == GateKind::Rz ? 'Z' : 'X';
    PauliString p = PauliString::single(c.qubits, g.q0, letter);
    if (g.two_qubit()) p.x |= std::uint64_t{1} << g.q1;
    apply_pauli_rotation(p, g.angle / 2, psi);
  }
}

Eigen::MatrixXcd circuit_unitary(const Circuit& c) {
  if (c.qubits > 10) fail(ErrorKind::Capacity, "circuit_unitary supports at most 10 qubits");
  const Eigen::Index dim = Eigen::Index{1} << c.qubits;
  Eigen::MatrixXcd u(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    StateVector e = basis_state(dim, j);
    apply_circuit(c, e);
    u.col(j) = e;
  }
  return u;
}

std::string to_qasm(const Circuit& c) {
  std::ostringstream os;
  os.precision(17);
  os << "OPENQASM 3.0;\nqubit[" << c.qubits << "] q;\n";
  for (const Gate& g : c.gates) {
    os << to_string(g.kind) << "(" << g.angle << ") q[" << g.q0 << "]";
    if (g.two_qubit()) os << ", q[" << g.q1 << "]";
    os << ";\n";
  }
  return os.str();
}

}  // namespace hemb
