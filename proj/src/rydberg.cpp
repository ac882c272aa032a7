#include "hemb/rydberg.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "hemb/errors.hpp"

namespace hemb {

AtomArray AtomArray::chain(int n, double r, double x) {
  if (n < 1 || !(r > 0.0)) fail(ErrorKind::Geometry, "chain requires n >= 1 atoms and spacing r > 0");
  AtomArray a;
  for (int j = 0; j < n; ++j) a.positions.push_back({x, j * r});
  return a;
}

AtomArray AtomArray::two_chains(int n, double r, double separation) {
  if (!(separation > 0.0)) fail(ErrorKind::Geometry, "chain separation must be positive");
  AtomArray a = chain(n, r, separation);
  const AtomArray b = chain(n, r, 0.0);
  a.positions.insert(a.positions.end(), b.positions.begin(), b.positions.end());
  return a;
}

std::vector<Interaction> interaction_terms(const AtomArray& atoms, const RydbergParams& p) {
  if (!(p.c6 > 0.0)) fail(ErrorKind::Input, "C6 must be positive");
  std::vector<Interaction> out;
  const int n = atoms.size();
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) {
      const double dx = atoms.positions[j][0] - atoms.positions[k][0];
      const double dy = atoms.positions[j][1] - atoms.positions[k][1];
      const double d2 = dx * dx + dy * dy;
      if (d2 < 1e-18) fail(ErrorKind::Geometry, "atoms " + std::to_string(j) + " and " + std::to_string(k) + " overlap");
      out.push_back({j, k, p.c6 / (d2 * d2 * d2)});
    }
  }
  return out;
}

Eigen::VectorXd rydberg_diagonal(const AtomArray& atoms, const std::vector<double>& delta, const RydbergParams& p) {
  const int n = atoms.size();
  if (n > 24) fail(ErrorKind::Capacity, "too many atoms for a statevector");
  if (delta.size() != 1 && static_cast<int>(delta.size()) != n) {
    fail(ErrorKind::Shape, "detuning must be global or per atom");
  }
  const auto terms = interaction_terms(atoms, p);
  const std::int64_t dim = std::int64_t{1} << n;
  Eigen::VectorXd d = Eigen::VectorXd::Zero(dim);
  for (std::int64_t b = 0; b < dim; ++b) {
    double e = 0.0;
    for (int j = 0; j < n; ++j) {
      if ((b >> j) & 1) e -= delta.size() == 1 ? delta[0] : delta[j];
    }
    for (const auto& t : terms) {
      if (((b >> t.j) & 1) && ((b >> t.k) & 1)) e += t.coeff;
    }
    d[b] = e;
  }
  return d;
}

SparseHermitian rydberg_hamiltonian(const AtomArray& atoms, double omega, double phi,
                                    const std::vector<double>& delta, const RydbergParams& p) {
  const int n = atoms.size();
  if (n > 14) fail(ErrorKind::Capacity, "rydberg_hamiltonian supports at most 14 atoms");
  const Eigen::VectorXd d = rydberg_diagonal(atoms, delta, p);
  const std::int64_t dim = d.size();
  std::vector<MatrixEntry> e;
  for (std::int64_t b = 0; b < dim; ++b) {
    if (d[b] != 0.0) e.push_back({b, b, d[b]});
  }
  if (omega != 0.0) {
    // <...0_j...| H |...1_j...> = (Omega / 2) e^{i phi}
    const cplx amp = 0.5 * omega * std::exp(cplx(0.0, phi));
    for (std::int64_t b = 0; b < dim; ++b) {
      for (int j = 0; j < n; ++j) {
        if (((b >> j) & 1) == 0) e.push_back({b, b | (std::int64_t{1} << j), amp});
      }
    }
  }
  return SparseHermitian(dim, e);
}

std::vector<double> chain_detunings(int N, double r, double c6) {
  if (N < 2) fail(ErrorKind::Input, "chain_detunings requires N >= 2");
  if (!(r > 0.0) || !(c6 > 0.0)) fail(ErrorKind::Input, "r and C6 must be positive");
  const int n = N - 1;
  const double scale = c6 / std::pow(r, 6);
  auto odd = [](int count) {
    double s = 0.0;
    for (int m = 1; m <= count; ++m) s += 1.0 / std::pow(2.0 * m - 1.0, 6);
    return s;
  };
  auto even = [](int count) {
    double s = 0.0;
    for (int m = 1; m <= count; ++m) s += 1.0 / std::pow(2.0 * m, 6);
    return s;
  };
  // Atom j sees its excited partners at odd distances on one side and even
  // distances on the other when it flips between consecutive codewords.
  std::vector<double> delta(n);
  for (int j = 1; j <= n; ++j) {
    delta[j - 1] = (j % 2 == 1) ? scale * (odd((n + 1 - j) / 2) + even((j - 1) / 2))
                                : scale * (odd(j / 2) + even((n - j) / 2));
  }
  return delta;
}

Code product_code(const Code& high, const Code& low) {
  if (high.q + low.q > 62) fail(ErrorKind::Capacity, "product code exceeds 62 qubits");
  Code c{high.n * low.n, high.q + low.q, {}};
  for (auto w1 : high.words) {
    for (auto w2 : low.words) c.words.push_back((w1 << low.q) | w2);
  }
  return c;
}

Eigen::MatrixXd effective_potential(const PotentialOptions& opt) {
  const int n = opt.atoms_per_chain;
  const AtomArray atoms = AtomArray::two_chains(n, opt.r, opt.separation);
  std::vector<double> delta = opt.per_atom_delta.empty() ? std::vector<double>{opt.global_delta} : opt.per_atom_delta;
  const Eigen::VectorXd d = rydberg_diagonal(atoms, delta, opt.params);
  const Code axis = make_code(Scheme::Antiferromagnetic, n + 1);
  Eigen::MatrixXd grid(axis.n, axis.n);
  for (int j = 0; j < axis.n; ++j) {
    for (int k = 0; k < axis.n; ++k) {
      grid(j, k) = d[static_cast<Eigen::Index>((axis.words[j] << n) | axis.words[k])];
    }
  }
  grid.array() -= grid.minCoeff();
  return grid;
}

Waveform::Waveform(std::vector<double> times, std::vector<double> values)
    : times_(std::move(times)), values_(std::move(values)) {
  if (times_.size() < 2 || times_.size() != values_.size()) {
    fail(ErrorKind::Input, "waveform needs at least two breakpoints with matching values");
  }
  for (std::size_t i = 1; i < times_.size(); ++i) {
    if (!(times_[i] > times_[i - 1])) fail(ErrorKind::Input, "waveform breakpoints must be strictly increasing");
  }
}

double Waveform::at(double t) const {
  if (t <= times_.front()) return values_.front();
  if (t >= times_.back()) return values_.back();
  const auto it = std::upper_bound(times_.begin(), times_.end(), t);
  const std::size_t i = static_cast<std::size_t>(it - times_.begin());
  const double w = (t - times_[i - 1]) / (times_[i] - times_[i - 1]);
  return values_[i - 1] + w * (values_[i] - values_[i - 1]);
}

double Waveform::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

void Pulse::validate() const {
  if (omega.times().empty() || delta.times().empty() || phi.times().empty()) {
    fail(ErrorKind::Input, "pulse waveforms must be set");
  }
  const double T = omega.end();
  for (const Waveform* w : {&omega, &delta, &phi}) {
    if (std::abs(w->start()) > 1e-15 || std::abs(w->end() - T) > 1e-12 * std::max(1.0, T)) {
      fail(ErrorKind::Input, "pulse waveforms must share the interval [0, T]");
    }
  }
  for (double v : omega.values()) {
    if (v < 0.0) fail(ErrorKind::Input, "Rabi frequency must be nonnegative");
  }
}

Pulse prep_pulse(double duration, double omega_max, double delta0, double delta1, double ramp) {
  if (!(ramp > 0.0) || !(2 * ramp < duration)) fail(ErrorKind::Input, "ramp must fit twice in the duration");
  Pulse p;
  p.omega = Waveform({0.0, ramp, duration - ramp, duration}, {0.0, omega_max, omega_max, 0.0});
  p.delta = Waveform({0.0, ramp, duration - ramp, duration}, {delta0, delta0, delta1, delta1});
  p.phi = Waveform({0.0, duration}, {0.0, 0.0});
  return p;
}

PulseResult evolve_pulse(const AtomArray& atoms, const Pulse& pulse, double dt, const StateVector& psi0,
                         const Code* code, const RydbergParams& p) {
  pulse.validate();
  const int n = atoms.size();
  if (n > 14) fail(ErrorKind::Capacity, "evolve_pulse supports at most 14 atoms");
  const std::int64_t dim = std::int64_t{1} << n;
  if (psi0.size() != dim) fail(ErrorKind::Shape, "initial state has the wrong dimension");
  const double T = pulse.duration();
  if (!(dt > 0.0)) fail(ErrorKind::Input, "dt must be positive");
  const double ratio = T / dt;
  const auto steps = static_cast<std::int64_t>(std::llround(ratio));
  if (steps < 1 || std::abs(ratio - static_cast<double>(steps)) > 1e-6) {
    fail(ErrorKind::Input, "dt must divide the pulse duration");
  }

  const Eigen::VectorXd inter = rydberg_diagonal(atoms, {0.0}, p);
  Eigen::VectorXd count(dim);
  for (std::int64_t b = 0; b < dim; ++b) count[b] = static_cast<double>(__builtin_popcountll(b));

  PulseResult res;
  const double spread = inter.maxCoeff() + pulse.delta.max_abs() * n;
  res.coarse_step_warning = dt * dt * pulse.omega.max_abs() * n * spread > 0.05;

  StateVector psi = psi0;
  auto diagonal_half = [&](double delta) {
    for (std::int64_t b = 0; b < dim; ++b) psi[b] *= std::exp(cplx(0.0, -0.5 * dt * (inter[b] - delta * count[b])));
  };
  for (std::int64_t s = 0; s < steps; ++s) {
    const double tm = (s + 0.5) * dt;
    const double om = pulse.omega.at(tm), de = pulse.delta.at(tm), ph = pulse.phi.at(tm);
    diagonal_half(de);
    if (om != 0.0) {
      // exp(-i a (cos(phi) X - sin(phi) Y)) on every atom, a = Omega dt / 2.
      const double a = 0.5 * om * dt;
      const cplx c(std::cos(a), 0.0);
      const cplx off01 = cplx(0.0, -std::sin(a)) * std::exp(cplx(0.0, ph));
      const cplx off10 = cplx(0.0, -std::sin(a)) * std::exp(cplx(0.0, -ph));
      for (int j = 0; j < n; ++j) {
        const std::int64_t bit = std::int64_t{1} << j;
        for (std::int64_t b = 0; b < dim; ++b) {
          if (b & bit) continue;
          const cplx a0 = psi[b], a1 = psi[b | bit];
          psi[b] = c * a0 + off01 * a1;
          psi[b | bit] = off10 * a0 + c * a1;
        }
      }
    }
    diagonal_half(de);
  }
  res.norm = psi.norm();
  if (code) {
    if (code->q != n) fail(ErrorKind::Shape, "code width does not match the atom count");
    double o = 0.0;
    for (auto w : code->words) o += std::norm(psi[static_cast<std::int64_t>(w)]);
    res.code_overlap = o;
  }
  res.final_state = std::move(psi);
  return res;
}

double time_rescale(double t_physical) { return 1e6 * t_physical; }
double time_unscale(double t_eff) { return 1e-6 * t_eff; }
double drive_rescale(double omega, double h) { return h * h * omega / (kTwoPi * 1e6); }

PostselectResult postselect(const std::vector<std::string>& samples, const Code& code) {
  PostselectResult res;
  res.counts.assign(code.n, 0);
  res.distribution.assign(code.n, 0.0);
  std::int64_t legit = 0;
  for (const auto& s : samples) {
    if (static_cast<int>(s.size()) != code.q) fail(ErrorKind::Input, "sample '" + s + "' has the wrong length");
    std::uint64_t b = 0;
    for (int i = 0; i < code.q; ++i) {
      const char ch = s[code.q - 1 - i];
      if (ch != '0' && ch != '1') fail(ErrorKind::Input, "sample '" + s + "' is not a bitstring");
      if (ch == '1') b |= std::uint64_t{1} << i;
    }
    ++res.total;
    const int idx = code.index_of(b);
    if (idx >= 0) {
      ++res.counts[idx];
      ++legit;
    }
  }
  res.empty = legit == 0;
  res.legit_fraction = res.total ? static_cast<double>(legit) / res.total : 0.0;
  if (!res.empty) {
    for (int j = 0; j < code.n; ++j) res.distribution[j] = static_cast<double>(res.counts[j]) / legit;
  }
  return res;
}

std::vector<std::string> sample_bitstrings(const StateVector& psi, int qubits, int shots, std::uint64_t seed) {
  if (psi.size() != (std::int64_t{1} << qubits)) fail(ErrorKind::Shape, "state does not match the qubit count");
  std::vector<double> w(psi.size());
  for (Eigen::Index i = 0; i < psi.size(); ++i) w[i] = std::norm(psi[i]);
  std::discrete_distribution<std::int64_t> dist(w.begin(), w.end());
  std::mt19937_64 rng(seed);
  std::vector<std::string> out;
  out.reserve(shots);
  for (int s = 0; s < shots; ++s) {
    const std::int64_t b = dist(rng);
    std::string str(qubits, '0');
    for (int i = 0; i < qubits; ++i) {
      if ((b >> i) & 1) str[qubits - 1 - i] = '1';
    }
    out.push_back(std::move(str));
  }
  return out;
}

}  // namespace hemb
