#include "hemb/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace hemb {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Shape: return "shape";
    case ErrorKind::Capacity: return "capacity";
    case ErrorKind::Input: return "input";
    case ErrorKind::SchemeConstraint: return "scheme-constraint";
    case ErrorKind::Structure: return "structure";
    case ErrorKind::Composition: return "composition";
    case ErrorKind::Saturation: return "saturation";
    case ErrorKind::Geometry: return "geometry";
    case ErrorKind::Validation: return "validation";
    case ErrorKind::FastForward: return "fast-forward";
  }
  return "unknown";
}

namespace {

template <class T>
T get_required(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) fail(ErrorKind::Input, std::string("missing key '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    fail(ErrorKind::Input, std::string("bad value for '") + key + "': " + e.what());
  }
}

}  // namespace

json to_json(const PauliSum& p) {
  json terms = json::array();
  for (const auto& t : p.terms()) terms.push_back({{"pauli", t.string.letters()}, {"coeff", t.coeff}});
  return {{"qubits", p.qubits()}, {"offset", p.offset()}, {"terms", terms}};
}

PauliSum pauli_sum_from_json(const json& j) {
  PauliSum p(get_required<int>(j, "qubits"), j.value("offset", 0.0));
  for (const auto& t : get_required<json>(j, "terms")) {
    const auto s = PauliString::from_letters(get_required<std::string>(t, "pauli"));
    if (s.qubits != p.qubits()) fail(ErrorKind::Shape, "Pauli string width does not match 'qubits'");
    p.add(get_required<double>(t, "coeff"), s);
  }
  return p.normalize();
}

json to_json(const SparseHermitian& a) {
  json entries = json::array();
  for (const auto& e : a.entries()) entries.push_back({e.row, e.col, e.value.real(), e.value.imag()});
  return {{"dim", a.dim()}, {"entries", entries}};
}

SparseHermitian matrix_from_json(const json& j) {
  if (j.is_object() && j.contains("dense")) {
    const auto rows = j.at("dense");
    if (!rows.is_array() || rows.empty()) fail(ErrorKind::Input, "'dense' must be a non-empty array of rows");
    const auto n = static_cast<Eigen::Index>(rows.size());
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
      if (!rows[r].is_array() || static_cast<Eigen::Index>(rows[r].size()) != n) {
        fail(ErrorKind::Shape, "dense matrix must be square");
      }
      for (Eigen::Index c = 0; c < n; ++c) m(r, c) = rows[r][c].get<double>();
    }
    return SparseHermitian::from_dense(m);
  }
  const auto dim = get_required<std::int64_t>(j, "dim");
  if (dim < 1) fail(ErrorKind::Shape, "matrix dimension must be positive");
  std::vector<MatrixEntry> entries;
  for (const auto& e : get_required<json>(j, "entries")) {
    if (!e.is_array() || (e.size() != 3 && e.size() != 4)) {
      fail(ErrorKind::Input, "matrix entries are [row, col, re] or [row, col, re, im]");
    }
    const auto r = e[0].get<std::int64_t>(), c = e[1].get<std::int64_t>();
    if (r < 0 || c < 0 || r >= dim || c >= dim) fail(ErrorKind::Shape, "matrix entry out of range");
    const double im = e.size() == 4 ? e[3].get<double>() : 0.0;
    if (r == c && im != 0.0) fail(ErrorKind::Input, "diagonal entries must be real");
    entries.push_back({r, c, cplx(e[2].get<double>(), im)});
  }
  return SparseHermitian(dim, entries);
}

json to_json(const Code& c) {
  json words = json::array();
  for (int j = 1; j <= c.n; ++j) words.push_back(c.word_string(j));
  return {{"n", c.n}, {"qubits", c.q}, {"words", words}};
}

json to_json(const EmbeddingArtifact& a) {
  return {{"label", a.label},
          {"scheme", to_string(a.scheme)},
          {"penalty_free", a.penalty_free},
          {"code", to_json(a.code)},
          {"h_pen", to_json(a.h_pen)},
          {"q_op", to_json(a.q_op)},
          {"pen_code_energy", a.pen_code_energy},
          {"code_is_ground", a.code_is_ground}};
}

json to_json(const Circuit& c) {
  json gates = json::array();
  for (const auto& g : c.gates) {
    json q = g.two_qubit() ? json::array({g.q0, g.q1}) : json::array({g.q0});
    gates.push_back({{"gate", to_string(g.kind)}, {"qubits", q}, {"angle", g.angle}});
  }
  return {{"qubits", c.qubits}, {"gates", gates}};
}

json to_json(const GateCountReport& r) {
  json steps = json::array();
  for (const auto& s : r.steps) {
    steps.push_back({{"label", s.label}, {"n_1q", s.n_1q}, {"n_2q", s.n_2q}, {"n_rz", s.n_rz}});
  }
  return {{"n_qubits", r.n_qubits}, {"n_1q", r.n_1q}, {"n_2q", r.n_2q}, {"n_rz", r.n_rz}, {"steps", steps}};
}

json to_json(const EvolutionPlan& p) {
  return {{"formula", to_string(p.formula)},
          {"trotter_r", p.trotter_r},
          {"time", p.time},
          {"rng_seed", p.rng_seed},
          {"term_grouping", p.term_grouping == Grouping::PerPauliTerm ? "per-term" : "penalty-vs-q"},
          {"randomization", p.randomization == RandomizationMode::Permutation ? "permutation" : "coin-flip"}};
}

EvolutionPlan plan_from_json(const json& j) {
  static const char* known[] = {"formula", "trotter_r", "time", "rng_seed", "term_grouping", "randomization"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find(std::begin(known), std::end(known), it.key()) == std::end(known)) {
      fail(ErrorKind::Input, "unknown plan key '" + it.key() + "'");
    }
  }
  EvolutionPlan p;
  p.formula = formula_from_string(get_required<std::string>(j, "formula"));
  p.trotter_r = j.value("trotter_r", 1);
  p.time = j.value("time", 0.0);
  p.rng_seed = j.value("rng_seed", std::uint64_t{0});
  const std::string grouping = j.value("term_grouping", std::string("per-term"));
  if (grouping == "per-term") {
    p.term_grouping = Grouping::PerPauliTerm;
  } else if (grouping == "penalty-vs-q") {
    p.term_grouping = Grouping::PenaltyVsQ;
  } else {
    fail(ErrorKind::Input, "unknown term_grouping '" + grouping + "'");
  }
  const std::string mode = j.value("randomization", std::string("permutation"));
  if (mode == "permutation") {
    p.randomization = RandomizationMode::Permutation;
  } else if (mode == "coin-flip") {
    p.randomization = RandomizationMode::CoinFlip;
  } else {
    fail(ErrorKind::Input, "unknown randomization '" + mode + "'");
  }
  if (p.trotter_r < 1) fail(ErrorKind::Input, "trotter_r must be positive");
  return p;
}

json to_json(const PerturbationReport& r) {
  auto num = [](double x) { return std::isfinite(x) ? json(x) : json(nullptr); };
  return {{"delta", num(r.delta)},     {"delta0", num(r.delta0)},       {"lambda1", num(r.lambda1)},
          {"r_norm", num(r.r_norm)},   {"kappa", num(r.kappa)},         {"eta_bound", num(r.eta_bound)},
          {"sw_valid", r.sw_valid},    {"applicable", r.applicable},    {"cross_bound", num(r.cross_bound())}};
}

json to_json(const SimResult& r) {
  json j = {{"leakage", r.leakage}, {"samples_used", r.samples_used}};
  j["observable_mean"] = r.observable_mean ? json(*r.observable_mean) : json(nullptr);
  j["standard_error"] = r.standard_error ? json(*r.standard_error) : json(nullptr);
  return j;
}

json to_json(const Waveform& w) { return {{"times", w.times()}, {"values", w.values()}}; }

Waveform waveform_from_json(const json& j) {
  return Waveform(get_required<std::vector<double>>(j, "times"), get_required<std::vector<double>>(j, "values"));
}

json to_json(const Pulse& p) {
  return {{"omega", to_json(p.omega)}, {"delta", to_json(p.delta)}, {"phi", to_json(p.phi)}};
}

Pulse pulse_from_json(const json& j) {
  Pulse p;
  p.omega = waveform_from_json(get_required<json>(j, "omega"));
  p.delta = waveform_from_json(get_required<json>(j, "delta"));
  p.phi = j.contains("phi") ? waveform_from_json(j.at("phi")) : Waveform({0.0, p.omega.end()}, {0.0, 0.0});
  p.validate();
  return p;
}

json to_json(const AtomArray& a) {
  json pos = json::array();
  for (const auto& r : a.positions) pos.push_back({r[0], r[1]});
  return {{"positions", pos}};
}

AtomArray atoms_from_json(const json& j) {
  AtomArray a;
  for (const auto& r : get_required<json>(j, "positions")) {
    if (!r.is_array() || r.size() != 2) fail(ErrorKind::Input, "positions are [x, y] pairs");
    a.positions.push_back({r[0].get<double>(), r[1].get<double>()});
  }
  interaction_terms(a);
  return a;
}

std::string format_number(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

std::string csv_row(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    const std::string& c = cells[i];
    if (c.find_first_of(",\"\n") == std::string::npos) {
      out += c;
      continue;
    }
    out += '"';
    for (char ch : c) {
      if (ch == '"') out += '"';
      out += ch;
    }
    out += '"';
  }
  out += '\n';
  return out;
}

std::string csv_row(const std::vector<double>& cells) {
  std::vector<std::string> s;
  s.reserve(cells.size());
  for (double x : cells) s.push_back(format_number(x));
  return csv_row(s);
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) fail(ErrorKind::Input, "cannot open '" + tmp.string() + "' for writing");
    f << content;
    if (!f.flush()) fail(ErrorKind::Input, "failed writing '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(ErrorKind::Input, "cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::vector<std::string> read_shot_file(const std::filesystem::path& path) {
  std::istringstream in(read_file(path));
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    out.push_back(line);
  }
  return out;
}

}  // namespace hemb
