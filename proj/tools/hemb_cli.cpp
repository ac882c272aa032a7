#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/Dense>
#include <json.hpp>

#include "hemb/algebra.hpp"
#include "hemb/compiler.hpp"
#include "hemb/errors.hpp"
#include "hemb/graphs.hpp"
#include "hemb/io.hpp"
#include "hemb/realspace.hpp"
#include "hemb/rydberg.hpp"
#include "hemb/schemes.hpp"
#include "hemb/search.hpp"
#include "hemb/simulators.hpp"

namespace fs = std::filesystem;
using namespace hemb;

namespace {

constexpr const char* kVersion = "1.0.0";
constexpr int kExitConfig = 2;
constexpr int kExitCapacity = 3;
constexpr int kExitValidation = 4;

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<json>> rows;

  void add(std::vector<json> row) { rows.push_back(std::move(row)); }
};

struct Common {
  std::uint64_t seed = 0;
  std::string out;
  std::string format = "csv";
};

struct Run {
  Common common;
  std::string task;
  CLI::App* sub = nullptr;
  std::function<void(Run&)> body;
  std::vector<Table> tables;
  json results = json::object();
  std::vector<std::string> validation_failures;
};

std::string cell_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  if (v.is_number()) return format_number(v.get<double>());
  return v.dump();
}

std::string render(const Table& t, const std::string& format) {
  if (format == "json") {
    json rows = json::array();
    for (const auto& r : t.rows) {
      json obj = json::object();
      for (std::size_t c = 0; c < t.columns.size(); ++c) obj[t.columns[c]] = r[c];
      rows.push_back(std::move(obj));
    }
    return json{{"columns", t.columns}, {"rows", rows}}.dump(2) + "\n";
  }
  std::string s = csv_row(t.columns);
  for (const auto& r : t.rows) {
    std::vector<std::string> cells;
    for (const auto& v : r) cells.push_back(cell_text(v));
    s += csv_row(cells);
  }
  return s;
}

std::string default_out_dir() {
  if (const char* env = std::getenv("HEMB_OUT_DIR"); env && *env) return env;
  return "hemb_out";
}

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json parameters_of(const CLI::App* sub) {
  json p = json::object();
  for (const CLI::Option* opt : sub->get_options()) {
    const std::string name = opt->get_single_name();
    if (name == "help" || name.empty()) continue;
    if (opt->count() > 0) {
      const auto& r = opt->results();
      p[name] = r.size() == 1 ? json(r.front()) : json(r);
    } else {
      p[name] = opt->get_default_str();
    }
  }
  return p;
}

void write_outputs(const Run& run, const std::vector<std::string>& argv) {
  const fs::path dir = run.common.out;
  fs::create_directories(dir);
  const std::string ext = run.common.format == "json" ? ".json" : ".csv";
  json files = json::array();
  for (const auto& t : run.tables) {
    const std::string file = t.name + ext;
    write_file_atomic(dir / file, render(t, run.common.format));
    files.push_back(file);
  }
  json manifest = {
      {"task", run.task},
      {"seed", run.common.seed},
      {"format", run.common.format},
      {"parameters", parameters_of(run.sub)},
      {"results", run.results},
      {"outputs", files},
      {"command", argv},
      {"versions",
       {{"hemb", kVersion},
        {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                      std::to_string(EIGEN_MINOR_VERSION)},
        {"cli11", CLI11_VERSION},
        {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                              std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                              std::to_string(NLOHMANN_JSON_VERSION_PATCH)}}},
      {"created_utc", utc_now()},
  };
  write_file_atomic(dir / "manifest.json", manifest.dump(2) + "\n");
}

int report_error(const std::string& category, const std::string& kind, const std::string& message, int code) {
  std::cerr << json{{"status", "error"}, {"category", category}, {"kind", kind}, {"message", message}}.dump()
            << "\n";
  return code;
}

int exit_code_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::Capacity:
    case ErrorKind::Saturation:
    case ErrorKind::FastForward:
      return kExitCapacity;
    case ErrorKind::Validation:
      return kExitValidation;
    default:
      return kExitConfig;
  }
}

const char* category_for(int code) {
  switch (code) {
    case kExitCapacity: return "capacity";
    case kExitValidation: return "validation";
    default: return "config";
  }
}

std::vector<double> time_grid(double T, int samples) {
  if (samples < 2) fail(ErrorKind::Input, "at least two time samples are required");
  if (!(T > 0.0)) fail(ErrorKind::Input, "evolution time must be positive");
  std::vector<double> ts(static_cast<std::size_t>(samples));
  for (int k = 0; k < samples; ++k) ts[static_cast<std::size_t>(k)] = T * k / (samples - 1);
  return ts;
}

/// X rotations that take |0...0> to a given basis state.
Circuit basis_prep(int qubits, std::uint64_t word) {
  Circuit c{qubits, {}};
  for (int q = 0; q < qubits; ++q) {
    if ((word >> q) & 1ULL) c.rx(q, std::numbers::pi);
  }
  return c;
}

StateVector code_state(const Code& code, const std::vector<cplx>& amplitudes) {
  StateVector psi = StateVector::Zero(Eigen::Index{1} << code.q);
  for (std::size_t j = 0; j < amplitudes.size(); ++j) psi[static_cast<Eigen::Index>(code.words[j])] = amplitudes[j];
  return psi;
}

double penalty_for(const EmbeddingArtifact& art, const SparseHermitian& a, double T, double g_opt) {
  if (art.penalty_free) return 0.0;
  if (g_opt >= 0.0) return g_opt;
  return choose_penalty(art, a, T, 5e-2).g;
}

int trotter_for(EvolutionPlan plan, const SplitHamiltonian& h, const Code& code, double T, int r_opt,
                std::uint64_t seed) {
  if (r_opt > 0) return r_opt;
  TrotterErrorOptions opt;
  opt.subspace = &code;
  opt.seed = derive_seed(seed, 1);
  plan.trotter_r = 1;
  return find_trotter_number(plan, h, T, 5e-2, opt).r;
}

StateVector simulate(const EvolutionPlan& tmpl, const SplitHamiltonian& h, double t, const StateVector& psi0,
                     const Code& code, double& leak) {
  if (t == 0.0) {
    leak = leakage(psi0, code);
    return psi0;
  }
  EvolutionPlan plan = tmpl;
  plan.time = t;
  const SimResult r = evolve_trotter(plan, h, psi0, &code);
  leak = r.leakage;
  return r.final_state;
}

Table gate_table(const std::string& name, const std::vector<std::pair<std::string, CompiledPlan>>& entries,
                 const std::vector<int>& rs) {
  Table t{name, {"encoding", "r", "qubits", "n_1q", "n_2q", "n_rz"}, {}};
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const auto& rep = entries[k].second.report;
    t.add({entries[k].first, rs[k], rep.n_qubits, rep.n_1q, rep.n_2q, rep.n_rz});
  }
  return t;
}

SplitHamiltonian binary_split(const SparseHermitian& a, int n, Code& code) {
  const PauliSum b = binary_baseline(a, n);
  code = Code{n, b.qubits(), {}};
  for (int i = 0; i < n; ++i) code.words.push_back(static_cast<std::uint64_t>(i));
  EmbeddingArtifact ba;
  ba.code = code;
  ba.h_pen = PauliSum(b.qubits());
  ba.q_op = b;
  ba.penalty_free = true;
  return SplitHamiltonian::from_artifact(ba, 0.0);
}

// ---------------------------------------------------------------- walk tasks

struct WalkOptions {
  std::string graph = "chain";
  int N = 8;
  int d = 1;
  int h = 2;
  std::string op = "laplacian";
  std::string scheme = "penalty-free-one-hot";
  std::string formula = "first";
  int r = 0;
  double g = -1.0;
  double time = 5.0;
  int samples = 51;
  int start = 0;
};

void run_walk(Run& run, const WalkOptions& o, const std::string& table_name) {
  GraphParams gp;
  gp.N = o.N;
  gp.d = o.d;
  gp.h = o.h;
  const Graph graph = build_graph(graph_kind_from_string(o.graph), gp);
  if (o.start < 0 || o.start >= graph.n) fail(ErrorKind::Input, "start vertex out of range");
  const SparseHermitian a = o.op == "adjacency" ? adjacency(graph) : laplacian(graph);

  std::vector<int> layer(static_cast<std::size_t>(graph.n), 0);
  if (!graph.layers.empty() && o.start == 0) {
    for (std::size_t l = 0; l < graph.layers.size(); ++l) {
      for (int v : graph.layers[l]) layer[static_cast<std::size_t>(v)] = static_cast<int>(l);
    }
  } else {
    layer = graph_distances(graph, o.start);
  }
  const int n_layers = *std::max_element(layer.begin(), layer.end()) + 1;

  const Scheme s = scheme_from_string(o.scheme);
  const auto art = embed_matrix(a, s);
  const double g = penalty_for(art, a, o.time, o.g);
  const SplitHamiltonian h = SplitHamiltonian::from_artifact(art, g);
  EvolutionPlan plan;
  plan.formula = formula_from_string(o.formula);
  plan.rng_seed = run.common.seed;
  plan.trotter_r = trotter_for(plan, h, art.code, o.time, o.r, run.common.seed);

  const StateVector v0 = basis_state(graph.n, o.start);
  const StateVector psi0 = basis_state(std::int64_t{1} << art.qubits(), static_cast<std::int64_t>(art.code.words[o.start]));
  const ExactEvolver exact(a);

  Table t{table_name, {"t", "layer", "population_exact", "population_embedded", "leakage"}, {}};
  double worst = 0.0;
  for (double tk : time_grid(o.time, o.samples)) {
    const StateVector ve = exact.evolve(tk, v0);
    double leak = 0.0;
    const StateVector psi = simulate(plan, h, tk, psi0, art.code, leak);
    std::vector<double> pe(static_cast<std::size_t>(n_layers), 0.0), ps(pe);
    for (int v = 0; v < graph.n; ++v) {
      const auto l = static_cast<std::size_t>(layer[static_cast<std::size_t>(v)]);
      pe[l] += std::norm(ve[v]);
      ps[l] += std::norm(psi[static_cast<Eigen::Index>(art.code.words[static_cast<std::size_t>(v)])]);
    }
    for (int l = 0; l < n_layers; ++l) {
      const auto li = static_cast<std::size_t>(l);
      t.add({tk, l, pe[li], ps[li], leak});
      worst = std::max(worst, std::abs(pe[li] - ps[li]));
    }
  }
  run.tables.push_back(std::move(t));

  Circuit prep = basis_prep(art.qubits(), art.code.words[static_cast<std::size_t>(o.start)]);
  EvolutionPlan cplan = plan;
  cplan.time = o.time;
  const auto cp = compile_plan(cplan, h, &prep);
  run.tables.push_back(gate_table(table_name + "_gates", {{to_string(s), cp}}, {plan.trotter_r}));
  run.results = {{"vertices", graph.n},
                 {"edges", graph.edges.size()},
                 {"qubits", art.qubits()},
                 {"g", g},
                 {"trotter_r", plan.trotter_r},
                 {"max_layer_population_deviation", worst}};
}

void run_gluedtrees(Run& run, WalkOptions o, bool baseline) {
  o.graph = "glued-trees";
  o.op = "adjacency";
  o.start = 0;
  run_walk(run, o, "gluedtrees");
  if (!baseline) return;

  GraphParams gp;
  gp.h = o.h;
  const Graph graph = build_graph(GraphKind::GluedTrees, gp);
  const SparseHermitian a = adjacency(graph);
  const auto art = embed_matrix(a, scheme_from_string(o.scheme));
  const SplitHamiltonian h = SplitHamiltonian::from_artifact(art, run.results["g"].get<double>());
  EvolutionPlan plan;
  plan.formula = formula_from_string(o.formula);
  plan.rng_seed = run.common.seed;
  plan.trotter_r = run.results["trotter_r"].get<int>();
  plan.time = o.time;
  TrotterErrorOptions sub;
  sub.subspace = &art.code;
  sub.seed = derive_seed(run.common.seed, 2);
  const double eps = estimate_trotter_error(plan, h, sub);

  Code bcode;
  const SplitHamiltonian bh = binary_split(a, graph.n, bcode);
  TrotterErrorOptions bsub;
  bsub.subspace = &bcode;
  bsub.seed = derive_seed(run.common.seed, 3);
  const auto found = find_trotter_number(plan, bh, plan.time, eps, bsub);
  EvolutionPlan bplan = plan;
  bplan.trotter_r = found.r;
  const auto bcp = compile_plan(bplan, bh, nullptr, CountPolicy{.virtual_rz = false});
  auto& gates = run.tables.back();
  const auto& rep = bcp.report;
  gates.add({"binary", found.r, rep.n_qubits, rep.n_1q, rep.n_2q, rep.n_rz});
  run.results["target_error"] = eps;
  run.results["binary_pauli_terms"] = bh.q_op.size();
}

// ---------------------------------------------------------------- search

struct SearchOptions {
  int N = 5;
  int d = 2;
  std::vector<int> marked;
  std::string scheme = "penalty-free-one-hot";
  std::string formula = "second";
  double gamma = -1.0;
  int r = 5;
  double g = -1.0;
  double time = -1.0;
  int samples = 51;
};

void run_search(Run& run, const SearchOptions& o) {
  SearchTask task;
  task.N = o.N;
  task.d = o.d;
  task.marked = o.marked;
  if (task.marked.empty()) {
    task.marked.assign(static_cast<std::size_t>(o.d), 1);
    task.marked[0] = o.N;
  }
  if (static_cast<int>(task.marked.size()) != o.d) fail(ErrorKind::Input, "marked vertex needs d coordinates");
  task.gamma = o.gamma > 0 ? o.gamma : optimize_gamma(o.N, o.d, task.marked).gamma;
  task.p_target = default_success_probability(o.N);
  task.t_p = success_time(o.N, o.d, task.gamma, task.p_target, task.marked);
  const double T = o.time > 0 ? o.time : task.t_p;

  const Scheme s = scheme_from_string(o.scheme);
  const auto art = search_embedding(task, s);
  const double g = art.penalty_free ? 0.0 : (o.g >= 0 ? o.g : spatial_search_penalty(1.0, o.N, o.d, task.t_p));
  const SplitHamiltonian h = SplitHamiltonian::from_artifact(art, g);
  EvolutionPlan plan;
  plan.formula = formula_from_string(o.formula);
  plan.rng_seed = run.common.seed;
  plan.trotter_r = o.r;
  if (plan.trotter_r < 1) fail(ErrorKind::Input, "search requires --r >= 1");

  const SparseHermitian hs = search_hamiltonian(task);
  const std::int64_t dim = hs.dim();
  const auto target = lattice_index(o.N, task.marked);
  const StateVector u0 = StateVector::Constant(dim, 1.0 / std::sqrt(static_cast<double>(dim)));
  const StateVector psi0 =
      code_state(art.code, std::vector<cplx>(static_cast<std::size_t>(dim), 1.0 / std::sqrt(static_cast<double>(dim))));
  const ExactEvolver exact(hs);

  Table t{"search", {"t", "success_exact", "success_embedded", "leakage"}, {}};
  for (double tk : time_grid(T, o.samples)) {
    double leak = 0.0;
    const StateVector psi = simulate(plan, h, tk, psi0, art.code, leak);
    t.add({tk, std::norm(exact.evolve(tk, u0)[target]),
           std::norm(psi[static_cast<Eigen::Index>(art.code.words[static_cast<std::size_t>(target)])]), leak});
  }
  run.tables.push_back(std::move(t));

  Circuit prep{art.qubits(), {}};
  const std::vector<double> uniform(static_cast<std::size_t>(o.N), 1.0 / std::sqrt(static_cast<double>(o.N)));
  const bool has_prep = is_one_hot(s) || s == Scheme::Unary;
  if (is_one_hot(s)) {
    Circuit ax{o.N, {}};
    ax.rx(0, std::numbers::pi);
    ax.append(state_prep_onehot_givens(uniform));
    for (int k = 0; k < o.d; ++k) prep.append(place_on_axis(ax, k, o.d));
  } else if (s == Scheme::Unary) {
    const Circuit ax = state_prep_unary(uniform);
    for (int k = 0; k < o.d; ++k) prep.append(place_on_axis(ax, k, o.d));
  }
  EvolutionPlan cplan = plan;
  cplan.time = T;
  const auto cp = compile_plan(cplan, h, has_prep ? &prep : nullptr);
  run.tables.push_back(gate_table("search_gates", {{to_string(s), cp}}, {plan.trotter_r}));
  run.results = {{"gamma", task.gamma},
                 {"success_target", task.p_target},
                 {"t_p", task.t_p},
                 {"g", g},
                 {"qubits", art.qubits()},
                 {"state_prep_included", has_prep}};
  if (art.qubits() <= 12) run.results["fidelity"] = search_fidelity(task, s, g, T);
}

// ---------------------------------------------------------------- real space

struct FockOptions {
  int N = 5;
  std::string scheme = "penalty-free-one-hot";
  std::string formula = "randomized-first";
  double a = 2.0;
  double b = -0.5;
  int r = 11;
  double g = -1.0;
  double time = 5.0;
  int samples = 51;
};

void run_fock(Run& run, const FockOptions& o) {
  const Scheme s = scheme_from_string(o.scheme);
  const auto fe = fock_embeddings(o.N, s);
  const auto art = artifact_with_q(fe.frame, fock_hamiltonian_embedded(fe, o.a, o.b), "real-space");
  const SparseHermitian a = fock_hamiltonian(o.N, o.a, o.b);
  const double g = penalty_for(art, a, o.time, o.g);
  const SplitHamiltonian h = SplitHamiltonian::from_artifact(art, g);
  EvolutionPlan plan;
  plan.formula = formula_from_string(o.formula);
  plan.rng_seed = run.common.seed;
  plan.trotter_r = trotter_for(plan, h, art.code, o.time, o.r, run.common.seed);

  const auto ops = fock_operators(o.N);
  const SparseHermitian qx = pauli_sum_to_matrix(fe.q_x), qp = pauli_sum_to_matrix(fe.q_p2);
  const ExactEvolver exact(a);
  const StateVector v0 = basis_state(o.N, 0);
  const StateVector psi0 = basis_state(std::int64_t{1} << art.qubits(), static_cast<std::int64_t>(art.code.words[0]));

  Table t{"realspace_fock",
          {"t", "x_closed_form", "x_exact", "x_embedded", "kinetic_closed_form", "kinetic_exact", "kinetic_embedded",
           "leakage"},
          {}};
  for (double tk : time_grid(o.time, o.samples)) {
    const auto [xc, kc] = harmonic_observables(o.a, o.b, tk);
    const StateVector ve = exact.evolve(tk, v0);
    double leak = 0.0;
    const StateVector psi = simulate(plan, h, tk, psi0, art.code, leak);
    t.add({tk, xc, expectation(ops.x_hat, ve), expectation(qx, psi) + fe.dropped_x, kc,
           0.5 * expectation(ops.p2_hat, ve), 0.5 * (expectation(qp, psi) + fe.dropped_p2), leak});
  }
  run.tables.push_back(std::move(t));

  Circuit prep = basis_prep(art.qubits(), art.code.words[0]);
  EvolutionPlan cplan = plan;
  cplan.time = o.time;
  const auto cp = compile_plan(cplan, h, &prep);
  run.tables.push_back(gate_table("realspace_fock_gates", {{to_string(s), cp}}, {plan.trotter_r}));
  run.results = {{"qubits", art.qubits()}, {"g", g}, {"trotter_r", plan.trotter_r}};
}

struct FdmOptions {
  int N = 5;
  std::string scheme = "penalty-free-one-hot";
  std::string formula = "second";
  double a = 100.0;
  double x0 = 0.35;
  double y0 = 0.5;
  double sigma = 0.12;
  int r = 20;
  double g = -1.0;
  double time = 0.2;
  int samples = 21;
};

void run_fdm(Run& run, const FdmOptions& o) {
  if (o.N < 3) fail(ErrorKind::Input, "finite-difference grid needs N >= 3");
  const double step = 1.0 / (o.N - 1);
  Eigen::VectorXd v1(o.N), V(o.N * o.N);
  for (int i = 0; i < o.N; ++i) v1[i] = 0.5 * o.a * std::pow(i * step - 0.5, 2);
  for (int i = 0; i < o.N; ++i) {
    for (int j = 0; j < o.N; ++j) V[i * o.N + j] = v1[i] + v1[j];
  }
  const SparseHermitian h1 = fdm_second_derivative(o.N) * -0.5 + SparseHermitian::diagonal(v1);
  const SparseHermitian a = fdm_hamiltonian(o.N, V);

  const Scheme s = scheme_from_string(o.scheme);
  const auto a1 = embed_matrix(h1, s);
  const auto art = compose_cartesian(a1, a1);
  double g = 0.0;
  if (!art.penalty_free) g = o.g >= 0 ? o.g : penalty_for(a1, h1, o.time, -1.0);
  const SplitHamiltonian h = SplitHamiltonian::from_artifact(art, g);
  EvolutionPlan plan;
  plan.formula = formula_from_string(o.formula);
  plan.rng_seed = run.common.seed;
  plan.trotter_r = trotter_for(plan, h, art.code, o.time, o.r, run.common.seed);

  StateVector v0(a.dim());
  for (int i = 0; i < o.N; ++i) {
    for (int j = 0; j < o.N; ++j) {
      const double dx = i * step - o.x0, dy = j * step - o.y0;
      v0[i * o.N + j] = std::exp(-(dx * dx + dy * dy) / (4 * o.sigma * o.sigma));
    }
  }
  v0.normalize();
  const StateVector psi0 = code_state(art.code, std::vector<cplx>(v0.data(), v0.data() + v0.size()));
  const ExactEvolver exact(a);

  auto moments = [&](auto amp) {
    double mx = 0.0, my = 0.0;
    for (int i = 0; i < o.N; ++i) {
      for (int j = 0; j < o.N; ++j) {
        const double p = std::norm(amp(i * o.N + j));
        mx += p * i * step;
        my += p * j * step;
      }
    }
    return std::pair{mx, my};
  };
  Table t{"realspace_fdm", {"t", "x_exact", "y_exact", "x_embedded", "y_embedded", "leakage"}, {}};
  for (double tk : time_grid(o.time, o.samples)) {
    const StateVector ve = exact.evolve(tk, v0);
    double leak = 0.0;
    const StateVector psi = simulate(plan, h, tk, psi0, art.code, leak);
    const auto [xe, ye] = moments([&](int k) { return ve[k]; });
    const auto [xs, ys] =
        moments([&](int k) { return psi[static_cast<Eigen::Index>(art.code.words[static_cast<std::size_t>(k)])]; });
    t.add({tk, xe, ye, xs, ys, leak});
  }
  run.tables.push_back(std::move(t));
  run.results = {{"qubits", art.qubits()}, {"g", g}, {"trotter_r", plan.trotter_r}, {"grid_spacing", step}};
}

// ---------------------------------------------------------------- rydberg

struct RydbergOptions {
  int N = 7;
  double r = 5.9;
  double dt = 1e-10;
  double duration = 0.5e-6;
  double omega_max = 15.8e6;
  double delta0 = -5e7;
  double delta1 = 5e7;
  int shots = 1000;
  std::string shot_file;
  int atoms_per_chain = 6;
  double separation = 11.8;
  double global_delta = 5e7;
};

void run_rydberg(Run& run, const RydbergOptions& o) {
  if (o.N < 2) fail(ErrorKind::Input, "rydberg chain needs N >= 2 codewords");
  const int atoms = o.N - 1;
  const RydbergParams params;
  const auto deltas = chain_detunings(o.N, o.r, params.c6);
  Table td{"rydberg_detunings", {"atom", "delta_rad_per_s"}, {}};
  for (std::size_t j = 0; j < deltas.size(); ++j) td.add({static_cast<int>(j) + 1, deltas[j]});
  run.tables.push_back(std::move(td));

  const AtomArray chain = AtomArray::chain(atoms, o.r);
  const Code code = make_code(Scheme::Antiferromagnetic, o.N);
  const Eigen::VectorXd diag = rydberg_diagonal(chain, deltas, params);
  double e0 = diag[static_cast<Eigen::Index>(code.words[0])], spread = 0.0;
  for (auto w : code.words) spread = std::max(spread, std::abs(diag[static_cast<Eigen::Index>(w)] - e0));

  const Pulse pulse = prep_pulse(o.duration, o.omega_max, o.delta0, o.delta1);
  const auto res = evolve_pulse(chain, pulse, o.dt, basis_state(std::int64_t{1} << atoms, 0), &code, params);
  const std::vector<std::string> shots = o.shot_file.empty()
                                             ? sample_bitstrings(res.final_state, atoms, o.shots, run.common.seed)
                                             : read_shot_file(o.shot_file);
  const PostselectResult ps = postselect(shots, code);
  Table tp{"rydberg_postselect", {"codeword", "bitstring", "count", "probability"}, {}};
  for (int j = 0; j < o.N; ++j) {
    const auto js = static_cast<std::size_t>(j);
    tp.add({j + 1, code.word_string(j + 1), ps.counts.empty() ? 0 : ps.counts[js],
            ps.distribution.empty() ? 0.0 : ps.distribution[js]});
  }
  run.tables.push_back(std::move(tp));

  if (o.atoms_per_chain > 0) {
    PotentialOptions po;
    po.atoms_per_chain = o.atoms_per_chain;
    po.r = o.r;
    po.separation = o.separation;
    po.global_delta = o.global_delta;
    po.params = params;
    const Eigen::MatrixXd V = effective_potential(po);
    Table tv{"rydberg_potential", {"x_index", "y_index", "energy_rad_per_s"}, {}};
    for (Eigen::Index j = 0; j < V.rows(); ++j) {
      for (Eigen::Index k = 0; k < V.cols(); ++k) tv.add({j + 1, k + 1, V(j, k)});
    }
    run.tables.push_back(std::move(tv));
  }
  run.results = {{"atoms", atoms},
                 {"code_energy_spread", spread},
                 {"prep_code_overlap", res.code_overlap},
                 {"coarse_step_warning", res.coarse_step_warning},
                 {"shots", ps.total},
                 {"legit_fraction", ps.legit_fraction}};
}

// ---------------------------------------------------------------- resources

struct ResourceOptions {
  std::string sweep = "realspace";
  int n_min = 4;
  int n_max = 12;
  double eps = 5e-2;
  double time = 5.0;
  double a = 2.0;
  double b = -0.5;
};

void run_resources(Run& run, const ResourceOptions& o) {
  if (o.n_min < 2 || o.n_max < o.n_min) fail(ErrorKind::Input, "invalid sweep range");
  Table t{"resources", {"N", "encoding", "r", "error", "qubits", "n_1q", "n_2q", "total"}, {}};
  std::vector<std::pair<double, double>> hot, bin;
  for (int N = o.n_min; N <= o.n_max; ++N) {
    EvolutionPlan plan;
    plan.formula = Formula::RandomizedFirst;
    plan.time = o.time;
    plan.rng_seed = run.common.seed;

    const auto fe = fock_embeddings(N, Scheme::PenaltyFreeOneHot);
    const auto art = artifact_with_q(fe.frame, fock_hamiltonian_embedded(fe, o.a, o.b), "real-space");
    const SplitHamiltonian h = SplitHamiltonian::from_artifact(art, 0.0);
    TrotterErrorOptions sub;
    sub.subspace = &art.code;
    sub.seed = derive_seed(run.common.seed, static_cast<std::uint64_t>(2 * N));
    const auto rh = find_trotter_number(plan, h, o.time, o.eps, sub);
    plan.trotter_r = rh.r;
    const auto ch = compile_plan(plan, h).report;
    t.add({N, "one-hot", rh.r, rh.error, ch.n_qubits, ch.n_1q, ch.n_2q, ch.n_1q + ch.n_2q});
    hot.emplace_back(N, ch.n_1q + ch.n_2q);

    Code bcode;
    const SplitHamiltonian bh = binary_split(fock_hamiltonian(N, o.a, o.b), N, bcode);
    TrotterErrorOptions bsub;
    bsub.subspace = &bcode;
    bsub.seed = derive_seed(run.common.seed, static_cast<std::uint64_t>(2 * N + 1));
    const auto rb = find_trotter_number(plan, bh, o.time, o.eps, bsub);
    plan.trotter_r = rb.r;
    const auto cb = compile_plan(plan, bh, nullptr, CountPolicy{.virtual_rz = false}).report;
    t.add({N, "binary", rb.r, rb.error, cb.n_qubits, cb.n_1q, cb.n_2q, cb.n_1q + cb.n_2q});
    bin.emplace_back(N, cb.n_1q + cb.n_2q);
  }
  run.tables.push_back(std::move(t));
  if (hot.size() >= 4) {
    Table f{"resources_fit", {"encoding", "exponent", "prefactor", "r_squared"}, {}};
    for (const auto& [name, pts] : {std::pair{"one-hot", hot}, std::pair{"binary", bin}}) {
      const auto fit = fit_power_law(pts);
      f.add({name, fit.exponent, fit.prefactor, fit.r_squared});
      run.results[std::string(name) + "_exponent"] = fit.exponent;
    }
    run.tables.push_back(std::move(f));
  }
}

// ---------------------------------------------------------------- verify-bounds

struct BoundsOptions {
  std::string graph = "chain";
  int N = 5;
  std::vector<std::string> schemes = {"unary", "antiferromagnetic", "one-hot", "penalty-free-one-hot"};
  std::vector<double> gs = {8, 16, 32, 64};
  std::vector<double> ts = {0.5, 1, 2};
};

double spectral_norm_dense(const Eigen::MatrixXcd& m) {
  if (m.size() == 0) return 0.0;
  return Eigen::JacobiSVD<Eigen::MatrixXcd>(m).singularValues()(0);
}

void run_bounds(Run& run, const BoundsOptions& o) {
  GraphParams gp;
  gp.N = o.N;
  const Graph graph = build_graph(graph_kind_from_string(o.graph), gp);
  const SparseHermitian a = laplacian(graph);
  const ExactEvolver logical(a);
  const std::int64_t n = a.dim();

  Table t{"verify_bounds",
          {"scheme", "g", "t", "kappa", "status", "subspace_error", "error_bound", "leakage_norm", "leakage_bound"},
          {}};
  int passed = 0, failed = 0, inapplicable = 0;
  for (const auto& name : o.schemes) {
    const Scheme s = scheme_from_string(name);
    const auto art = embed_matrix(a, s);
    std::vector<std::uint64_t> comp;
    for (std::uint64_t b = 0; b < (std::uint64_t{1} << art.qubits()); ++b) {
      if (art.code.index_of(b) < 0) comp.push_back(b);
    }
    for (double g : art.penalty_free ? std::vector<double>{0.0} : o.gs) {
      const auto rep = perturbation_analysis(art, a, g);
      const ExactEvolver full(pauli_sum_to_matrix(art.hamiltonian(g)));
      for (double tk : o.ts) {
        Eigen::MatrixXcd in(n, n), out(static_cast<Eigen::Index>(comp.size()), n), ref(n, n);
        for (std::int64_t j = 0; j < n; ++j) {
          const StateVector col = full.evolve(
              tk, basis_state(std::int64_t{1} << art.qubits(), static_cast<std::int64_t>(art.code.words[j])));
          for (std::int64_t i = 0; i < n; ++i) in(i, j) = col[static_cast<Eigen::Index>(art.code.words[i])];
          for (std::size_t i = 0; i < comp.size(); ++i) out(static_cast<Eigen::Index>(i), j) = col[static_cast<Eigen::Index>(comp[i])];
          ref.col(j) = logical.evolve(tk, basis_state(n, j));
        }
        const double err = spectral_norm_dense(in - ref), leak = spectral_norm_dense(out);
        std::string status;
        double eb = 0.0, lb = 0.0;
        if (art.penalty_free) {
          status = leak <= 1e-12 ? "zero-leakage" : "fail";
        } else if (!(rep.sw_valid && rep.applicable)) {
          status = "inapplicable";
        } else {
          eb = rep.leakage_bound(tk);
          lb = rep.cross_bound();
          status = (err <= eb + 1e-9 && leak <= lb + 1e-9) ? "pass" : "fail";
        }
        if (status == "fail") {
          ++failed;
          run.validation_failures.push_back(name + " g=" + format_number(g) + " t=" + format_number(tk));
        } else if (status == "inapplicable") {
          ++inapplicable;
        } else {
          ++passed;
        }
        const json kappa = std::isfinite(rep.kappa) ? json(rep.kappa) : json("inf");
        t.add({name, g, tk, art.penalty_free ? json(0.0) : kappa, status, err, eb, leak, lb});
      }
    }
  }
  run.tables.push_back(std::move(t));
  run.results = {{"passed", passed}, {"failed", failed}, {"inapplicable", inapplicable}};
}

// ---------------------------------------------------------------- app wiring

const std::vector<std::string> kSchemes = {"unary",          "antiferromagnetic", "circulant-unary",
                                           "circulant-antiferromagnetic", "one-hot", "penalty-free-one-hot"};
const std::vector<std::string> kFormulas = {"first", "randomized-first", "second"};
const std::vector<std::string> kGraphs = {"chain", "cycle", "lattice", "periodic-lattice", "binary-tree",
                                          "glued-trees"};

struct Options {
  WalkOptions walk;
  WalkOptions glued{.graph = "glued-trees", .N = 2, .d = 1, .h = 2, .op = "adjacency",
                    .scheme = "penalty-free-one-hot", .formula = "randomized-first", .r = 4, .g = -1.0,
                    .time = 2.0, .samples = 41, .start = 0};
  bool glued_baseline = false;
  SearchOptions search;
  FockOptions fock;
  FdmOptions fdm;
  RydbergOptions rydberg;
  ResourceOptions resources;
  BoundsOptions bounds;
  std::string config;
};

CLI::App* add_task(CLI::App& app, Run& run, const std::string& name, const std::string& help,
                   std::function<void(Run&)> body) {
  CLI::App* sub = app.add_subcommand(name, help);
  sub->add_option("--seed", run.common.seed, "RNG seed")->capture_default_str();
  sub->add_option("--out", run.common.out, "output directory (default $HEMB_OUT_DIR or ./hemb_out)");
  sub->add_option("--format", run.common.format, "table format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  sub->callback([&run, sub, name, body] {
    run.task = name;
    run.sub = sub;
    run.body = body;
  });
  return sub;
}

void add_scheme_plan(CLI::App* sub, std::string& scheme, std::string& formula, int& r, double& g, double& time,
                     int& samples) {
  sub->add_option("--scheme", scheme, "embedding scheme")->check(CLI::IsMember(kSchemes))->capture_default_str();
  sub->add_option("--formula", formula, "product formula")->check(CLI::IsMember(kFormulas))->capture_default_str();
  sub->add_option("--r", r, "Trotter number (0 = smallest meeting 0.05 error)")->capture_default_str();
  sub->add_option("--g", g, "penalty coefficient (negative = automatic)")->capture_default_str();
  sub->add_option("--time", time, "final evolution time")->capture_default_str();
  sub->add_option("--samples", samples, "number of time samples")->capture_default_str();
}

void build_app(CLI::App& app, Run& run, Options& o) {
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  auto* walk = add_task(app, run, "walk", "continuous-time quantum walk on a graph",
                        [&o](Run& r) { run_walk(r, o.walk, "walk"); });
  walk->add_option("--graph", o.walk.graph)->check(CLI::IsMember(kGraphs))->capture_default_str();
  walk->add_option("--N", o.walk.N, "vertices per axis")->capture_default_str();
  walk->add_option("--d", o.walk.d, "lattice dimension")->capture_default_str();
  walk->add_option("--height", o.walk.h, "tree height")->capture_default_str();
  walk->add_option("--operator", o.walk.op)->check(CLI::IsMember({"laplacian", "adjacency"}))->capture_default_str();
  walk->add_option("--start", o.walk.start, "start vertex (0-based)")->capture_default_str();
  add_scheme_plan(walk, o.walk.scheme, o.walk.formula, o.walk.r, o.walk.g, o.walk.time, o.walk.samples);

  auto* glued = add_task(app, run, "gluedtrees", "glued-trees traversal with per-layer populations and gate counts",
                         [&o](Run& r) { run_gluedtrees(r, o.glued, o.glued_baseline); });
  glued->add_option("--height", o.glued.h, "tree height")->capture_default_str();
  glued->add_flag("--baseline", o.glued_baseline, "also compile the binary-encoding baseline at equal accuracy");
  add_scheme_plan(glued, o.glued.scheme, o.glued.formula, o.glued.r, o.glued.g, o.glued.time, o.glued.samples);

  auto* search = add_task(app, run, "search", "spatial search on a periodic lattice",
                          [&o](Run& r) { run_search(r, o.search); });
  search->add_option("--N", o.search.N)->capture_default_str();
  search->add_option("--d", o.search.d)->capture_default_str();
  search->add_option("--marked", o.search.marked, "marked vertex, 1-based coordinates (default N,1,...)")
      ->delimiter(',');
  search->add_option("--gamma", o.search.gamma, "hopping rate (negative = optimized)")->capture_default_str();
  add_scheme_plan(search, o.search.scheme, o.search.formula, o.search.r, o.search.g, o.search.time,
                  o.search.samples);

  auto* fock = add_task(app, run, "realspace-fock", "1D real-space dynamics in a truncated Fock basis",
                        [&o](Run& r) { run_fock(r, o.fock); });
  fock->add_option("--N", o.fock.N, "Fock levels")->capture_default_str();
  fock->add_option("--a", o.fock.a, "quadratic coefficient")->capture_default_str();
  fock->add_option("--b", o.fock.b, "linear coefficient")->capture_default_str();
  add_scheme_plan(fock, o.fock.scheme, o.fock.formula, o.fock.r, o.fock.g, o.fock.time, o.fock.samples);

  auto* fdm = add_task(app, run, "realspace-fdm", "2D real-space dynamics on a finite-difference grid",
                       [&o](Run& r) { run_fdm(r, o.fdm); });
  fdm->add_option("--N", o.fdm.N, "grid points per axis")->capture_default_str();
  fdm->add_option("--a", o.fdm.a, "harmonic strength")->capture_default_str();
  fdm->add_option("--x0", o.fdm.x0, "initial packet centre (x)")->capture_default_str();
  fdm->add_option("--y0", o.fdm.y0, "initial packet centre (y)")->capture_default_str();
  fdm->add_option("--sigma", o.fdm.sigma, "initial packet width")->capture_default_str();
  add_scheme_plan(fdm, o.fdm.scheme, o.fdm.formula, o.fdm.r, o.fdm.g, o.fdm.time, o.fdm.samples);

  auto* ryd = add_task(app, run, "rydberg", "Rydberg penalty chain, preparation pulse and effective potential",
                       [&o](Run& r) { run_rydberg(r, o.rydberg); });
  ryd->add_option("--N", o.rydberg.N, "codewords (atoms = N - 1)")->capture_default_str();
  ryd->add_option("--r", o.rydberg.r, "atom spacing in micrometers")->capture_default_str();
  ryd->add_option("--dt", o.rydberg.dt, "pulse integration step in seconds")->capture_default_str();
  ryd->add_option("--duration", o.rydberg.duration, "pulse duration in seconds")->capture_default_str();
  ryd->add_option("--omega-max", o.rydberg.omega_max, "peak Rabi frequency")->capture_default_str();
  ryd->add_option("--delta0", o.rydberg.delta0, "initial detuning")->capture_default_str();
  ryd->add_option("--delta1", o.rydberg.delta1, "final detuning")->capture_default_str();
  ryd->add_option("--shots", o.rydberg.shots, "sampled shots")->capture_default_str();
  ryd->add_option("--shot-file", o.rydberg.shot_file, "measured bitstrings to post-select instead of sampling")
      ->check(CLI::ExistingFile);
  ryd->add_option("--atoms-per-chain", o.rydberg.atoms_per_chain, "two-chain potential size (0 = skip)")
      ->capture_default_str();
  ryd->add_option("--separation", o.rydberg.separation, "chain separation in micrometers")->capture_default_str();
  ryd->add_option("--global-delta", o.rydberg.global_delta, "global detuning for the potential")
      ->capture_default_str();

  auto* res = add_task(app, run, "resources", "gate-count sweep with power-law fits",
                       [&o](Run& r) { run_resources(r, o.resources); });
  res->add_option("--sweep", o.resources.sweep)->check(CLI::IsMember({"realspace"}))->capture_default_str();
  res->add_option("--nmin", o.resources.n_min)->capture_default_str();
  res->add_option("--nmax", o.resources.n_max)->capture_default_str();
  res->add_option("--eps", o.resources.eps, "target simulation error")->capture_default_str();
  res->add_option("--time", o.resources.time)->capture_default_str();
  res->add_option("--a", o.resources.a)->capture_default_str();
  res->add_option("--b", o.resources.b)->capture_default_str();

  auto* vb = add_task(app, run, "verify-bounds", "check the leakage bounds on exact dynamics",
                      [&o](Run& r) { run_bounds(r, o.bounds); });
  vb->add_option("--graph", o.bounds.graph)->check(CLI::IsMember(kGraphs))->capture_default_str();
  vb->add_option("--N", o.bounds.N)->capture_default_str();
  vb->add_option("--schemes", o.bounds.schemes)->delimiter(',')->check(CLI::IsMember(kSchemes))->capture_default_str();
  vb->add_option("--g", o.bounds.gs, "penalty coefficients")->delimiter(',')->capture_default_str();
  vb->add_option("--t", o.bounds.ts, "evolution times")->delimiter(',')->capture_default_str();

  auto* cfg = app.add_subcommand("run", "run a task described by a JSON config file");
  cfg->add_option("config", o.config, "config file")->required()->check(CLI::ExistingFile);
}

/// Turns {"task": name, key: value, ...} into the argument list of the task subcommand.
std::vector<std::string> config_to_args(const std::string& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::exception& e) {
    fail(ErrorKind::Input, std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) fail(ErrorKind::Input, "config must be a JSON object");
  if (!j.contains("task") || !j["task"].is_string()) fail(ErrorKind::Input, "config needs a string 'task'");
  const std::string task = j["task"].get<std::string>();
  if (task == "run") fail(ErrorKind::Input, "config task cannot be 'run'");
  std::vector<std::string> args = {task};
  auto scalar = [](const json& v) -> std::string {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
    if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
    if (v.is_number()) return format_number(v.get<double>());
    fail(ErrorKind::Input, "config values must be strings, numbers, booleans or flat arrays");
  };
  for (const auto& [key, v] : j.items()) {
    if (key == "task") continue;
    const std::string flag = "--" + key;
    if (v.is_boolean()) {
      if (v.get<bool>()) args.push_back(flag);
    } else if (v.is_array()) {
      std::string joined;
      for (const auto& e : v) joined += (joined.empty() ? "" : ",") + scalar(e);
      args.push_back(flag);
      args.push_back(joined);
    } else {
      args.push_back(flag);
      args.push_back(scalar(v));
    }
  }
  return args;
}

int execute(std::vector<std::string> args, const std::vector<std::string>& argv, bool from_config) {
  Run run;
  run.common.out = default_out_dir();
  Options opts;
  CLI::App app{"Hamiltonian-embedding experiment runner", "hemb"};
  build_app(app, run, opts);
  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error("config", "parse", e.what(), kExitConfig);
  }
  if (!opts.config.empty()) {
    if (from_config) return report_error("config", "Input", "nested run configs are not allowed", kExitConfig);
    std::vector<std::string> sub_args;
    try {
      sub_args = config_to_args(opts.config);
    } catch (const Error& e) {
      return report_error("config", to_string(e.kind()), e.what(), kExitConfig);
    }
    return execute(sub_args, argv, true);
  }
  if (!run.body) return report_error("config", "Input", "no task selected", kExitConfig);

  try {
    run.body(run);
    write_outputs(run, argv);
  } catch (const Error& e) {
    const int code = exit_code_for(e.kind());
    return report_error(category_for(code), to_string(e.kind()), e.what(), code);
  } catch (const fs::filesystem_error& e) {
    return report_error("io", "Filesystem", e.what(), 1);
  } catch (const std::exception& e) {
    return report_error("internal", "Exception", e.what(), 1);
  }
  if (!run.validation_failures.empty()) {
    std::string msg = std::to_string(run.validation_failures.size()) + " case(s) failed:";
    for (const auto& f : run.validation_failures) msg += " " + f + ";";
    return report_error("validation", "Validation", msg, kExitValidation);
  }
  std::cout << json{{"status", "ok"}, {"task", run.task}, {"out", run.common.out}}.dump() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> all(argv, argv + argc);
  return execute(std::vector<std::string>(all.begin() + 1, all.end()), all, false);
}
