#pragma once

// Scenario files (JSON, schema 1) and the analyses behind the command-line
// tool: simulate, equilibria and parameter sweeps.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "swarmnet/dynamics.hpp"
#include "swarmnet/error.hpp"
#include "swarmnet/io.hpp"
#include "swarmnet/netgraph.hpp"
#include "swarmnet/numkit.hpp"
#include "swarmnet/structured.hpp"

namespace swarmnet {

inline constexpr int kScenarioSchema = 1;

enum class ModelKind { unstructured, structured_clusters, structured_moments };

inline const char* to_string(ModelKind m) {
  switch (m) {
    case ModelKind::unstructured: return "unstructured";
    case ModelKind::structured_clusters: return "structured-clusters";
    case ModelKind::structured_moments: return "structured-moments";
  }
  return "?";
}

struct GraphSpec {
  std::string generator;             // buckminster | circulant | complete | edge_list
  std::size_t n = 0;
  std::vector<std::size_t> offsets;
  std::filesystem::path edge_list;

  RegularGraph build() const {
    if (generator == "buckminster") return build_buckminster();
    if (generator == "circulant") return build_circulant(n, offsets);
    if (generator == "complete") return build_complete(n);
    if (generator == "edge_list") return read_edge_list_file(edge_list.string());
    throw InputError("graph.generator: unknown generator '" + generator + "'");
  }
};

struct DistributionSpec {
  std::string type;                  // power_law | csv | barabasi_albert
  std::size_t kmax = 0;
  double exponent = 3.0;
  std::filesystem::path path;
  std::size_t nodes = 0;
  std::size_t m = 0;
  std::uint64_t seed = 1;

  DegreeDistribution build() const {
    if (type == "power_law") return powerlaw_distribution(kmax, exponent);
    if (type == "csv") return read_distribution_file(path.string());
    if (type == "barabasi_albert") return empirical_distribution(barabasi_albert_degrees(nodes, m, seed));
    throw InputError("distribution.type: unknown type '" + type + "'");
  }
};

struct InitialSpec {
  std::string sampler = "uniform";   // uniform | biased | symmetric | state_file
  SamplerRange x_range{0.0, 0.3};
  SamplerRange y_range{0.2, 0.5};
  std::filesystem::path state_file;
};

struct Scenario {
  int schema = kScenarioSchema;
  std::string name;
  ModelKind model = ModelKind::unstructured;
  GraphSpec graph;
  ModelParams params;
  std::optional<DistributionSpec> distribution;
  InitialSpec initial;
  SolverConfig solver;
  std::filesystem::path outputs;
  nlohmann::json source;             // the parsed document, echoed in reports
};

namespace detail {

inline void check_keys(const nlohmann::json& obj, const std::string& where, std::initializer_list<const char*> allowed,
                       std::initializer_list<const char*> required = {}) {
  if (!obj.is_object()) throw InputError(where + ": expected an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : obj.items())
    if (!ok.count(key)) throw InputError((where.empty() ? key : where + "." + key) + ": unknown field");
  for (const char* key : required)
    if (!obj.contains(key)) throw InputError((where.empty() ? std::string(key) : where + "." + key) + ": missing field");
}

template <class T>
T get(const nlohmann::json& obj, const std::string& where, const char* key) {
  try {
    return obj.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError((where.empty() ? std::string(key) : where + "." + key) + ": " + e.what());
  }
}

inline SamplerRange get_range(const nlohmann::json& obj, const std::string& where, const char* key) {
  const auto v = get<std::vector<double>>(obj, where, key);
  if (v.size() != 2) throw InputError(where + "." + key + ": expected [lo, hi]");
  return {v[0], v[1]};
}

inline std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

}  // namespace detail

/// Parses a scenario document. Relative input paths resolve against `base_dir`.
/// Unknown fields are errors.
inline Scenario parse_scenario(const nlohmann::json& doc, const std::filesystem::path& base_dir = {}) {
  using detail::get;
  detail::check_keys(doc, "", {"schema", "name", "model", "graph", "params", "distribution", "initial", "solver", "outputs"},
                     {"schema", "model", "graph", "params", "initial", "solver", "outputs"});
  Scenario sc;
  sc.source = doc;
  sc.schema = get<int>(doc, "", "schema");
  if (sc.schema != kScenarioSchema)
    throw InputError("schema: unsupported version " + std::to_string(sc.schema) + " (expected " +
                     std::to_string(kScenarioSchema) + ")");
  if (doc.contains("name")) sc.name = get<std::string>(doc, "", "name");

  const auto model = get<std::string>(doc, "", "model");
  if (model == "unstructured") sc.model = ModelKind::unstructured;
  else if (model == "structured-clusters") sc.model = ModelKind::structured_clusters;
  else if (model == "structured-moments") sc.model = ModelKind::structured_moments;
  else throw InputError("model: unknown model '" + model + "'");

  const auto& g = doc.at("graph");
  detail::check_keys(g, "graph", {"generator", "n", "offsets", "path"}, {"generator"});
  sc.graph.generator = get<std::string>(g, "graph", "generator");
  if (sc.graph.generator == "circulant") {
    detail::check_keys(g, "graph", {"generator", "n", "offsets"}, {"n", "offsets"});
    sc.graph.n = get<std::size_t>(g, "graph", "n");
    sc.graph.offsets = get<std::vector<std::size_t>>(g, "graph", "offsets");
  } else if (sc.graph.generator == "complete") {
    detail::check_keys(g, "graph", {"generator", "n"}, {"n"});
    sc.graph.n = get<std::size_t>(g, "graph", "n");
  } else if (sc.graph.generator == "edge_list") {
    detail::check_keys(g, "graph", {"generator", "path"}, {"path"});
    sc.graph.edge_list = detail::resolve(base_dir, get<std::string>(g, "graph", "path"));
    if (!std::filesystem::exists(sc.graph.edge_list))
      throw InputError("graph.path: file '" + sc.graph.edge_list.string() + "' does not exist");
  } else if (sc.graph.generator == "buckminster") {
    detail::check_keys(g, "graph", {"generator"});
  } else {
    throw InputError("graph.generator: unknown generator '" + sc.graph.generator + "'");
  }

  const auto& p = doc.at("params");
  detail::check_keys(p, "params", {"gamma", "r", "alpha", "sigma"}, {"gamma", "r", "alpha", "sigma"});
  sc.params = {get<double>(p, "params", "gamma"), get<double>(p, "params", "r"), get<double>(p, "params", "alpha"),
               get<double>(p, "params", "sigma")};
  try {
    sc.params.validate();
  } catch (const InputError& e) {
    throw InputError(std::string("params: ") + e.what());
  }

  const bool structured = sc.model != ModelKind::unstructured;
  if (structured != doc.contains("distribution"))
    throw InputError(structured ? "distribution: required for structured models"
                                : "distribution: only allowed for structured models");
  if (structured) {
    const auto& d = doc.at("distribution");
    detail::check_keys(d, "distribution", {"type", "kmax", "exponent", "path", "nodes", "m", "seed"}, {"type"});
    DistributionSpec ds;
    ds.type = get<std::string>(d, "distribution", "type");
    if (ds.type == "power_law") {
      detail::check_keys(d, "distribution", {"type", "kmax", "exponent"}, {"kmax"});
      ds.kmax = get<std::size_t>(d, "distribution", "kmax");
      if (d.contains("exponent")) ds.exponent = get<double>(d, "distribution", "exponent");
    } else if (ds.type == "csv") {
      detail::check_keys(d, "distribution", {"type", "path"}, {"path"});
      ds.path = detail::resolve(base_dir, get<std::string>(d, "distribution", "path"));
      if (!std::filesystem::exists(ds.path))
        throw InputError("distribution.path: file '" + ds.path.string() + "' does not exist");
    } else if (ds.type == "barabasi_albert") {
      detail::check_keys(d, "distribution", {"type", "nodes", "m", "seed"}, {"nodes", "m"});
      ds.nodes = get<std::size_t>(d, "distribution", "nodes");
      ds.m = get<std::size_t>(d, "distribution", "m");
      if (d.contains("seed")) ds.seed = get<std::uint64_t>(d, "distribution", "seed");
    } else {
      throw InputError("distribution.type: unknown type '" + ds.type + "'");
    }
    sc.distribution = ds;
  }

  const auto& in = doc.at("initial");
  detail::check_keys(in, "initial", {"sampler", "x_range", "y_range", "range", "path"}, {"sampler"});
  sc.initial.sampler = get<std::string>(in, "initial", "sampler");
  if (sc.initial.sampler == "uniform") {
    detail::check_keys(in, "initial", {"sampler"});
  } else if (sc.initial.sampler == "biased") {
    detail::check_keys(in, "initial", {"sampler", "x_range", "y_range"}, {"x_range", "y_range"});
    sc.initial.x_range = detail::get_range(in, "initial", "x_range");
    sc.initial.y_range = detail::get_range(in, "initial", "y_range");
    try {
      validate_sampler({SamplerStyle::biased, sc.initial.x_range, sc.initial.y_range});
    } catch (const InputError& e) {
      throw InputError(std::string("initial: ") + e.what());
    }
  } else if (sc.initial.sampler == "symmetric") {
    detail::check_keys(in, "initial", {"sampler", "range"});
    sc.initial.x_range = in.contains("range") ? detail::get_range(in, "initial", "range") : SamplerRange{0.0, 0.5};
    if (!(sc.initial.x_range.lo >= 0.0 && sc.initial.x_range.lo <= sc.initial.x_range.hi &&
          sc.initial.x_range.hi <= 0.5))
      throw InputError("initial.range: symmetric sampler needs 0 <= lo <= hi <= 0.5");
  } else if (sc.initial.sampler == "state_file") {
    detail::check_keys(in, "initial", {"sampler", "path"}, {"path"});
    sc.initial.state_file = detail::resolve(base_dir, get<std::string>(in, "initial", "path"));
    if (!std::filesystem::exists(sc.initial.state_file))
      throw InputError("initial.path: file '" + sc.initial.state_file.string() + "' does not exist");
  } else {
    throw InputError("initial.sampler: unknown sampler '" + sc.initial.sampler + "'");
  }

  const auto& s = doc.at("solver");
  detail::check_keys(s, "solver",
                     {"dt", "t_end", "sample_every", "seed", "tol_stationary", "tol_consensus", "stop_when_stationary"},
                     {"dt", "t_end"});
  sc.solver.dt = get<double>(s, "solver", "dt");
  sc.solver.t_end = get<double>(s, "solver", "t_end");
  if (s.contains("sample_every")) sc.solver.sample_every = get<std::size_t>(s, "solver", "sample_every");
  if (s.contains("seed")) sc.solver.seed = get<std::uint64_t>(s, "solver", "seed");
  if (s.contains("tol_stationary")) sc.solver.tol_stationary = get<double>(s, "solver", "tol_stationary");
  if (s.contains("tol_consensus")) sc.solver.tol_consensus = get<double>(s, "solver", "tol_consensus");
  if (s.contains("stop_when_stationary"))
    sc.solver.stop_when_stationary = get<bool>(s, "solver", "stop_when_stationary");
  sc.solver.validate();

  sc.outputs = get<std::string>(doc, "", "outputs");
  return sc;
}

inline Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open scenario '" + path.string() + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError("scenario '" + path.string() + "' is not valid JSON: " + e.what());
  }
  return parse_scenario(doc, path.parent_path());
}

/// Replaces the scenario seed with $SWARMNET_SEED when set. Returns true if overridden.
inline bool apply_seed_override(Scenario& sc) {
  const char* env = std::getenv("SWARMNET_SEED");
  if (!env || !*env) return false;
  std::uint64_t seed = 0;
  const std::string s(env);
  const auto res = std::from_chars(s.data(), s.data() + s.size(), seed);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw InputError("SWARMNET_SEED must be a non-negative integer, got '" + s + "'");
  sc.solver.seed = seed;
  return true;
}

// ---------------------------------------------------------------------------
// Initial states

inline std::vector<std::vector<double>> read_numeric_csv(const std::filesystem::path& path, std::size_t columns) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open state file '" + path.string() + "'");
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    if (rows.empty() && std::isalpha(static_cast<unsigned char>(line[first]))) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    std::vector<double> row(columns);
    for (auto& v : row)
      if (!(ls >> v))
        throw InputError(path.string() + " line " + std::to_string(line_no) + ": expected " +
                         std::to_string(columns) + " numeric columns");
    rows.push_back(std::move(row));
  }
  return rows;
}

inline PopulationState initial_population(const Scenario& sc, std::size_t n) {
  const auto& in = sc.initial;
  if (in.sampler == "uniform") return sample_simplex_state(n, sc.solver.seed, {SamplerStyle::uniform, {}, {}});
  if (in.sampler == "biased")
    return sample_simplex_state(n, sc.solver.seed, {SamplerStyle::biased, in.x_range, in.y_range});
  if (in.sampler == "symmetric") {
    Rng rng(sc.solver.seed);
    PopulationState s{std::vector<double>(n), std::vector<double>(n)};
    for (std::size_t i = 0; i < n; ++i) s.x[i] = s.y[i] = rng.uniform(in.x_range.lo, in.x_range.hi);
    return s;
  }
  // state_file: node,x,y
  PopulationState s{std::vector<double>(n, -1.0), std::vector<double>(n, -1.0)};
  for (const auto& row : read_numeric_csv(in.state_file, 3)) {
    const auto i = static_cast<std::size_t>(row[0]);
    if (row[0] < 0 || i >= n) throw InputError("state file: node index out of range");
    s.x[i] = row[1];
    s.y[i] = row[2];
  }
  if (!s.in_simplex(kSimplexTolerance)) throw InputError("state file: missing nodes or state outside the simplex");
  return s;
}

inline ClusteredState initial_clusters(const Scenario& sc, std::size_t n, std::size_t kmax) {
  const auto& in = sc.initial;
  if (in.sampler == "uniform") return sample_clustered_state(n, kmax, sc.solver.seed, {SamplerStyle::uniform, {}, {}});
  if (in.sampler == "biased")
    return sample_clustered_state(n, kmax, sc.solver.seed, {SamplerStyle::biased, in.x_range, in.y_range});
  if (in.sampler == "symmetric") {
    Rng rng(sc.solver.seed);
    ClusteredState s(n, kmax);
    for (std::size_t j = 0; j < n * kmax; ++j) s.x[j] = s.y[j] = rng.uniform(in.x_range.lo, in.x_range.hi);
    return s;
  }
  // state_file: node,k,x,y
  ClusteredState s(n, kmax, -1.0, -1.0);
  for (const auto& row : read_numeric_csv(in.state_file, 4)) {
    const auto i = static_cast<std::size_t>(row[0]);
    const auto k = static_cast<std::size_t>(row[1]);
    if (row[0] < 0 || i >= n || row[1] < 1 || k > kmax) throw InputError("state file: node/cluster index out of range");
    s.xk(i, k) = row[2];
    s.yk(i, k) = row[3];
  }
  if (s.simplex_violation() > kSimplexTolerance)
    throw InputError("state file: missing clusters or state outside the simplex");
  return s;
}

// ---------------------------------------------------------------------------
// Analyses

struct EquilibriumMatch {
  ConsensusEquilibrium equilibrium;
  double distance = 0.0;   // ‖terminal - lifted equilibrium‖∞
};

/// Closest closed-form consensus equilibrium to `state`.
inline EquilibriumMatch match_equilibrium(const PopulationState& state, const ModelParams& p, std::size_t degree) {
  EquilibriumMatch best;
  best.distance = std::numeric_limits<double>::infinity();
  for (const auto& eq : all_equilibria(p, degree)) {
    double dist = 0.0;
    for (std::size_t i = 0; i < state.size(); ++i)
      dist = std::max({dist, std::abs(state.x[i] - eq.xi), std::abs(state.y[i] - eq.mu)});
    if (dist < best.distance) best = {eq, dist};
  }
  return best;
}

inline nlohmann::json equilibrium_json(const ConsensusEquilibrium& eq) {
  return {{"xi", num(eq.xi)}, {"mu", num(eq.mu)}, {"zeta", num(eq.zeta)}, {"case_tag", to_string(eq.case_tag)}};
}

inline nlohmann::json flow_json(const FlowSummary& s) {
  return {{"steps", s.steps},
          {"t_final", num(s.t_final)},
          {"stationary", s.stationary},
          {"final_rate", num(s.final_rate)},
          {"clamp_events", s.clamp_events},
          {"max_clamped", num(s.max_clamped)}};
}

inline nlohmann::json vector_json(std::span<const double> v) {
  auto a = nlohmann::json::array();
  for (double e : v) a.push_back(num(e));
  return a;
}

/// Certificate JSON or an "inapplicable" note.
template <class F>
nlohmann::json guarded_certificate(F&& make) {
  try {
    return make();
  } catch (const InapplicableCertificate& e) {
    return {{"applicable", false}, {"reason", e.what()}};
  }
}

/// Streams the output CSV to `<path>.tmp` and renames it on commit.
class AtomicFile {
 public:
  explicit AtomicFile(std::filesystem::path path) : path_(std::move(path)), tmp_(path_.string() + ".tmp") {
    if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
    out_.open(tmp_, std::ios::binary | std::ios::trunc);
    if (!out_) throw InputError("cannot write '" + tmp_.string() + "'");
  }
  ~AtomicFile() {
    if (out_.is_open()) {
      out_.close();
      std::error_code ec;
      std::filesystem::remove(tmp_, ec);
    }
  }
  AtomicFile(const AtomicFile&) = delete;
  AtomicFile& operator=(const AtomicFile&) = delete;

  std::ostream& stream() { return out_; }

  void commit() {
    out_.close();
    if (!out_) throw InputError("write failed for '" + tmp_.string() + "'");
    std::filesystem::rename(tmp_, path_);
  }

 private:
  std::filesystem::path path_, tmp_;
  std::ofstream out_;
};

struct RunOutput {
  nlohmann::json report;
  std::filesystem::path trajectory_csv;
  std::filesystem::path moments_csv;   // empty for the unstructured model
  std::filesystem::path report_json;
};

namespace detail {

inline nlohmann::json simulate_unstructured(const Scenario& sc, const RegularGraph& graph, RunOutput& out) {
  const auto state0 = initial_population(sc, graph.size());
  out.trajectory_csv = sc.outputs / "trajectory.csv";
  AtomicFile csv(out.trajectory_csv);
  TrajectoryCsvWriter writer(csv.stream(), graph.size());
  const auto traj = integrate(state0, sc.params, graph, sc.solver,
                              [&](double t, std::span<const double> s) { writer.write(t, s); });
  csv.commit();

  const auto& fin = traj.final_state();
  const double spread = consensus_spread(fin);
  const double residual = field_residual(fin, sc.params, graph);
  const auto match = match_equilibrium(fin, sc.params, graph.degree());
  const bool exact_symmetric = fin.x == fin.y;

  nlohmann::json rep;
  rep["integration"] = flow_json(traj.summary);
  rep["terminal"] = {{"x", vector_json(fin.x)}, {"y", vector_json(fin.y)}, {"x_equals_y", exact_symmetric}};
  rep["consensus"] = {{"reached", spread < sc.solver.tol_consensus}, {"spread", num(spread)},
                      {"tolerance", num(sc.solver.tol_consensus)}};
  auto eqs = nlohmann::json::array();
  for (const auto& eq : all_equilibria(sc.params, graph.degree())) eqs.push_back(equilibrium_json(eq));
  rep["equilibria"] = eqs;
  auto m = equilibrium_json(match.equilibrium);
  m["distance"] = num(match.distance);
  m["residual"] = num(residual);
  m["xi_equals_mu"] = match.equilibrium.case_tag == EquilibriumCase::symmetric;
  rep["match"] = m;
  rep["certificates"] = {
      {"cross_inhibition", guarded_certificate([&] {
         return certificate_report(match.equilibrium, certify_stability(match.equilibrium, sc.params, graph.degree()));
       })},
      {"jacobian_row_dominance", to_json(jacobian_row_dominance(jacobian(match.equilibrium, sc.params, graph)))}};
  return rep;
}

inline nlohmann::json cluster_summary(const ClusteredState& s) {
  auto rows = nlohmann::json::array();
  for (std::size_t k = 1; k <= s.kmax; ++k) {
    double xlo = 1e300, xhi = -1e300, ylo = 1e300, yhi = -1e300, xs = 0.0, ys = 0.0;
    for (std::size_t i = 0; i < s.n; ++i) {
      xlo = std::min(xlo, s.xk(i, k));
      xhi = std::max(xhi, s.xk(i, k));
      ylo = std::min(ylo, s.yk(i, k));
      yhi = std::max(yhi, s.yk(i, k));
      xs += s.xk(i, k);
      ys += s.yk(i, k);
    }
    const double nn = static_cast<double>(s.n);
    rows.push_back({{"k", k}, {"x_mean", num(xs / nn)}, {"y_mean", num(ys / nn)}, {"spread", num(std::max(xhi - xlo, yhi - ylo))}});
  }
  return rows;
}

inline double cluster_spread(const ClusteredState& s) {
  double spread = 0.0;
  for (std::size_t k = 1; k <= s.kmax; ++k) {
    double xlo = 1e300, xhi = -1e300, ylo = 1e300, yhi = -1e300;
    for (std::size_t i = 0; i < s.n; ++i) {
      xlo = std::min(xlo, s.xk(i, k));
      xhi = std::max(xhi, s.xk(i, k));
      ylo = std::min(ylo, s.yk(i, k));
      yhi = std::max(yhi, s.yk(i, k));
    }
    spread = std::max({spread, xhi - xlo, yhi - ylo});
  }
  return spread;
}

inline double vector_spread(std::span<const double> v) {
  if (v.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *hi - *lo;
}

inline double mean(std::span<const double> v) {
  double s = 0.0;
  for (double e : v) s += e;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

/// Structured certificates at consensus second moments.
inline nlohmann::json structured_certificates(double psi_x, double psi_y, double psi_z, const DegreeDistribution& dist,
                                              const ModelParams& p, std::size_t degree, const std::string& psi_source) {
  nlohmann::json c;
  c["psi_source"] = psi_source;
  c["psi_star"] = {{"x", num(psi_x)}, {"y", num(psi_y)}, {"z", num(psi_z)}};
  c["row_dominance"] = to_json(certify_structured(psi_x, psi_y, psi_z, p, degree, dist.kmax));
  const bool symmetric = std::abs(psi_x - psi_y) <= 1e-8 * std::max(1.0, std::abs(psi_x));
  if (symmetric) {
    c["symmetric_cross_inhibition"] =
        guarded_certificate([&] { return to_json(certify_symmetric_structured(0.5 * (psi_x + psi_y), dist, p, degree)); });
  } else {
    c["symmetric_cross_inhibition"] = {{"applicable", false}, {"reason", "second moments are not symmetric"}};
  }
  return c;
}

inline nlohmann::json distribution_json(const DegreeDistribution& dist, const DistributionSpec& spec) {
  nlohmann::json j = {{"type", spec.type}, {"kmax", dist.kmax}, {"mean_k", num(dist.mean_k)},
                      {"second_moment", num(dist.second_moment)}};
  if (spec.type == "power_law") j["exponent"] = num(spec.exponent);
  return j;
}

inline nlohmann::json simulate_clusters(const Scenario& sc, const RegularGraph& graph, const DegreeDistribution& dist,
                                        RunOutput& out) {
  const auto state0 = initial_clusters(sc, graph.size(), dist.kmax);
  out.trajectory_csv = sc.outputs / "trajectory.csv";
  out.moments_csv = sc.outputs / "moments.csv";
  AtomicFile csv(out.trajectory_csv);
  AtomicFile mcsv(out.moments_csv);
  ClusterCsvWriter writer(csv.stream(), graph.size(), dist.kmax);
  MomentCsvWriter mwriter(mcsv.stream());
  double worst_identity = 0.0;
  const auto traj = integrate_clusters(state0, sc.params, graph, dist, sc.solver, [&](double t, std::span<const double> s) {
    writer.write(t, s);
    const auto st = ClusteredState::from_flat(graph.size(), dist.kmax, s);
    const auto mom = compute_moments(st, dist);
    mwriter.write(t, mom.theta_x, mom.theta_y);
    for (std::size_t i = 0; i < st.n; ++i)
      worst_identity = std::max(worst_identity, std::abs(dist.mean_k * (mom.psi_x[i] + mom.psi_y[i] + mom.psi_z[i]) -
                                                         dist.second_moment));
  });
  csv.commit();
  mcsv.commit();

  const auto& fin = traj.final_state();
  const auto mom = compute_moments(fin, dist);
  const double spread = cluster_spread(fin);
  const double residual = cluster_field_residual(fin, sc.params, graph, dist);

  nlohmann::json rep;
  rep["distribution"] = distribution_json(dist, *sc.distribution);
  rep["integration"] = flow_json(traj.summary);
  rep["terminal"] = {{"clusters", cluster_summary(fin)},
                     {"theta_x", vector_json(mom.theta_x)},
                     {"theta_y", vector_json(mom.theta_y)},
                     {"x_equals_y", fin.x == fin.y}};
  rep["consensus"] = {{"reached", spread < sc.solver.tol_consensus}, {"spread", num(spread)},
                      {"tolerance", num(sc.solver.tol_consensus)}};
  rep["moment_identity_max_error"] = num(worst_identity);

  nlohmann::json m;
  try {
    const auto eq = solve_selfconsistent_theta(dist, sc.params, graph.degree());
    double dist_inf = 0.0;
    for (std::size_t i = 0; i < fin.n; ++i)
      for (std::size_t k = 1; k <= fin.kmax; ++k)
        dist_inf = std::max({dist_inf, std::abs(fin.xk(i, k) - eq.x_star[k - 1]), std::abs(fin.yk(i, k) - eq.x_star[k - 1])});
    m = {{"kind", "symmetric self-consistent"}, {"theta", num(eq.theta)}, {"psi_star", num(eq.psi_star)},
         {"iterations", eq.iterations}, {"distance", num(dist_inf)}, {"x_star", vector_json(eq.x_star)}};
  } catch (const NumericalError& e) {
    m = {{"kind", "symmetric self-consistent"}, {"error", e.what()}};
  }
  m["residual"] = num(residual);
  rep["match"] = m;
  rep["certificates"] = structured_certificates(mean(mom.psi_x), mean(mom.psi_y), mean(mom.psi_z), dist, sc.params,
                                                graph.degree(), "simulated terminal cluster state (node mean)");
  return rep;
}

inline nlohmann::json simulate_moments(const Scenario& sc, const RegularGraph& graph, const DegreeDistribution& dist,
                                       RunOutput& out) {
  // Ψ comes from the cluster steady state reached from the scenario's initial state.
  const auto state0 = initial_clusters(sc, graph.size(), dist.kmax);
  SolverConfig pre = sc.solver;
  const auto cluster_traj = integrate_clusters(state0, sc.params, graph, dist, pre, [](double, std::span<const double>) {});
  const auto& steady = cluster_traj.final_state();
  const auto frozen = FrozenPsi::from_state(steady, dist);
  const auto [tx0, ty0] = compute_theta(state0, dist);

  out.trajectory_csv = sc.outputs / "moments.csv";
  AtomicFile csv(out.trajectory_csv);
  MomentCsvWriter writer(csv.stream());
  const std::size_t n = graph.size();
  const auto traj = integrate_theta(tx0, ty0, frozen, sc.params, graph, dist.kmax, sc.solver,
                                    [&](double t, std::span<const double> s) {
                                      writer.write(t, s.subspan(0, n), s.subspan(n, n));
                                    });
  csv.commit();

  const auto& [tx, ty] = traj.states.back();
  const auto [ex, ey] = theta_equilibrium(frozen, sc.params, graph, dist.kmax);
  const double spread = std::max(vector_spread(tx), vector_spread(ty));
  const double distance = std::max(max_abs_diff(tx, ex), max_abs_diff(ty, ey));

  nlohmann::json rep;
  rep["distribution"] = distribution_json(dist, *sc.distribution);
  rep["psi_source"] = {{"kind", "cluster steady state"},
                       {"integration", flow_json(cluster_traj.summary)},
                       {"cluster_spread", num(cluster_spread(steady))},
                       {"psi_x", num(mean(frozen.psi_x))},
                       {"psi_y", num(mean(frozen.psi_y))},
                       {"psi_z", num(mean(frozen.psi_z))},
                       {"psi_spread", num(std::max({vector_spread(frozen.psi_x), vector_spread(frozen.psi_y),
                                                    vector_spread(frozen.psi_z)}))}};
  rep["integration"] = {{"steps", traj.steps}, {"stationary", traj.stationary}, {"final_rate", num(traj.final_rate)}};
  rep["terminal"] = {{"theta_x", vector_json(tx)}, {"theta_y", vector_json(ty)}};
  rep["consensus"] = {{"reached", spread < sc.solver.tol_consensus}, {"spread", num(spread)},
                      {"tolerance", num(sc.solver.tol_consensus)}};
  rep["match"] = {{"kind", "linear solve"}, {"theta_x", num(mean(ex))}, {"theta_y", num(mean(ey))},
                  {"distance", num(distance)}, {"residual", num(traj.final_rate)}};
  rep["certificates"] = structured_certificates(mean(frozen.psi_x), mean(frozen.psi_y), mean(frozen.psi_z), dist,
                                                sc.params, graph.degree(), "frozen from cluster steady state (node mean)");
  return rep;
}

}  // namespace detail

/// Runs a scenario, writes its CSV outputs and report.json into sc.outputs.
inline RunOutput run_simulation(const Scenario& sc) {
  const auto started = std::chrono::steady_clock::now();
  const auto graph = sc.graph.build();
  RunOutput out;
  nlohmann::json rep;
  rep["command"] = "simulate";
  rep["scenario"] = sc.source;
  rep["seed"] = sc.solver.seed;
  rep["model"] = to_string(sc.model);
  rep["graph"] = {{"n", graph.size()}, {"degree", graph.degree()}, {"edges", graph.edge_count()}};
  nlohmann::json body;
  if (sc.model == ModelKind::unstructured) {
    body = detail::simulate_unstructured(sc, graph, out);
  } else {
    const auto dist = sc.distribution->build();
    body = sc.model == ModelKind::structured_clusters ? detail::simulate_clusters(sc, graph, dist, out)
                                                      : detail::simulate_moments(sc, graph, dist, out);
  }
  rep.update(body);
  rep["wall_clock_seconds"] =
      num(std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count());
  out.report = rep;
  out.report_json = sc.outputs / "report.json";
  write_file_atomic(out.report_json, rep.dump(2) + "\n");
  return out;
}

/// Closed-form equilibria with their certificates; with a distribution, also the
/// self-consistent structured symmetric equilibrium per cluster.
inline nlohmann::json equilibria_report(const ModelParams& p, std::size_t degree,
                                        const std::optional<DegreeDistribution>& dist = std::nullopt) {
  p.validate();
  nlohmann::json rep;
  rep["command"] = "equilibria";
  rep["params"] = {{"gamma", num(p.gamma)}, {"r", num(p.r)}, {"alpha", num(p.alpha)}, {"sigma", num(p.sigma)}};
  rep["degree"] = degree;
  const auto c1 = equilibrium_case1(p, degree);
  rep["case1"] = guarded_certificate([&] { return certificate_report(c1, certify_stability(c1, p, degree)); });
  auto c2 = nlohmann::json::array();
  for (const auto& eq : equilibrium_case2(p, degree))
    c2.push_back(guarded_certificate([&] { return certificate_report(eq, certify_stability(eq, p, degree)); }));
  rep["case2"] = c2;
  const double zeta = p.alpha / (p.r * static_cast<double>(degree));
  if (c2.empty()) rep["case2_note"] = zeta >= 1.0 ? "zeta infeasible (alpha >= r d)" : "no feasible real root";
  if (dist) {
    nlohmann::json s;
    s["kmax"] = dist->kmax;
    s["mean_k"] = num(dist->mean_k);
    s["second_moment"] = num(dist->second_moment);
    s["increases_with_connectivity"] = equilibrium_increases_with_connectivity(p);
    try {
      const auto eq = solve_selfconsistent_theta(*dist, p, degree);
      s["theta"] = num(eq.theta);
      s["psi_star"] = num(eq.psi_star);
      s["iterations"] = eq.iterations;
      auto table = nlohmann::json::array();
      bool increasing = true;
      for (std::size_t k = 1; k <= dist->kmax; ++k) {
        const auto [l1, l2] = symmetric_cluster_eigenvalues(dist->psi[k - 1], eq.theta, p, degree);
        table.push_back({{"k", k}, {"x_star", num(eq.x_star[k - 1])}, {"lambda1", num(l1)}, {"lambda2", num(l2)}});
        if (k > 1 && !(eq.x_star[k - 1] > eq.x_star[k - 2])) increasing = false;
      }
      s["x_star_increasing_in_k"] = increasing;
      s["clusters"] = table;
      const double psi_z = dist->second_moment / dist->mean_k - 2.0 * eq.psi_star;
      s["certificates"] = detail::structured_certificates(eq.psi_star, eq.psi_star, psi_z, *dist, p, degree,
                                                          "self-consistent symmetric equilibrium");
    } catch (const NumericalError& e) {
      s["error"] = e.what();
    }
    rep["structured"] = s;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Sweeps

/// Parses "v1,v2,..." or "lo:hi:count" (count evenly spaced points, inclusive).
inline std::vector<double> parse_value_list(const std::string& text) {
  auto parse = [&](const std::string& tok) {
    double v = 0.0;
    const auto* b = tok.data();
    const auto* e = tok.data() + tok.size();
    while (b < e && *b == ' ') ++b;
    while (e > b && *(e - 1) == ' ') --e;
    const auto res = std::from_chars(b, e, v);
    if (res.ec != std::errc() || res.ptr != e) throw InputError("--values: cannot parse '" + tok + "'");
    return v;
  };
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string tok; std::getline(ss, tok, ':');) parts.push_back(tok);
    if (parts.size() != 3) throw InputError("--values: range form is lo:hi:count");
    const double lo = parse(parts[0]), hi = parse(parts[1]), cnt = parse(parts[2]);
    if (cnt < 1 || cnt != std::floor(cnt)) throw InputError("--values: count must be a positive integer");
    const auto count = static_cast<std::size_t>(cnt);
    for (std::size_t i = 0; i < count; ++i)
      out.push_back(count == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1));
  } else {
    std::stringstream ss(text);
    for (std::string tok; std::getline(ss, tok, ',');) out.push_back(parse(tok));
  }
  if (out.empty()) throw InputError("--values: empty list");
  return out;
}

struct SweepOptions {
  double perturbation = 1e-3;
  std::size_t trials = 3;
  double horizon = 1000.0;
  bool decay = true;
  std::size_t workers = 0;  // 0: hardware concurrency
};

inline const std::vector<std::string>& sweep_columns() {
  static const std::vector<std::string> cols{
      "value",          "case1_xi",      "case1_zeta",    "case1_margin",   "case1_holds",  "case1_decays",
      "case2_count",    "case2a_xi",     "case2a_mu",     "case2a_zeta",    "case2a_margin", "case2a_holds",
      "case2a_decays",  "case2b_xi",     "case2b_mu",     "case2b_zeta",    "case2b_margin", "case2b_holds",
      "case2b_decays",  "structured_theta", "structured_psi_star", "row_dominance_margin", "row_dominance_holds",
      "symmetric_bound", "symmetric_margin", "symmetric_holds", "error"};
  return cols;
}

namespace detail {

/// A circulant graph on n nodes with degree d, or nullopt when none exists.
inline std::optional<RegularGraph> circulant_with_degree(std::size_t n, std::size_t d) {
  if (d == 0 || d >= n || (d % 2 == 1 && n % 2 == 1)) return std::nullopt;
  std::vector<std::size_t> offsets;
  for (std::size_t s = 1; s <= d / 2; ++s) offsets.push_back(s);
  if (d % 2 == 1) offsets.push_back(n / 2);
  if (d % 2 == 0 && 2 * (d / 2) == n) return std::nullopt;
  return build_circulant(n, offsets);
}

inline std::string bool_cell(bool b) { return b ? "true" : "false"; }

inline std::string sweep_row(const Scenario& base, const RegularGraph& base_graph, const std::string& axis, double value,
                             const SweepOptions& opt) {
  std::vector<std::string> cells(sweep_columns().size());
  cells[0] = format_double(value);
  try {
    ModelParams p = base.params;
    std::size_t degree = base_graph.degree();
    std::optional<RegularGraph> graph = base_graph;
    if (axis == "gamma") p.gamma = value;
    else if (axis == "r") p.r = value;
    else if (axis == "alpha") p.alpha = value;
    else if (axis == "sigma") p.sigma = value;
    else if (axis == "d") {
      if (value < 1 || value != std::floor(value)) throw InputError("degree values must be positive integers");
      degree = static_cast<std::size_t>(value);
      if (degree != base_graph.degree()) graph = circulant_with_degree(base_graph.size(), degree);
    }
    p.validate();

    auto decays = [&](const ConsensusEquilibrium& eq) -> std::string {
      if (!opt.decay) return "";
      if (!graph) return "no-graph";
      DecayOptions d;
      d.seed = base.solver.seed;
      d.horizon = opt.horizon;
      d.dt = base.solver.dt;
      return bool_cell(decay_oracle(eq, p, *graph, opt.perturbation, opt.trials, d).passed);
    };
    auto cert_cells = [&](const ConsensusEquilibrium& eq, std::size_t margin_col, std::size_t holds_col) {
      try {
        const auto c = certify_stability(eq, p, degree);
        cells[margin_col] = format_double(c.margin);
        cells[holds_col] = bool_cell(c.holds);
      } catch (const InapplicableCertificate&) {
        cells[margin_col] = "";
        cells[holds_col] = "inapplicable";
      }
    };

    const auto c1 = equilibrium_case1(p, degree);
    cells[1] = format_double(c1.xi);
    cells[2] = format_double(c1.zeta);
    cert_cells(c1, 3, 4);
    cells[5] = decays(c1);
    const auto c2 = equilibrium_case2(p, degree);
    cells[6] = std::to_string(c2.size());
    for (std::size_t r = 0; r < c2.size() && r < 2; ++r) {
      const std::size_t b = 7 + 6 * r;
      cells[b] = format_double(c2[r].xi);
      cells[b + 1] = format_double(c2[r].mu);
      cells[b + 2] = format_double(c2[r].zeta);
      cert_cells(c2[r], b + 3, b + 4);
      cells[b + 5] = decays(c2[r]);
    }
    if (base.distribution) {
      const auto dist = base.distribution->build();
      const auto eq = solve_selfconsistent_theta(dist, p, degree);
      cells[19] = format_double(eq.theta);
      cells[20] = format_double(eq.psi_star);
      const double psi_z = dist.second_moment / dist.mean_k - 2.0 * eq.psi_star;
      const auto rd = certify_structured(eq.psi_star, eq.psi_star, psi_z, p, degree, dist.kmax);
      cells[21] = format_double(rd.margin);
      cells[22] = bool_cell(rd.holds);
      const auto sym = certify_symmetric_structured(eq.psi_star, dist, p, degree);
      cells[23] = format_double(sym.rhs_bounds[0]);
      cells[24] = format_double(sym.margin);
      cells[25] = bool_cell(sym.holds);
    }
  } catch (const std::exception& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), ',', ';');
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    cells.back() = msg;
  }
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) line += ',';
    line += cells[i];
  }
  return line;
}

}  // namespace detail

/// One CSV row per value; rows are computed independently and a failing point
/// is reported in its `error` column while the sweep continues.
inline std::string run_sweep(const Scenario& base, const std::string& axis, const std::vector<double>& values,
                             const SweepOptions& opt = {}) {
  static const std::set<std::string> axes{"gamma", "r", "alpha", "sigma", "d"};
  if (!axes.count(axis)) throw InputError("--axis must be one of gamma, r, alpha, sigma, d");
  const auto graph = base.graph.build();
  std::vector<std::string> rows(values.size());
  const std::size_t workers =
      std::max<std::size_t>(1, opt.workers ? opt.workers : std::thread::hardware_concurrency());
  for (std::size_t start = 0; start < values.size(); start += workers) {
    std::vector<std::future<std::string>> batch;
    const std::size_t stop = std::min(values.size(), start + workers);
    for (std::size_t i = start; i < stop; ++i)
      batch.push_back(std::async(std::launch::async,
                                 [&, i] { return detail::sweep_row(base, graph, axis, values[i], opt); }));
    for (std::size_t i = start; i < stop; ++i) rows[i] = batch[i - start].get();
  }
  std::string csv;
  for (std::size_t i = 0; i < sweep_columns().size(); ++i) {
    if (i) csv += ',';
    csv += sweep_columns()[i];
  }
  csv += '\n';
  for (const auto& r : rows) csv += r + '\n';
  return csv;
}

}  // namespace swarmnet
