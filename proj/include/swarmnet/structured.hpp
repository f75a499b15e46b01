#pragma once

// Structured multi-population: each node of the regular graph is itself a
// scale-free population split into connectivity clusters k = 1..kmax with
// fractions x_i^k, y_i^k. Clusters couple to neighbouring populations only
// through the link-weighted first moments θ_j^x, θ_j^y.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "swarmnet/dynamics.hpp"
#include "swarmnet/error.hpp"
#include "swarmnet/netgraph.hpp"
#include "swarmnet/numkit.hpp"
#include "swarmnet/simplex_flow.hpp"

namespace swarmnet {

/// Degree distribution P(k), k = 1..kmax, shared by every population.
struct DegreeDistribution {
  std::size_t kmax = 0;
  std::vector<double> p;    // p[k-1] = P(k)
  double mean_k = 0.0;      // <k> = Σ k P(k)
  double second_moment = 0.0;  // V = Σ k² P(k)
  std::vector<double> psi;  // psi[k-1] = k / kmax

  double prob(std::size_t k) const { return p[k - 1]; }

  /// Normalises non-negative weights w[k-1] into a distribution and fills in the moments.
  static DegreeDistribution from_weights(std::vector<double> w) {
    if (w.empty()) throw InputError("degree distribution needs at least one degree");
    double total = 0.0;
    for (double v : w) {
      if (!(v >= 0.0) || !std::isfinite(v)) throw InputError("degree distribution weights must be finite and >= 0");
      total += v;
    }
    if (!(total > 0.0)) throw InputError("degree distribution has zero total weight");
    while (w.back() == 0.0) w.pop_back();
    DegreeDistribution dist;
    dist.kmax = w.size();
    dist.p.resize(dist.kmax);
    dist.psi.resize(dist.kmax);
    for (std::size_t k = 1; k <= dist.kmax; ++k) {
      dist.p[k - 1] = w[k - 1] / total;
      dist.psi[k - 1] = static_cast<double>(k) / static_cast<double>(dist.kmax);
    }
    for (std::size_t k = 1; k <= dist.kmax; ++k) {
      const double kk = static_cast<double>(k);
      dist.mean_k += kk * dist.p[k - 1];
      dist.second_moment += kk * kk * dist.p[k - 1];
    }
    return dist;
  }
};

/// Truncated power law P(k) ∝ k^-exponent on k = 1..kmax.
inline DegreeDistribution powerlaw_distribution(std::size_t kmax, double exponent) {
  if (kmax < 2) throw InputError("power law needs kmax >= 2");
  if (!(exponent > 1.0)) throw InputError("power law exponent must be > 1");
  std::vector<double> w(kmax);
  for (std::size_t k = 1; k <= kmax; ++k) w[k - 1] = std::pow(static_cast<double>(k), -exponent);
  return DegreeDistribution::from_weights(std::move(w));
}

/// Empirical distribution of a degree sequence.
inline DegreeDistribution empirical_distribution(const std::vector<std::size_t>& degrees) {
  if (degrees.empty()) throw InputError("empirical distribution: empty degree list");
  const std::size_t kmax = *std::max_element(degrees.begin(), degrees.end());
  std::vector<double> counts(kmax, 0.0);
  for (std::size_t k : degrees) {
    if (k < 1) throw InputError("empirical distribution: degrees must be >= 1");
    counts[k - 1] += 1.0;
  }
  return DegreeDistribution::from_weights(std::move(counts));
}

/// Degree sequence of a seeded Barabási–Albert preferential-attachment graph:
/// a complete core on m+1 nodes, then each new node links to m distinct existing
/// nodes chosen with probability proportional to degree.
inline std::vector<std::size_t> barabasi_albert_degrees(std::size_t n, std::size_t m, std::uint64_t seed) {
  if (m < 1 || n <= m) throw InputError("Barabasi-Albert needs m >= 1 and n > m");
  Rng rng(seed);
  std::vector<std::size_t> degree(n, 0);
  std::vector<std::size_t> endpoints;  // each node appears once per incident edge
  for (std::size_t i = 0; i <= m; ++i)
    for (std::size_t j = i + 1; j <= m; ++j) {
      ++degree[i];
      ++degree[j];
      endpoints.push_back(i);
      endpoints.push_back(j);
    }
  std::vector<std::size_t> targets;
  for (std::size_t v = m + 1; v < n; ++v) {
    targets.clear();
    while (targets.size() < m) {
      const std::size_t t = endpoints[rng.below(endpoints.size())];
      if (std::find(targets.begin(), targets.end(), t) == targets.end()) targets.push_back(t);
    }
    for (std::size_t t : targets) {
      ++degree[t];
      ++degree[v];
      endpoints.push_back(t);
      endpoints.push_back(v);
    }
  }
  return degree;
}

/// Reads "k,p" rows (optional header line "k,p"). Missing degrees get P(k) = 0.
/// Probabilities must sum to 1 within 1e-6; they are renormalised exactly.
inline DegreeDistribution read_distribution_csv(std::istream& in) {
  std::map<std::size_t, double> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    if (entries.empty() && std::isalpha(static_cast<unsigned char>(line[first]))) continue;  // header
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    long long k = 0;
    double p = 0.0;
    std::string extra;
    if (!(ls >> k >> p) || (ls >> extra) || k < 1 || !(p >= 0.0))
      throw InputError("distribution line " + std::to_string(line_no) + ": expected 'k,p' with k >= 1, p >= 0");
    if (!entries.emplace(static_cast<std::size_t>(k), p).second)
      throw InputError("distribution line " + std::to_string(line_no) + ": degree " + std::to_string(k) +
                       " listed twice");
  }
  if (entries.empty()) throw InputError("distribution file has no entries");
  double total = 0.0;
  for (const auto& [k, p] : entries) total += p;
  if (std::abs(total - 1.0) > 1e-6)
    throw InputError("distribution probabilities sum to " + std::to_string(total) + ", expected 1");
  std::vector<double> w(entries.rbegin()->first, 0.0);
  for (const auto& [k, p] : entries) w[k - 1] = p;
  return DegreeDistribution::from_weights(std::move(w));
}

inline DegreeDistribution read_distribution_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open distribution file '" + path + "'");
  return read_distribution_csv(in);
}

/// Cluster fractions x_i^k, y_i^k stored row-major: index i * kmax + (k - 1).
struct ClusteredState {
  std::size_t n = 0;
  std::size_t kmax = 0;
  std::vector<double> x;
  std::vector<double> y;

  ClusteredState() = default;
  ClusteredState(std::size_t nodes, std::size_t clusters, double x0 = 0.0, double y0 = 0.0)
      : n(nodes), kmax(clusters), x(nodes * clusters, x0), y(nodes * clusters, y0) {}

  double& xk(std::size_t i, std::size_t k) { return x[i * kmax + k - 1]; }
  double& yk(std::size_t i, std::size_t k) { return y[i * kmax + k - 1]; }
  double xk(std::size_t i, std::size_t k) const { return x[i * kmax + k - 1]; }
  double yk(std::size_t i, std::size_t k) const { return y[i * kmax + k - 1]; }

  std::vector<double> flatten() const {
    std::vector<double> s(x);
    s.insert(s.end(), y.begin(), y.end());
    return s;
  }

  static ClusteredState from_flat(std::size_t nodes, std::size_t clusters, std::span<const double> s) {
    ClusteredState c;
    c.n = nodes;
    c.kmax = clusters;
    const auto half = static_cast<std::ptrdiff_t>(nodes * clusters);
    c.x.assign(s.begin(), s.begin() + half);
    c.y.assign(s.begin() + half, s.begin() + 2 * half);
    return c;
  }

  double simplex_violation() const {
    double v = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) v = std::max({v, -x[j], -y[j], x[j] + y[j] - 1.0});
    return v;
  }
};

/// Every cluster of every node sampled independently with the same sampler.
inline ClusteredState sample_clustered_state(std::size_t n, std::size_t kmax, std::uint64_t seed,
                                             const SamplerSpec& spec = {}) {
  validate_sampler(spec);
  Rng rng(seed);
  ClusteredState s(n, kmax);
  for (std::size_t j = 0; j < n * kmax; ++j) std::tie(s.x[j], s.y[j]) = sample_simplex_point(rng, spec);
  return s;
}

/// Consensus state: every node carries the same per-cluster values x[k-1], y[k-1].
inline ClusteredState lift_clusters(std::size_t n, std::span<const double> x_per_k, std::span<const double> y_per_k) {
  ClusteredState s(n, x_per_k.size());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 1; k <= s.kmax; ++k) {
      s.xk(i, k) = x_per_k[k - 1];
      s.yk(i, k) = y_per_k[k - 1];
    }
  return s;
}

struct Moments {
  std::vector<double> theta_x, theta_y;       // (1/<k>) Σ_k k P(k) x_i^k
  std::vector<double> psi_x, psi_y, psi_z;    // (1/<k>) Σ_k k² P(k) x_i^k, ...
};

inline void check_clusters(const ClusteredState& s, const DegreeDistribution& dist) {
  if (s.kmax != dist.kmax)
    throw InputError("clustered state has " + std::to_string(s.kmax) + " clusters but the distribution has kmax " +
                     std::to_string(dist.kmax));
  if (s.x.size() != s.n * s.kmax || s.y.size() != s.n * s.kmax)
    throw InputError("clustered state storage does not match its n x kmax shape");
}

inline std::pair<std::vector<double>, std::vector<double>> compute_theta(const ClusteredState& s,
                                                                         const DegreeDistribution& dist) {
  check_clusters(s, dist);
  std::vector<double> tx(s.n, 0.0), ty(s.n, 0.0);
  for (std::size_t i = 0; i < s.n; ++i) {
    double ax = 0.0, ay = 0.0;
    for (std::size_t k = 1; k <= s.kmax; ++k) {
      const double w = static_cast<double>(k) * dist.p[k - 1];
      ax += w * s.xk(i, k);
      ay += w * s.yk(i, k);
    }
    tx[i] = ax / dist.mean_k;
    ty[i] = ay / dist.mean_k;
  }
  return {tx, ty};
}

inline std::tuple<std::vector<double>, std::vector<double>, std::vector<double>> compute_psi(
    const ClusteredState& s, const DegreeDistribution& dist) {
  check_clusters(s, dist);
  std::vector<double> px(s.n), py(s.n), pz(s.n);
  for (std::size_t i = 0; i < s.n; ++i) {
    double ax = 0.0, ay = 0.0, az = 0.0;
    for (std::size_t k = 1; k <= s.kmax; ++k) {
      const double kk = static_cast<double>(k);
      const double w = kk * kk * dist.p[k - 1];
      const double xv = s.xk(i, k), yv = s.yk(i, k);
      ax += w * xv;
      ay += w * yv;
      az += w * (1.0 - xv - yv);
    }
    px[i] = ax / dist.mean_k;
    py[i] = ay / dist.mean_k;
    pz[i] = az / dist.mean_k;
  }
  return {px, py, pz};
}

inline Moments compute_moments(const ClusteredState& s, const DegreeDistribution& dist) {
  Moments m;
  std::tie(m.theta_x, m.theta_y) = compute_theta(s, dist);
  std::tie(m.psi_x, m.psi_y, m.psi_z) = compute_psi(s, dist);
  return m;
}

/// Cluster vector field on the flat layout [x (n·kmax), y (n·kmax)]; θ is
/// recomputed from the state on every evaluation.
class ClusterField {
 public:
  ClusterField(const ModelParams& p, const RegularGraph& g, const DegreeDistribution& dist)
      : p_(p), g_(&g), dist_(&dist), tx_(g.size()), ty_(g.size()), sx_(g.size()), sy_(g.size()) {}

  void operator()(std::span<const double> s, std::span<double> out) {
    const std::size_t n = g_->size();
    const std::size_t kmax = dist_->kmax;
    const double* x = s.data();
    const double* y = s.data() + n * kmax;
    for (std::size_t i = 0; i < n; ++i) {
      double ax = 0.0, ay = 0.0;
      for (std::size_t k = 1; k <= kmax; ++k) {
        const double w = static_cast<double>(k) * dist_->p[k - 1];
        ax += w * x[i * kmax + k - 1];
        ay += w * y[i * kmax + k - 1];
      }
      tx_[i] = ax / dist_->mean_k;
      ty_[i] = ay / dist_->mean_k;
    }
    g_->neighbor_sums(tx_.data(), sx_.data());
    g_->neighbor_sums(ty_.data(), sy_.data());
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 1; k <= kmax; ++k) {
        const std::size_t idx = i * kmax + k - 1;
        const double psi = dist_->psi[k - 1];
        const double z = 1.0 - x[idx] - y[idx];
        out[idx] = z * (p_.r * psi * sx_[i] + p_.gamma) - x[idx] * (p_.alpha + p_.sigma * psi * sy_[i]);
        out[n * kmax + idx] = z * (p_.r * psi * sy_[i] + p_.gamma) - y[idx] * (p_.alpha + p_.sigma * psi * sx_[i]);
      }
    }
  }

 private:
  ModelParams p_;
  const RegularGraph* g_;
  const DegreeDistribution* dist_;
  std::vector<double> tx_, ty_, sx_, sy_;
};

inline void check_clusters(const ClusteredState& s, const RegularGraph& g, const DegreeDistribution& dist) {
  check_clusters(s, dist);
  if (s.n != g.size())
    throw InputError("clustered state has " + std::to_string(s.n) + " nodes but the graph has " +
                     std::to_string(g.size()));
}

/// (x_i^k', y_i^k') as n×kmax row-major matrices.
inline std::pair<std::vector<double>, std::vector<double>> cluster_vector_field(const ClusteredState& s,
                                                                                const ModelParams& p,
                                                                                const RegularGraph& g,
                                                                                const DegreeDistribution& dist) {
  check_clusters(s, g, dist);
  const auto flat = s.flatten();
  std::vector<double> out(flat.size());
  ClusterField f(p, g, dist);
  f(flat, out);
  const auto half = static_cast<std::ptrdiff_t>(s.n * s.kmax);
  return {std::vector<double>(out.begin(), out.begin() + half), std::vector<double>(out.begin() + half, out.end())};
}

inline double cluster_field_residual(const ClusteredState& s, const ModelParams& p, const RegularGraph& g,
                                     const DegreeDistribution& dist) {
  const auto [dx, dy] = cluster_vector_field(s, p, g, dist);
  return std::max(max_abs(dx), max_abs(dy));
}

struct ClusteredTrajectory {
  std::vector<double> times;
  std::vector<ClusteredState> states;
  FlowSummary summary;

  const ClusteredState& final_state() const { return states.back(); }
};

/// RK4 integration of all n·kmax clusters with the per-cluster simplex enforced.
/// With an observer, samples are streamed to it and only the initial and final
/// states are kept.
inline ClusteredTrajectory integrate_clusters(const ClusteredState& state0, const ModelParams& params,
                                              const RegularGraph& graph, const DegreeDistribution& dist,
                                              const SolverConfig& cfg, const SampleObserver& observe = {}) {
  params.validate();
  check_clusters(state0, graph, dist);
  ClusteredTrajectory traj;
  auto flat = state0.flatten();
  ClusterField f(params, graph, dist);
  const std::size_t n = state0.n, kmax = state0.kmax;
  SampleObserver record = [&](double t, std::span<const double> s) {
    if (!observe || traj.states.empty()) {
      traj.times.push_back(t);
      traj.states.push_back(ClusteredState::from_flat(n, kmax, s));
    }
    if (observe) observe(t, s);
  };
  traj.summary = integrate_pair_simplex(f, std::span<double>(flat), cfg, record);
  if (observe) {
    traj.times.push_back(traj.summary.t_final);
    traj.states.push_back(ClusteredState::from_flat(n, kmax, flat));
  }
  return traj;
}

/// Second moments held fixed while the first moments evolve.
struct FrozenPsi {
  std::vector<double> psi_x, psi_y, psi_z;

  static FrozenPsi from_state(const ClusteredState& s, const DegreeDistribution& dist) {
    FrozenPsi f;
    std::tie(f.psi_x, f.psi_y, f.psi_z) = compute_psi(s, dist);
    return f;
  }
};

inline void check_frozen(const FrozenPsi& psi, const RegularGraph& g) {
  const std::size_t n = g.size();
  if (psi.psi_x.size() != n || psi.psi_y.size() != n || psi.psi_z.size() != n)
    throw InputError("second-moment vectors must have one entry per graph node");
}

/// Affine first-moment system with frozen second moments:
///   θx' = ((-γ-α) I + (r/kmax) Ψz A) θx + (-γ I - (σ/kmax) Ψx A) θy + γ 1
///   θy' = (-γ I - (σ/kmax) Ψy A) θx + ((-γ-α) I + (r/kmax) Ψz A) θy + γ 1
class ThetaField {
 public:
  ThetaField(const FrozenPsi& psi, const ModelParams& p, const RegularGraph& g, std::size_t kmax)
      : psi_(&psi), p_(p), g_(&g), kmax_(static_cast<double>(kmax)), sx_(g.size()), sy_(g.size()) {
    check_frozen(psi, g);
    if (kmax < 1) throw InputError("kmax must be >= 1");
  }

  void operator()(std::span<const double> s, std::span<double> out) {
    const std::size_t n = g_->size();
    const double* tx = s.data();
    const double* ty = s.data() + n;
    g_->neighbor_sums(tx, sx_.data());
    g_->neighbor_sums(ty, sy_.data());
    const double rk = p_.r / kmax_, sk = p_.sigma / kmax_;
    for (std::size_t i = 0; i < n; ++i) {
      out[i] = (-p_.gamma - p_.alpha) * tx[i] - p_.gamma * ty[i] + rk * psi_->psi_z[i] * sx_[i] -
               sk * psi_->psi_x[i] * sy_[i] + p_.gamma;
      out[n + i] = -p_.gamma * tx[i] + (-p_.gamma - p_.alpha) * ty[i] - sk * psi_->psi_y[i] * sx_[i] +
                   rk * psi_->psi_z[i] * sy_[i] + p_.gamma;
    }
  }

 private:
  const FrozenPsi* psi_;
  ModelParams p_;
  const RegularGraph* g_;
  double kmax_;
  std::vector<double> sx_, sy_;
};

inline std::pair<std::vector<double>, std::vector<double>> theta_vector_field(std::span<const double> theta_x,
                                                                              std::span<const double> theta_y,
                                                                              const FrozenPsi& psi,
                                                                              const ModelParams& p,
                                                                              const RegularGraph& g,
                                                                              std::size_t kmax) {
  const std::size_t n = g.size();
  if (theta_x.size() != n || theta_y.size() != n) throw InputError("theta vectors must have one entry per node");
  std::vector<double> s(theta_x.begin(), theta_x.end());
  s.insert(s.end(), theta_y.begin(), theta_y.end());
  std::vector<double> out(2 * n);
  ThetaField f(psi, p, g, kmax);
  f(s, out);
  return {std::vector<double>(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(n)),
          std::vector<double>(out.begin() + static_cast<std::ptrdiff_t>(n), out.end())};
}

/// 2n×2n matrix M with M (θx*, θy*) = (γ1, γ1) at equilibrium.
inline DenseMatrix theta_equilibrium_matrix(const FrozenPsi& psi, const ModelParams& p, const RegularGraph& g,
                                            std::size_t kmax) {
  check_frozen(psi, g);
  const std::size_t n = g.size();
  const double rk = p.r / static_cast<double>(kmax), sk = p.sigma / static_cast<double>(kmax);
  DenseMatrix m(2 * n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i) = p.gamma + p.alpha;
    m(i, n + i) = p.gamma;
    m(n + i, i) = p.gamma;
    m(n + i, n + i) = p.gamma + p.alpha;
    for (std::size_t j : g.neighbors(i)) {
      m(i, j) -= rk * psi.psi_z[i];
      m(i, n + j) += sk * psi.psi_x[i];
      m(n + i, j) += sk * psi.psi_y[i];
      m(n + i, n + j) -= rk * psi.psi_z[i];
    }
  }
  return m;
}

/// Equilibrium of the frozen-Ψ first-moment system by dense Gaussian elimination.
inline std::pair<std::vector<double>, std::vector<double>> theta_equilibrium(const FrozenPsi& psi,
                                                                             const ModelParams& p,
                                                                             const RegularGraph& g, std::size_t kmax) {
  const std::size_t n = g.size();
  auto sol = solve_dense(theta_equilibrium_matrix(psi, p, g, kmax), std::vector<double>(2 * n, p.gamma));
  return {std::vector<double>(sol.begin(), sol.begin() + static_cast<std::ptrdiff_t>(n)),
          std::vector<double>(sol.begin() + static_cast<std::ptrdiff_t>(n), sol.end())};
}

struct ThetaTrajectory {
  std::vector<double> times;
  std::vector<std::pair<std::vector<double>, std::vector<double>>> states;
  std::size_t steps = 0;
  bool stationary = false;
  double final_rate = 0.0;
};

/// RK4 integration of the frozen-Ψ first-moment system (no simplex enforcement:
/// with frozen Ψ the system is a plain affine ODE).
inline ThetaTrajectory integrate_theta(std::span<const double> theta_x0, std::span<const double> theta_y0,
                                       const FrozenPsi& psi, const ModelParams& p, const RegularGraph& g,
                                       std::size_t kmax, const SolverConfig& cfg, const SampleObserver& observe = {}) {
  cfg.validate();
  const std::size_t n = g.size();
  if (theta_x0.size() != n || theta_y0.size() != n) throw InputError("theta vectors must have one entry per node");
  ThetaField f(psi, p, g, kmax);
  std::vector<double> s(theta_x0.begin(), theta_x0.end());
  s.insert(s.end(), theta_y0.begin(), theta_y0.end());
  ThetaTrajectory traj;
  auto record = [&](double t) {
    if (observe) observe(t, s);
    traj.times.push_back(t);
    traj.states.emplace_back(std::vector<double>(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(n)),
                             std::vector<double>(s.begin() + static_cast<std::ptrdiff_t>(n), s.end()));
  };
  record(0.0);
  Rk4Stepper stepper(2 * n);
  const std::size_t total = cfg.step_count();
  std::size_t step = 0, last = 0;
  for (; step < total; ++step) {
    const double rate = stepper.step(f, std::span<double>(s), cfg.dt);
    if ((step + 1) % cfg.sample_every == 0) {
      record(static_cast<double>(step + 1) * cfg.dt);
      last = step + 1;
    }
    if (cfg.stop_when_stationary && rate < cfg.tol_stationary) {
      traj.stationary = true;
      ++step;
      break;
    }
  }
  traj.steps = step;
  if (last != step) record(static_cast<double>(step) * cfg.dt);
  std::vector<double> out(2 * n);
  f(s, out);
  traj.final_rate = max_abs(out);
  return traj;
}

/// Row-dominance bounds on the first-moment system at a consensus point:
///   α > (r/kmax) Ψz d + (σ/kmax) Ψx d  and  α > (σ/kmax) Ψy d + (r/kmax) Ψz d.
inline StabilityCertificate certify_structured(double psi_x, double psi_y, double psi_z, const ModelParams& p,
                                               std::size_t degree, std::size_t kmax) {
  const double d = static_cast<double>(degree);
  const double km = static_cast<double>(kmax);
  StabilityCertificate c;
  c.condition = "alpha > (r/kmax) Psi_z d + (sigma/kmax) Psi_x d and alpha > (sigma/kmax) Psi_y d + (r/kmax) Psi_z d";
  c.lhs = p.alpha;
  c.rhs_bounds = {p.r / km * psi_z * d + p.sigma / km * psi_x * d, p.sigma / km * psi_y * d + p.r / km * psi_z * d};
  c.margin = std::min(p.alpha - c.rhs_bounds[0], p.alpha - c.rhs_bounds[1]);
  c.holds = c.margin > 0.0;
  return c;
}

/// Cross-inhibition upper bound for a symmetric consensus (Ψx = Ψy = Ψ*):
///   σ < 2r - rV/(<k> Ψ*) + α kmax / (Ψ* d).
inline StabilityCertificate certify_symmetric_structured(double psi_star, const DegreeDistribution& dist,
                                                         const ModelParams& p, std::size_t degree) {
  if (psi_star == 0.0) throw InapplicableCertificate("symmetric certificate undefined for Psi* = 0");
  if (degree == 0) throw InapplicableCertificate("symmetric certificate undefined for d = 0");
  const double d = static_cast<double>(degree);
  const double bound = 2.0 * p.r - p.r * dist.second_moment / (dist.mean_k * psi_star) +
                       p.alpha * static_cast<double>(dist.kmax) / (psi_star * d);
  StabilityCertificate c;
  c.condition = "sigma < 2 r - r V / (<k> Psi*) + alpha kmax / (Psi* d)";
  c.lhs = p.sigma;
  c.rhs_bounds = {bound};
  c.margin = bound - p.sigma;
  c.holds = c.margin > 0.0;
  return c;
}

/// Eigenvalues of the per-cluster linear system at a symmetric consensus with
/// link probability θ: (-σψdθ - α, -(2r+σ)ψdθ - 2γ - α).
inline std::pair<double, double> symmetric_cluster_eigenvalues(double psi_k, double theta, const ModelParams& p,
                                                               std::size_t degree) {
  const double u = psi_k * static_cast<double>(degree) * theta;
  return {-p.sigma * u - p.alpha, -(2.0 * p.r + p.sigma) * u - 2.0 * p.gamma - p.alpha};
}

/// Determinant of the per-cluster system matrix: 2(rψdθ + γ)(σψdθ + α) + (σψdθ + α)².
inline double symmetric_cluster_determinant(double psi_k, double theta, const ModelParams& p, std::size_t degree) {
  const double u = psi_k * static_cast<double>(degree) * theta;
  const double a = p.sigma * u + p.alpha;
  return 2.0 * (p.r * u + p.gamma) * a + a * a;
}

/// x* = (rψdθ + γ) / ((2r+σ)ψdθ + 2γ + α).
inline double symmetric_cluster_equilibrium(double psi_k, double theta, const ModelParams& p, std::size_t degree) {
  if (symmetric_cluster_determinant(psi_k, theta, p, degree) == 0.0)
    throw NumericalError("symmetric cluster system is singular");
  const double u = psi_k * static_cast<double>(degree) * theta;
  return (p.r * u + p.gamma) / ((2.0 * p.r + p.sigma) * u + 2.0 * p.gamma + p.alpha);
}

/// True when α/γ > σ/r, i.e. the symmetric cluster equilibrium increases with connectivity.
inline bool equilibrium_increases_with_connectivity(const ModelParams& p) {
  return p.alpha * p.r > p.sigma * p.gamma;
}

struct SelfConsistentEquilibrium {
  double theta = 0.0;
  std::vector<double> x_star;  // x_star[k-1]
  std::size_t iterations = 0;
  double psi_star = 0.0;       // (1/<k>) Σ k² P(k) x*(k)
};

/// Fixed point θ = (1/<k>) Σ_k k P(k) x*(ψ_k, θ), iterated from θ0 = γ/(2γ+α).
inline SelfConsistentEquilibrium solve_selfconsistent_theta(const DegreeDistribution& dist, const ModelParams& p,
                                                            std::size_t degree, double tol = 1e-14,
                                                            std::size_t max_iter = 10000) {
  if (!(tol > 0.0)) throw InputError("tolerance must be > 0");
  p.validate();
  auto aggregate = [&](double theta, std::vector<double>& xs) {
    double acc = 0.0;
    for (std::size_t k = 1; k <= dist.kmax; ++k) {
      xs[k - 1] = symmetric_cluster_equilibrium(dist.psi[k - 1], theta, p, degree);
      acc += static_cast<double>(k) * dist.p[k - 1] * xs[k - 1];
    }
    return acc / dist.mean_k;
  };
  SelfConsistentEquilibrium out;
  out.x_star.resize(dist.kmax);
  double theta = p.gamma / (2.0 * p.gamma + p.alpha);
  for (std::size_t it = 1; it <= max_iter; ++it) {
    const double next = aggregate(theta, out.x_star);
    if (std::abs(next - theta) < tol) {
      out.theta = next;
      out.iterations = it;
      aggregate(out.theta, out.x_star);
      double psi = 0.0;
      for (std::size_t k = 1; k <= dist.kmax; ++k) {
        const double kk = static_cast<double>(k);
        psi += kk * kk * dist.p[k - 1] * out.x_star[k - 1];
      }
      out.psi_star = psi / dist.mean_k;
      return out;
    }
    theta = next;
  }
  std::ostringstream os;
  os.precision(17);
  os << "self-consistent theta did not converge in " << max_iter << " iterations (last iterate " << theta << ")";
  throw NumericalError(os.str());
}

}  // namespace swarmnet
