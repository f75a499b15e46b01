#pragma once

// Unstructured networked commitment dynamics: every node i carries the fractions
// x_i, y_i committed to option 1 and 2 and z_i = 1 - x_i - y_i uncommitted.
//
//   x_i' = (γ + r Σ_{j∈N_i} x_j) z_i - x_i (α + σ Σ_{j∈N_i} y_j)
//   y_i' = (γ + r Σ_{j∈N_i} y_j) z_i - y_i (α + σ Σ_{j∈N_i} x_j)

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "swarmnet/error.hpp"
#include "swarmnet/netgraph.hpp"
#include "swarmnet/numkit.hpp"
#include "swarmnet/simplex_flow.hpp"

namespace swarmnet {

/// Rates of spontaneous commitment (gamma), imitation (r), abandonment (alpha)
/// and cross-inhibition (sigma). All strictly positive.
struct ModelParams {
  double gamma = 0.0;
  double r = 0.0;
  double alpha = 0.0;
  double sigma = 0.0;

  void validate() const {
    if (!(gamma > 0.0 && r > 0.0 && alpha > 0.0 && sigma > 0.0) ||
        !std::isfinite(gamma + r + alpha + sigma))
      throw InputError("model parameters gamma, r, alpha, sigma must all be finite and > 0");
  }
};

inline void check_dimensions(const PopulationState& s, const RegularGraph& g) {
  if (s.x.size() != g.size() || s.y.size() != g.size())
    throw InputError("state has " + std::to_string(s.x.size()) + "/" + std::to_string(s.y.size()) +
                     " entries but the graph has " + std::to_string(g.size()) + " nodes");
}

/// Vector field on the flat layout [x..., y...]. Writes into `out`.
class UnstructuredField {
 public:
  UnstructuredField(const ModelParams& p, const RegularGraph& g) : p_(p), g_(&g), sx_(g.size()), sy_(g.size()) {}

  void operator()(std::span<const double> s, std::span<double> out) {
    const std::size_t n = g_->size();
    const double* x = s.data();
    const double* y = s.data() + n;
    g_->neighbor_sums(x, sx_.data());
    g_->neighbor_sums(y, sy_.data());
    for (std::size_t i = 0; i < n; ++i) {
      const double z = 1.0 - x[i] - y[i];
      out[i] = (p_.gamma + p_.r * sx_[i]) * z - x[i] * (p_.alpha + p_.sigma * sy_[i]);
      out[n + i] = (p_.gamma + p_.r * sy_[i]) * z - y[i] * (p_.alpha + p_.sigma * sx_[i]);
    }
  }

 private:
  ModelParams p_;
  const RegularGraph* g_;
  std::vector<double> sx_, sy_;
};

/// (x', y') at `state`.
inline std::pair<std::vector<double>, std::vector<double>> vector_field(const PopulationState& state,
                                                                        const ModelParams& params,
                                                                        const RegularGraph& graph) {
  check_dimensions(state, graph);
  const std::size_t n = graph.size();
  const auto flat = state.flatten();
  std::vector<double> out(2 * n);
  UnstructuredField f(params, graph);
  f(flat, out);
  return {std::vector<double>(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(n)),
          std::vector<double>(out.begin() + static_cast<std::ptrdiff_t>(n), out.end())};
}

/// ‖(x', y')‖∞ at `state`.
inline double field_residual(const PopulationState& state, const ModelParams& params, const RegularGraph& graph) {
  const auto [dx, dy] = vector_field(state, params, graph);
  return std::max(max_abs(dx), max_abs(dy));
}

struct Trajectory {
  std::vector<double> times;
  std::vector<PopulationState> states;
  FlowSummary summary;

  const PopulationState& final_state() const { return states.back(); }
};

/// Fixed-step RK4 integration. Throws IntegrationError if the state leaves the
/// simplex by more than kSimplexTolerance. `observe`, when given, receives every
/// sample instead of it being stored.
inline Trajectory integrate(const PopulationState& state0, const ModelParams& params, const RegularGraph& graph,
                            const SolverConfig& cfg, const SampleObserver& observe = {}) {
  params.validate();
  check_dimensions(state0, graph);
  Trajectory traj;
  auto flat = state0.flatten();
  UnstructuredField f(params, graph);
  SampleObserver record = [&](double t, std::span<const double> s) {
    if (observe) {
      observe(t, s);
      if (traj.states.empty()) {
        traj.times.push_back(t);
        traj.states.push_back(PopulationState::from_flat(s));
      }
    } else {
      traj.times.push_back(t);
      traj.states.push_back(PopulationState::from_flat(s));
    }
  };
  traj.summary = integrate_pair_simplex(f, std::span<double>(flat), cfg, record);
  if (observe) {
    traj.times.push_back(traj.summary.t_final);
    traj.states.push_back(PopulationState::from_flat(flat));
  }
  return traj;
}

/// max_i x_i - min_i x_i and the same for y, whichever is larger.
inline double consensus_spread(const PopulationState& s) {
  if (s.size() == 0) return 0.0;
  const auto [xlo, xhi] = std::minmax_element(s.x.begin(), s.x.end());
  const auto [ylo, yhi] = std::minmax_element(s.y.begin(), s.y.end());
  return std::max(*xhi - *xlo, *yhi - *ylo);
}

enum class EquilibriumCase { symmetric, zeta_locked };

inline const char* to_string(EquilibriumCase c) {
  return c == EquilibriumCase::symmetric ? "symmetric" : "zeta-locked";
}

/// Consensus equilibrium (ξ 1, μ 1, ζ 1).
struct ConsensusEquilibrium {
  double xi = 0.0;
  double mu = 0.0;
  double zeta = 0.0;
  EquilibriumCase case_tag = EquilibriumCase::symmetric;

  PopulationState lift(std::size_t n) const {
    return {std::vector<double>(n, xi), std::vector<double>(n, mu)};
  }

  bool consistent(double tol = 1e-12) const {
    return std::abs(xi + mu + zeta - 1.0) <= tol && xi >= -tol && mu >= -tol && zeta >= -tol && xi <= 1.0 + tol &&
           mu <= 1.0 + tol && zeta <= 1.0 + tol;
  }
};

/// Symmetric consensus ξ = μ: the positive root of
/// (2rd + σd) ξ² + (2γ - rd + α) ξ - γ = 0.
inline ConsensusEquilibrium equilibrium_case1(const ModelParams& p, std::size_t degree) {
  p.validate();
  if (degree < 1) throw InputError("degree must be >= 1");
  const double d = static_cast<double>(degree);
  const double a = 2.0 * p.r * d + p.sigma * d;
  const double b = 2.0 * p.gamma - p.r * d + p.alpha;
  const double c = -p.gamma;
  // Product of roots c/a < 0, so exactly one root is positive. Cancellation-free form.
  const double disc = std::sqrt(b * b - 4.0 * a * c);
  const double xi = b >= 0.0 ? (2.0 * p.gamma) / (b + disc) : (-b + disc) / (2.0 * a);
  return {xi, xi, 1.0 - 2.0 * xi, EquilibriumCase::symmetric};
}

/// Consensus with ζ = α/(rd): roots of d ξ² + (α/r - d) ξ + γα/(rdσ) = 0 that
/// give ξ, μ, ζ all in [0, 1]. Returns 0, 1 or 2 equilibria (smaller ξ first).
inline std::vector<ConsensusEquilibrium> equilibrium_case2(const ModelParams& p, std::size_t degree) {
  p.validate();
  if (degree < 1) throw InputError("degree must be >= 1");
  const double d = static_cast<double>(degree);
  const double zeta = p.alpha / (p.r * d);
  const double b = p.alpha / p.r - d;
  const double disc = b * b - 4.0 * p.gamma * p.alpha / (p.r * p.sigma);
  std::vector<ConsensusEquilibrium> out;
  if (disc < 0.0 || zeta > 1.0) return out;
  const double root = std::sqrt(disc);
  for (double xi : {(-b - root) / (2.0 * d), (-b + root) / (2.0 * d)}) {
    const double mu = 1.0 - xi - zeta;
    if (xi < 0.0 || xi > 1.0 || mu < 0.0 || mu > 1.0) continue;
    if (!out.empty() && out.back().xi == xi) continue;  // double root
    out.push_back({xi, mu, zeta, EquilibriumCase::zeta_locked});
  }
  return out;
}

/// Every closed-form consensus equilibrium: the symmetric one followed by the feasible ζ-locked roots.
inline std::vector<ConsensusEquilibrium> all_equilibria(const ModelParams& p, std::size_t degree) {
  std::vector<ConsensusEquilibrium> out{equilibrium_case1(p, degree)};
  for (const auto& e : equilibrium_case2(p, degree)) out.push_back(e);
  return out;
}

/// 2n×2n Jacobian of the field at the lifted consensus equilibrium, ordered (x, y).
inline DenseMatrix jacobian(const ConsensusEquilibrium& eq, const ModelParams& p, const RegularGraph& g) {
  if (!eq.consistent(1e-9)) throw InputError("jacobian: equilibrium is not consistent (xi + mu + zeta != 1)");
  const std::size_t n = g.size();
  const double d = static_cast<double>(g.degree());
  DenseMatrix j(2 * n, 2 * n);
  const double diag_xx = -(p.gamma + p.r * d * eq.xi + p.alpha + p.sigma * d * eq.mu);
  const double diag_xy = -(p.gamma + p.r * d * eq.xi);
  const double diag_yx = -(p.gamma + p.r * d * eq.mu);
  const double diag_yy = -(p.gamma + p.r * d * eq.mu + p.alpha + p.sigma * d * eq.xi);
  for (std::size_t i = 0; i < n; ++i) {
    j(i, i) = diag_xx;
    j(i, n + i) = diag_xy;
    j(n + i, i) = diag_yx;
    j(n + i, n + i) = diag_yy;
    for (std::size_t k : g.neighbors(i)) {
      j(i, k) += p.r * eq.zeta;
      j(i, n + k) += -p.sigma * eq.xi;
      j(n + i, k) += -p.sigma * eq.mu;
      j(n + i, n + k) += p.r * eq.zeta;
    }
  }
  return j;
}

struct StabilityCertificate {
  std::string condition;            // which inequality family was checked
  bool holds = false;
  double lhs = 0.0;                 // the checked quantity (σ or α)
  std::vector<double> rhs_bounds;   // the bounds it is compared against
  double margin = 0.0;              // min slack; holds <=> margin > 0
};

/// Cross-inhibition bounds σ > (α - rdζ)/(d(1-μ)) and σ > (α - rdζ)/(d(1-ξ)).
/// Throws InapplicableCertificate when ξ = 1 or μ = 1.
inline StabilityCertificate certify_stability(const ConsensusEquilibrium& eq, const ModelParams& p,
                                              std::size_t degree) {
  if (!eq.consistent(1e-9)) throw InputError("certify_stability: equilibrium is not consistent");
  if (eq.mu == 1.0 || eq.xi == 1.0)
    throw InapplicableCertificate("certify_stability: xi = 1 or mu = 1 makes the bound undefined");
  const double d = static_cast<double>(degree);
  const double zeta = 1.0 - eq.xi - eq.mu;
  const double num = p.alpha - p.r * d * zeta;
  StabilityCertificate c;
  c.condition = "sigma > (alpha - r d zeta) / (d (1 - mu)) and sigma > (alpha - r d zeta) / (d (1 - xi))";
  c.lhs = p.sigma;
  c.rhs_bounds = {num / (d * (1.0 - eq.mu)), num / (d * (1.0 - eq.xi))};
  c.margin = std::min(p.sigma - c.rhs_bounds[0], p.sigma - c.rhs_bounds[1]);
  c.holds = c.margin > 0.0;
  return c;
}

/// Gershgorin row test on an arbitrary matrix: every diagonal entry negative and
/// -J_ii > Σ_{j≠i} |J_ij|. margin = min_i (-J_ii - Σ_{j≠i} |J_ij|).
inline StabilityCertificate jacobian_row_dominance(const DenseMatrix& j) {
  StabilityCertificate c;
  c.condition = "-J_ii > sum_{j != i} |J_ij| for every row";
  c.margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < j.rows; ++i) {
    double off = 0.0;
    for (std::size_t k = 0; k < j.cols; ++k)
      if (k != i) off += std::abs(j(i, k));
    c.margin = std::min(c.margin, -j(i, i) - off);
  }
  c.holds = c.margin > 0.0;
  return c;
}

struct DecayOptions {
  std::uint64_t seed = 1;
  double dt = 0.01;
  double horizon = 1000.0;
  double shrink_factor = 10.0;
};

struct DecayReport {
  bool passed = true;
  std::size_t trials = 0;
  std::size_t resamples = 0;    // perturbations rejected for leaving the simplex
  double worst_ratio = 0.0;     // max over trials of final distance / initial distance
  std::string warning;
};

/// Empirical local-stability probe: perturbs the lifted equilibrium by random
/// vectors of 2-norm `perturbation_size`, integrates, and passes iff every trial's
/// distance to the equilibrium shrinks by `shrink_factor` within the horizon.
inline DecayReport decay_oracle(const ConsensusEquilibrium& eq, const ModelParams& params, const RegularGraph& graph,
                                double perturbation_size, std::size_t trials, const DecayOptions& opt = {}) {
  DecayReport report;
  if (trials == 0) {
    report.warning = "zero trials requested; result is vacuous";
    return report;
  }
  if (perturbation_size == 0.0) {
    report.trials = trials;
    report.warning = "zero perturbation; distance is identically 0";
    return report;
  }
  const std::size_t n = graph.size();
  const auto centre = eq.lift(n).flatten();
  Rng rng(opt.seed);
  UnstructuredField f(params, graph);
  Rk4Stepper stepper(2 * n);
  const auto max_steps = static_cast<std::size_t>(std::ceil(opt.horizon / opt.dt));
  std::vector<double> s(2 * n), diff(2 * n);
  for (std::size_t t = 0; t < trials; ++t) {
    for (std::size_t attempt = 0;; ++attempt) {
      if (attempt > 10000) throw NumericalError("decay_oracle: cannot place a perturbation inside the simplex");
      for (std::size_t k = 0; k < 2 * n; ++k) diff[k] = rng.normal();
      const double scale = perturbation_size / norm2(diff);
      for (std::size_t k = 0; k < 2 * n; ++k) s[k] = centre[k] + scale * diff[k];
      if (pair_simplex_violation(s) <= 0.0) break;
      ++report.resamples;
    }
    const double d0 = perturbation_size;
    double dist = d0;
    for (std::size_t step = 0; step < max_steps && dist * opt.shrink_factor > d0; ++step) {
      stepper.step(f, std::span<double>(s), opt.dt);
      for (std::size_t k = 0; k < 2 * n; ++k) diff[k] = s[k] - centre[k];
      dist = norm2(diff);
    }
    ++report.trials;
    report.worst_ratio = std::max(report.worst_ratio, dist / d0);
    if (dist * opt.shrink_factor > d0) report.passed = false;
  }
  return report;
}

}  // namespace swarmnet
