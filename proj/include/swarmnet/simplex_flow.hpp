#pragma once

// Fixed-step RK4 driver for systems whose flat state is [x..., y...] with each
// (x_j, y_j) pair confined to the unit simplex.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "swarmnet/error.hpp"
#include "swarmnet/numkit.hpp"

namespace swarmnet {

/// Rounding drift tolerated (and clamped) per step before integration aborts.
inline constexpr double kSimplexTolerance = 1e-9;

struct FlowSummary {
  std::size_t steps = 0;
  double t_final = 0.0;
  std::size_t clamp_events = 0;   // steps on which rounding drift was clamped back into the simplex
  double max_clamped = 0.0;       // largest drift that was clamped
  bool stationary = false;        // stopped because ‖f‖∞ fell below tol_stationary
  double final_rate = 0.0;        // ‖f‖∞ at the final state
};

using SampleObserver = std::function<void(double t, std::span<const double> state)>;

inline double pair_simplex_violation(std::span<const double> s) {
  const std::size_t half = s.size() / 2;
  double v = 0.0;
  for (std::size_t j = 0; j < half; ++j) v = std::max({v, -s[j], -s[half + j], s[j] + s[half + j] - 1.0});
  return v;
}

inline void clamp_to_pair_simplex(std::span<double> s) {
  const std::size_t half = s.size() / 2;
  for (std::size_t j = 0; j < half; ++j) {
    double& x = s[j];
    double& y = s[half + j];
    x = std::max(x, 0.0);
    y = std::max(y, 0.0);
    const double total = x + y;
    if (total > 1.0) {
      x /= total;
      y /= total;
    }
  }
}

/// Integrates `state` in place. Samples at t=0, every sample_every steps and at the end.
template <class F>
FlowSummary integrate_pair_simplex(F&& field, std::span<double> state, const SolverConfig& cfg,
                                   const SampleObserver& observe) {
  cfg.validate();
  if (pair_simplex_violation(state) > kSimplexTolerance)
    throw InputError("initial state lies outside the simplex");
  FlowSummary summary;
  Rk4Stepper stepper(state.size());
  std::vector<double> rate(state.size());
  const std::size_t total = cfg.step_count();
  if (observe) observe(0.0, state);
  std::size_t last_sampled = 0;
  std::size_t step = 0;
  for (; step < total; ++step) {
    const double start_rate = stepper.step(field, state, cfg.dt);
    const double violation = pair_simplex_violation(state);
    if (violation > kSimplexTolerance)
      throw IntegrationError(step + 1, "simplex violated by " + std::to_string(violation) +
                                           " (time step too large?)");
    if (violation > 0.0) {
      ++summary.clamp_events;
      summary.max_clamped = std::max(summary.max_clamped, violation);
      clamp_to_pair_simplex(state);
    }
    if (cfg.stop_when_stationary && start_rate < cfg.tol_stationary) {
      summary.stationary = true;
      ++step;
      break;
    }
    if ((step + 1) % cfg.sample_every == 0) {
      if (observe) observe(static_cast<double>(step + 1) * cfg.dt, state);
      last_sampled = step + 1;
    }
  }
  summary.steps = step;
  summary.t_final = static_cast<double>(step) * cfg.dt;
  field(std::span<const double>(state), std::span<double>(rate));
  summary.final_rate = max_abs(rate);
  if (observe && last_sampled != step) observe(summary.t_final, state);
  return summary;
}

}  // namespace swarmnet
