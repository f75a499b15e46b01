#pragma once

// Shared numerical kernels: fixed-step RK4, dense linear solve, a portable
// seeded generator and simplex samplers.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "swarmnet/error.hpp"

namespace swarmnet {

struct SolverConfig {
  double dt = 0.01;
  double t_end = 100.0;
  std::size_t sample_every = 100;  // steps between recorded samples
  std::uint64_t seed = 1;
  double tol_stationary = 1e-10;
  double tol_consensus = 1e-8;
  bool stop_when_stationary = false;

  void validate() const {
    if (!(dt > 0.0)) throw InputError("solver.dt must be > 0");
    if (!(t_end >= dt)) throw InputError("solver.t_end must be >= dt");
    if (sample_every < 1) throw InputError("solver.sample_every must be >= 1");
    if (!(tol_stationary > 0.0) || !(tol_consensus > 0.0))
      throw InputError("solver tolerances must be > 0");
  }

  std::size_t step_count() const {
    return static_cast<std::size_t>(std::llround(std::ceil(t_end / dt - 1e-9)));
  }
};

/// Row-major dense matrix.
struct DenseMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  DenseMatrix() = default;
  DenseMatrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

  double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

  static DenseMatrix identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::vector<double> multiply(std::span<const double> v) const {
    std::vector<double> out(rows, 0.0);
    for (std::size_t i = 0; i < rows; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < cols; ++j) acc += (*this)(i, j) * v[j];
      out[i] = acc;
    }
    return out;
  }
};

inline double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double e : v) m = std::max(m, std::abs(e));
  return m;
}

inline double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double e : v) s += e * e;
  return std::sqrt(s);
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

/// Vector field signature used by the integrators: writes f(state) into out.
using FieldFn = std::function<void(std::span<const double>, std::span<double>)>;

/// Classical four-stage Runge-Kutta stepper with reusable workspace.
class Rk4Stepper {
 public:
  explicit Rk4Stepper(std::size_t dim) : k1_(dim), k2_(dim), k3_(dim), k4_(dim), tmp_(dim) {}

  /// Advances state in place by dt. Returns the ∞-norm of f at the start of the step.
  template <class F>
  double step(F&& f, std::span<double> state, double dt) {
    const std::size_t n = state.size();
    f(std::span<const double>(state), std::span<double>(k1_));
    const double start_rate = max_abs(k1_);
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = state[i] + 0.5 * dt * k1_[i];
    f(std::span<const double>(tmp_), std::span<double>(k2_));
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = state[i] + 0.5 * dt * k2_[i];
    f(std::span<const double>(tmp_), std::span<double>(k3_));
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = state[i] + dt * k3_[i];
    f(std::span<const double>(tmp_), std::span<double>(k4_));
    for (std::size_t i = 0; i < n; ++i)
      state[i] += dt / 6.0 * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::isfinite(state[i])) throw NumericalError(diagnose(i));
    }
    return start_rate;
  }

 private:
  std::string diagnose(std::size_t i) const {
    std::ostringstream os;
    os << "non-finite RK4 output at component " << i << " (stages k1=" << k1_[i] << " k2=" << k2_[i]
       << " k3=" << k3_[i] << " k4=" << k4_[i] << ")";
    return os.str();
  }

  std::vector<double> k1_, k2_, k3_, k4_, tmp_;
};

/// One RK4 step returning the new state.
template <class F>
std::vector<double> rk4_step(F&& f, std::span<const double> state, double dt) {
  std::vector<double> out(state.begin(), state.end());
  Rk4Stepper stepper(out.size());
  stepper.step(std::forward<F>(f), std::span<double>(out), dt);
  return out;
}

/// Gaussian elimination with partial pivoting. Throws SingularSystemError when a
/// pivot falls below pivot_tol in absolute value.
inline std::vector<double> solve_dense(DenseMatrix m, std::vector<double> b, double pivot_tol = 1e-12) {
  if (m.rows != m.cols) throw InputError("solve_dense: matrix is not square");
  if (b.size() != m.rows) throw InputError("solve_dense: right-hand side has wrong length");
  const std::size_t n = m.rows;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(m(r, col)) > std::abs(m(piv, col))) piv = r;
    if (std::abs(m(piv, col)) < pivot_tol)
      throw SingularSystemError("solve_dense: pivot below " + std::to_string(pivot_tol) + " in column " +
                                std::to_string(col));
    if (piv != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(col, j), m(piv, j));
      std::swap(b[col], b[piv]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const double factor = m(r, col) / m(col, col);
      if (factor == 0.0) continue;
      for (std::size_t j = col; j < n; ++j) m(r, j) -= factor * m(col, j);
      b[r] -= factor * b[col];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double acc = b[i];
    for (std::size_t j = i + 1; j < n; ++j) acc -= m(i, j) * x[j];
    x[i] = acc / m(i, i);
  }
  return x;
}

/// Seeded generator: std::mt19937_64 (sequence fixed by the standard) with a
/// 53-bit mantissa mapping, so samples are identical on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller (no cached second variate).
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) { return static_cast<std::uint64_t>(uniform() * static_cast<double>(n)); }

 private:
  std::mt19937_64 engine_;
};

/// Per-node committed fractions (x_i, y_i); z_i = 1 - x_i - y_i is implied.
struct PopulationState {
  std::vector<double> x;
  std::vector<double> y;

  std::size_t size() const { return x.size(); }

  /// Flat layout [x_0..x_{n-1}, y_0..y_{n-1}] used by the integrators.
  std::vector<double> flatten() const {
    std::vector<double> s(x);
    s.insert(s.end(), y.begin(), y.end());
    return s;
  }

  static PopulationState from_flat(std::span<const double> s) {
    const std::size_t n = s.size() / 2;
    return {std::vector<double>(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(n)),
            std::vector<double>(s.begin() + static_cast<std::ptrdiff_t>(n), s.end())};
  }

  /// Largest amount by which the state violates the simplex constraints (0 if inside).
  double simplex_violation() const {
    double v = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      v = std::max({v, -x[i], -y[i], x[i] + y[i] - 1.0});
    }
    return v;
  }

  bool in_simplex(double tol = 0.0) const { return simplex_violation() <= tol; }
};

struct SamplerRange {
  double lo = 0.0;
  double hi = 1.0;
};

enum class SamplerStyle { uniform, biased };

struct SamplerSpec {
  SamplerStyle style = SamplerStyle::uniform;
  SamplerRange x_range{0.0, 0.3};
  SamplerRange y_range{0.2, 0.5};
};

/// Draws one (x, y) point of the unit simplex under the given style.
inline std::pair<double, double> sample_simplex_point(Rng& rng, const SamplerSpec& spec) {
  if (spec.style == SamplerStyle::uniform) {
    double u = rng.uniform();
    double v = rng.uniform();
    if (u + v > 1.0) {
      u = 1.0 - u;
      v = 1.0 - v;
    }
    return {u, v};
  }
  // Rejection sampling inside the box; feasibility is checked by the caller.
  for (int attempt = 0; attempt < 10000; ++attempt) {
    const double x = rng.uniform(spec.x_range.lo, spec.x_range.hi);
    const double y = rng.uniform(spec.y_range.lo, spec.y_range.hi);
    if (x + y <= 1.0) return {x, y};
  }
  throw NumericalError("biased sampler: rejection sampling exhausted");
}

inline void validate_sampler(const SamplerSpec& spec) {
  if (spec.style != SamplerStyle::biased) return;
  for (const auto& r : {spec.x_range, spec.y_range}) {
    if (!(r.lo >= 0.0 && r.hi <= 1.0 && r.lo <= r.hi))
      throw InputError("sampler ranges must satisfy 0 <= lo <= hi <= 1");
  }
  if (spec.x_range.lo + spec.y_range.lo > 1.0)
    throw InputError("sampler ranges infeasible: x_lo + y_lo > 1 leaves no point in the simplex");
}

/// Seeded, reproducible population state inside the simplex.
inline PopulationState sample_simplex_state(std::size_t n, std::uint64_t seed, const SamplerSpec& spec = {}) {
  validate_sampler(spec);
  Rng rng(seed);
  PopulationState s{std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) std::tie(s.x[i], s.y[i]) = sample_simplex_point(rng, spec);
  return s;
}

}  // namespace swarmnet
