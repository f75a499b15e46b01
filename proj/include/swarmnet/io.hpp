#pragma once

// Text output: locale-independent 15-significant-digit numbers, CSV writers for
// trajectories and moments, and JSON helpers for reports.

#include <charconv>
#include <cstddef>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <span>
#include <string>
#include <system_error>

#include <nlohmann/json.hpp>

#include "swarmnet/dynamics.hpp"
#include "swarmnet/error.hpp"
#include "swarmnet/structured.hpp"

namespace swarmnet {

/// Shortest general-format rendering with at most 15 significant digits.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 15);
  return std::string(buf, res.ptr);
}

/// v rounded to 15 significant digits, so JSON serialisation prints at most 15.
inline double round15(double v) {
  if (!std::isfinite(v)) return v;
  const std::string s = format_double(v);
  double out = 0.0;
  std::from_chars(s.data(), s.data() + s.size(), out);
  return out;
}

/// JSON number rounded to 15 digits; non-finite values become null.
inline nlohmann::json num(double v) {
  if (!std::isfinite(v)) return nullptr;
  return round15(v);
}

/// `t,x_1,…,x_n,y_1,…,y_n`, one row per sample.
class TrajectoryCsvWriter {
 public:
  TrajectoryCsvWriter(std::ostream& out, std::size_t n) : out_(out), n_(n) {
    out_ << 't';
    for (std::size_t i = 1; i <= n; ++i) out_ << ",x_" << i;
    for (std::size_t i = 1; i <= n; ++i) out_ << ",y_" << i;
    out_ << '\n';
  }

  void write(double t, std::span<const double> flat) {
    out_ << format_double(t);
    for (std::size_t k = 0; k < 2 * n_; ++k) out_ << ',' << format_double(flat[k]);
    out_ << '\n';
  }

 private:
  std::ostream& out_;
  std::size_t n_;
};

/// Long format `t,node,k,x,y` over all clusters of all nodes.
class ClusterCsvWriter {
 public:
  ClusterCsvWriter(std::ostream& out, std::size_t n, std::size_t kmax) : out_(out), n_(n), kmax_(kmax) {
    out_ << "t,node,k,x,y\n";
  }

  void write(double t, std::span<const double> flat) {
    const std::string ts = format_double(t);
    const std::size_t half = n_ * kmax_;
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t k = 1; k <= kmax_; ++k) {
        const std::size_t idx = i * kmax_ + k - 1;
        out_ << ts << ',' << i << ',' << k << ',' << format_double(flat[idx]) << ','
             << format_double(flat[half + idx]) << '\n';
      }
  }

 private:
  std::ostream& out_;
  std::size_t n_, kmax_;
};

/// `t,node,theta_x,theta_y`.
class MomentCsvWriter {
 public:
  explicit MomentCsvWriter(std::ostream& out) : out_(out) { out_ << "t,node,theta_x,theta_y\n"; }

  void write(double t, std::span<const double> theta_x, std::span<const double> theta_y) {
    const std::string ts = format_double(t);
    for (std::size_t i = 0; i < theta_x.size(); ++i)
      out_ << ts << ',' << i << ',' << format_double(theta_x[i]) << ',' << format_double(theta_y[i]) << '\n';
  }

 private:
  std::ostream& out_;
};

inline void write_distribution_csv(std::ostream& out, const DegreeDistribution& dist) {
  out << "k,p\n";
  for (std::size_t k = 1; k <= dist.kmax; ++k) out << k << ',' << format_double(dist.p[k - 1]) << '\n';
}

inline nlohmann::json to_json(const StabilityCertificate& c) {
  nlohmann::json j;
  j["condition"] = c.condition;
  j["holds"] = c.holds;
  j["lhs"] = num(c.lhs);
  auto rhs = nlohmann::json::array();
  for (double b : c.rhs_bounds) rhs.push_back(num(b));
  j["rhs_bounds"] = rhs;
  j["margin"] = num(c.margin);
  return j;
}

/// Certificate report for a consensus equilibrium:
/// {xi, mu, zeta, case_tag, sigma, rhs_1, rhs_2, holds, margin}.
inline nlohmann::json certificate_report(const ConsensusEquilibrium& eq, const StabilityCertificate& c) {
  return {{"xi", num(eq.xi)},
          {"mu", num(eq.mu)},
          {"zeta", num(eq.zeta)},
          {"case_tag", to_string(eq.case_tag)},
          {"sigma", num(c.lhs)},
          {"rhs_1", num(c.rhs_bounds.at(0))},
          {"rhs_2", num(c.rhs_bounds.at(1))},
          {"holds", c.holds},
          {"margin", num(c.margin)}};
}

/// Writes `content` to `path` via a temporary sibling and rename.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write '" + tmp.string() + "'");
    out << content;
    if (!out) throw InputError("write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw InputError("cannot rename '" + tmp.string() + "' to '" + path.string() + "': " + ec.message());
}

}  // namespace swarmnet
