#pragma once

// Unweighted, undirected regular graphs: generators, validation and edge-list IO.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "swarmnet/error.hpp"

namespace swarmnet {

/// Square 0/1 adjacency matrix given as rows.
using Adjacency = std::vector<std::vector<int>>;

/// Returns the common degree d if `adjacency` is square, binary, symmetric, has a
/// zero diagonal and constant row sums. Throws GraphValidationError naming the
/// first violating row otherwise.
inline std::size_t validate_regular(const Adjacency& adjacency) {
  const std::size_t n = adjacency.size();
  if (n == 0) throw InputError("adjacency matrix is empty");
  for (std::size_t i = 0; i < n; ++i) {
    if (adjacency[i].size() != n)
      throw GraphValidationError(i, "matrix is not square (row has " + std::to_string(adjacency[i].size()) +
                                        " entries, expected " + std::to_string(n) + ")");
  }
  std::size_t degree = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t row_sum = 0;
    for (std::size_t j = 0; j < n; ++j) {
      const int a = adjacency[i][j];
      if (a != 0 && a != 1)
        throw GraphValidationError(i, "non-binary entry " + std::to_string(a) + " at column " + std::to_string(j));
      if (i == j && a != 0) throw GraphValidationError(i, "nonzero diagonal entry (self-loop)");
      if (adjacency[j][i] != a)
        throw GraphValidationError(i, "asymmetric entry at column " + std::to_string(j));
      row_sum += static_cast<std::size_t>(a);
    }
    if (i == 0) {
      degree = row_sum;
    } else if (row_sum != degree) {
      throw GraphValidationError(i, "row sum " + std::to_string(row_sum) + " differs from row 0 sum " +
                                        std::to_string(degree) + " (graph is not regular)");
    }
  }
  return degree;
}

/// Immutable regular graph. Node indices are 0-based and stable.
class RegularGraph {
 public:
  /// Validates and wraps an adjacency matrix.
  static RegularGraph from_adjacency(const Adjacency& adjacency) {
    const std::size_t d = validate_regular(adjacency);
    RegularGraph g;
    g.n_ = adjacency.size();
    g.d_ = d;
    g.adjacency_ = adjacency;
    g.neighbors_.resize(g.n_);
    for (std::size_t i = 0; i < g.n_; ++i)
      for (std::size_t j = 0; j < g.n_; ++j)
        if (adjacency[i][j] == 1) g.neighbors_[i].push_back(j);
    return g;
  }

  /// Builds from an undirected edge list (each edge once). Duplicates and loops are rejected.
  static RegularGraph from_edges(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
    Adjacency a(n, std::vector<int>(n, 0));
    for (const auto& [u, v] : edges) {
      if (u >= n || v >= n)
        throw InputError("edge (" + std::to_string(u) + ", " + std::to_string(v) + ") out of range for " +
                         std::to_string(n) + " nodes");
      if (u == v) throw GraphValidationError(u, "self-loop in edge list");
      if (a[u][v] != 0)
        throw GraphValidationError(u, "duplicate edge (" + std::to_string(u) + ", " + std::to_string(v) + ")");
      a[u][v] = a[v][u] = 1;
    }
    return from_adjacency(a);
  }

  std::size_t size() const noexcept { return n_; }
  std::size_t degree() const noexcept { return d_; }
  std::size_t edge_count() const noexcept { return n_ * d_ / 2; }
  const Adjacency& adjacency() const noexcept { return adjacency_; }
  const std::vector<std::size_t>& neighbors(std::size_t i) const { return neighbors_[i]; }

  std::vector<std::pair<std::size_t, std::size_t>> edges() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j : neighbors_[i])
        if (i < j) out.emplace_back(i, j);
    return out;
  }

  /// Σ_{j∈N_i} v_j for every i.
  void neighbor_sums(const double* v, double* out) const {
    for (std::size_t i = 0; i < n_; ++i) {
      double acc = 0.0;
      for (std::size_t j : neighbors_[i]) acc += v[j];
      out[i] = acc;
    }
  }

  friend bool operator==(const RegularGraph& a, const RegularGraph& b) { return a.adjacency_ == b.adjacency_; }

 private:
  RegularGraph() = default;

  std::size_t n_ = 0;
  std::size_t d_ = 0;
  Adjacency adjacency_;
  std::vector<std::vector<std::size_t>> neighbors_;
};

/// Circulant graph C_n(offsets): i ~ i ± s (mod n) for each offset s in [1, n/2].
inline RegularGraph build_circulant(std::size_t n, const std::vector<std::size_t>& offsets) {
  if (n < 3) throw InputError("circulant graph needs n >= 3");
  if (offsets.empty()) throw InputError("circulant graph needs at least one offset");
  std::set<std::size_t> seen;
  for (std::size_t s : offsets) {
    if (s < 1 || 2 * s > n)
      throw InputError("circulant offset " + std::to_string(s) + " outside [1, " + std::to_string(n / 2) + "]");
    if (!seen.insert(s).second) throw InputError("circulant offset " + std::to_string(s) + " repeated");
  }
  Adjacency a(n, std::vector<int>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t s : offsets) {
      a[i][(i + s) % n] = 1;
      a[i][(i + n - s) % n] = 1;
    }
  }
  return RegularGraph::from_adjacency(a);
}

inline RegularGraph build_complete(std::size_t n) {
  if (n < 2) throw InputError("complete graph needs n >= 2");
  Adjacency a(n, std::vector<int>(n, 1));
  for (std::size_t i = 0; i < n; ++i) a[i][i] = 0;
  return RegularGraph::from_adjacency(a);
}

/// Truncated icosahedron (Buckminster Fuller dome): 60 nodes, degree 3, 90 edges.
///
/// Canonical vertex order: for each base point (0, 1, 3φ), (1, 2+φ, 2φ),
/// (φ, 2, φ³) in that order, take the cyclic permutations (a,b,c), (b,c,a),
/// (c,a,b); for each, apply the sign patterns (+,+,+), (+,+,-), (+,-,+),
/// (+,-,-), (-,+,+), (-,+,-), (-,-,+), (-,-,-) and append the point unless an
/// identical point is already listed. Vertex i is the i-th point appended.
/// Two vertices are adjacent iff their distance equals the edge length 2.
inline RegularGraph build_buckminster() {
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  const std::array<std::array<double, 3>, 3> base{{{0.0, 1.0, 3.0 * phi},
                                                   {1.0, 2.0 + phi, 2.0 * phi},
                                                   {phi, 2.0, phi * phi * phi}}};
  std::vector<std::array<double, 3>> pts;
  for (const auto& b : base) {
    const std::array<std::array<double, 3>, 3> perms{{{b[0], b[1], b[2]}, {b[1], b[2], b[0]}, {b[2], b[0], b[1]}}};
    for (const auto& p : perms) {
      for (int mask = 0; mask < 8; ++mask) {
        const std::array<double, 3> q{(mask & 4) ? -p[0] : p[0], (mask & 2) ? -p[1] : p[1],
                                      (mask & 1) ? -p[2] : p[2]};
        const bool dup = std::any_of(pts.begin(), pts.end(), [&](const auto& t) {
          return std::abs(t[0] - q[0]) < 1e-9 && std::abs(t[1] - q[1]) < 1e-9 && std::abs(t[2] - q[2]) < 1e-9;
        });
        if (!dup) pts.push_back(q);
      }
    }
  }
  const std::size_t n = pts.size();
  Adjacency a(n, std::vector<int>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double d2 = 0.0;
      for (int c = 0; c < 3; ++c) d2 += (pts[i][c] - pts[j][c]) * (pts[i][c] - pts[j][c]);
      if (std::abs(d2 - 4.0) < 1e-6) a[i][j] = a[j][i] = 1;
    }
  }
  return RegularGraph::from_adjacency(a);
}

/// Length of the shortest cycle, or 0 for a forest.
inline std::size_t girth(const RegularGraph& g) {
  const std::size_t n = g.size();
  std::size_t best = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> dist(n), parent(n);
  for (std::size_t s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), std::numeric_limits<std::size_t>::max());
    dist[s] = 0;
    parent[s] = n;
    std::deque<std::size_t> queue{s};
    while (!queue.empty()) {
      const std::size_t u = queue.front();
      queue.pop_front();
      for (std::size_t v : g.neighbors(u)) {
        if (dist[v] == std::numeric_limits<std::size_t>::max()) {
          dist[v] = dist[u] + 1;
          parent[v] = u;
          queue.push_back(v);
        } else if (parent[u] != v) {
          best = std::min(best, dist[u] + dist[v] + 1);
        }
      }
    }
  }
  return best == std::numeric_limits<std::size_t>::max() ? 0 : best;
}

/// Parses the edge-list format: one "i j" pair per line, 0-based, each
/// undirected edge once, '#' starts a comment line. Node count is max index + 1.
inline RegularGraph read_edge_list(std::istream& in) {
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::size_t n = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    long long u = -1, v = -1;
    std::string extra;
    if (!(ls >> u >> v) || (ls >> extra) || u < 0 || v < 0)
      throw InputError("edge list line " + std::to_string(line_no) + ": expected two non-negative integers");
    edges.emplace_back(static_cast<std::size_t>(u), static_cast<std::size_t>(v));
    n = std::max({n, static_cast<std::size_t>(u) + 1, static_cast<std::size_t>(v) + 1});
  }
  if (edges.empty()) throw InputError("edge list contains no edges");
  return RegularGraph::from_edges(n, edges);
}

inline RegularGraph read_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open edge list '" + path + "'");
  return read_edge_list(in);
}

inline void write_edge_list(std::ostream& out, const RegularGraph& g) {
  out << "# n=" << g.size() << " d=" << g.degree() << "\n";
  for (const auto& [u, v] : g.edges()) out << u << ' ' << v << '\n';
}

}  // namespace swarmnet
