#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

#include "swarmnet/structured.hpp"

using namespace swarmnet;

namespace {

const ModelParams kCluster{0.5, 0.4, 0.6, 0.3};

ModelParams random_params(Rng& rng, double lo = 0.05, double hi = 2.0) {
  return {rng.uniform(lo, hi), rng.uniform(lo, hi), rng.uniform(lo, hi), rng.uniform(lo, hi)};
}

DegreeDistribution random_distribution(Rng& rng) {
  return powerlaw_distribution(2 + rng.below(60), rng.uniform(1.5, 4.0));
}

// Eigenvalues of [[-b - a, -b], [-b, -b - a]] from trace and determinant, with
// a = α + σu, b = ru + γ, u = ψ d θ.
std::pair<double, double> explicit_eigenvalues(double psi, double theta, const ModelParams& p, double d) {
  const double u = psi * d * theta;
  const double a = p.alpha + p.sigma * u;
  const double b = p.r * u + p.gamma;
  const double m00 = -b - a, m01 = -b, m10 = -b, m11 = -b - a;
  const double tr = m00 + m11;
  const double det = m00 * m11 - m01 * m10;
  const double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
  return {tr / 2.0 + disc, tr / 2.0 - disc};
}

}  // namespace

TEST(Distribution, TwoTermPowerLaw) {
  const auto d = powerlaw_distribution(2, 3.0);
  EXPECT_NEAR(d.prob(1), 8.0 / 9.0, 1e-15);
  EXPECT_NEAR(d.prob(2), 1.0 / 9.0, 1e-15);
  EXPECT_NEAR(d.mean_k, 10.0 / 9.0, 1e-15);
  EXPECT_NEAR(d.second_moment, 12.0 / 9.0, 1e-15);
  EXPECT_DOUBLE_EQ(d.psi[0], 0.5);
  EXPECT_DOUBLE_EQ(d.psi[1], 1.0);
}

TEST(Distribution, PowerLawNormalised) {
  const auto d = powerlaw_distribution(40, 3.0);
  EXPECT_NEAR(std::accumulate(d.p.begin(), d.p.end(), 0.0), 1.0, 1e-12);
  EXPECT_DOUBLE_EQ(d.psi.front(), 1.0 / 40.0);
  EXPECT_DOUBLE_EQ(d.psi.back(), 1.0);
}

TEST(Distribution, MomentInequalities) {
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const auto d = random_distribution(rng);
    ASSERT_LE(d.mean_k * d.mean_k, d.second_moment * (1.0 + 1e-14));
    ASSERT_GE(d.mean_k, 1.0);
    ASSERT_LE(d.mean_k, static_cast<double>(d.kmax));
    ASSERT_LE(d.second_moment, static_cast<double>(d.kmax) * d.mean_k * (1.0 + 1e-14));
  }
}

TEST(Distribution, PowerLawRejectsBadArguments) {
  EXPECT_THROW(powerlaw_distribution(1, 3.0), InputError);
  EXPECT_THROW(powerlaw_distribution(10, 1.0), InputError);
}

TEST(Distribution, EmpiricalExamples) {
  const auto a = empirical_distribution({2, 2, 2});
  EXPECT_EQ(a.kmax, 2u);
  EXPECT_DOUBLE_EQ(a.prob(2), 1.0);
  EXPECT_DOUBLE_EQ(a.mean_k, 2.0);
  EXPECT_DOUBLE_EQ(a.second_moment, 4.0);
  const auto b = empirical_distribution({1, 1, 2});
  EXPECT_NEAR(b.prob(1), 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(b.prob(2), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(b.mean_k, 4.0 / 3.0, 1e-15);
  EXPECT_THROW(empirical_distribution({}), InputError);
  EXPECT_THROW(empirical_distribution({0, 2}), InputError);
}

TEST(Distribution, BarabasiAlbertMeanDegree) {
  const auto degrees = barabasi_albert_degrees(200, 2, 42);
  EXPECT_EQ(degrees.size(), 200u);
  EXPECT_EQ(std::accumulate(degrees.begin(), degrees.end(), std::size_t{0}), 2u * (3u + 2u * 197u));
  const auto d = empirical_distribution(degrees);
  EXPECT_NEAR(std::accumulate(d.p.begin(), d.p.end(), 0.0), 1.0, 1e-12);
  EXPECT_NEAR(d.mean_k, 4.0, 0.05);
  EXPECT_EQ(degrees, barabasi_albert_degrees(200, 2, 42));
}

TEST(Distribution, CsvRoundTrip) {
  std::istringstream in("k,p\n1,0.5\n3,0.5\n");
  const auto d = read_distribution_csv(in);
  EXPECT_EQ(d.kmax, 3u);
  EXPECT_DOUBLE_EQ(d.prob(2), 0.0);
  EXPECT_DOUBLE_EQ(d.mean_k, 2.0);
  std::istringstream bad("1,0.5\n2,0.4\n");
  EXPECT_THROW(read_distribution_csv(bad), InputError);
  std::istringstream dup("1,0.5\n1,0.5\n");
  EXPECT_THROW(read_distribution_csv(dup), InputError);
}

TEST(Theta, ConstantAndZeroStates) {
  const auto d = powerlaw_distribution(12, 3.0);
  const ClusteredState c(4, 12, 0.37, 0.21);
  const auto [tx, ty] = compute_theta(c, d);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_NEAR(tx[i], 0.37, 1e-15);
    EXPECT_NEAR(ty[i], 0.21, 1e-15);
  }
  const auto [zx, zy] = compute_theta(ClusteredState(4, 12), d);
  for (double v : zx) EXPECT_EQ(v, 0.0);
}

TEST(Theta, TwoTermHandValue) {
  const auto d = powerlaw_distribution(2, 3.0);
  ClusteredState c(1, 2);
  c.xk(0, 2) = 1.0;
  EXPECT_NEAR(compute_theta(c, d).first[0], 0.2, 1e-15);
}

TEST(Theta, ShapeMismatchThrows) {
  const auto d = powerlaw_distribution(5, 3.0);
  EXPECT_THROW(compute_theta(ClusteredState(3, 4), d), InputError);
}

TEST(Psi, Identities) {
  const auto d = powerlaw_distribution(20, 3.0);
  const auto [px0, py0, pz0] = compute_psi(ClusteredState(3, 20), d);
  EXPECT_NEAR(pz0[0], d.second_moment / d.mean_k, 1e-14);
  const auto [px, py, pz] = compute_psi(ClusteredState(3, 20, 0.3, 0.1), d);
  EXPECT_NEAR(px[1], 0.3 * d.second_moment / d.mean_k, 1e-14);
  const auto s = sample_clustered_state(5, 20, 8);
  const auto m = compute_moments(s, d);
  for (std::size_t i = 0; i < 5; ++i)
    EXPECT_NEAR(d.mean_k * (m.psi_x[i] + m.psi_y[i] + m.psi_z[i]), d.second_moment, 1e-12);
}

TEST(ClusterField, AllZeroGivesSpontaneousRate) {
  const auto g = build_buckminster();
  const auto d = powerlaw_distribution(10, 3.0);
  const auto [dx, dy] = cluster_vector_field(ClusteredState(60, 10), kCluster, g, d);
  for (double v : dx) EXPECT_DOUBLE_EQ(v, kCluster.gamma);
  for (double v : dy) EXPECT_DOUBLE_EQ(v, kCluster.gamma);
}

TEST(ClusterField, SymmetricStateGivesSymmetricRates) {
  const auto g = build_buckminster();
  const auto d = powerlaw_distribution(10, 3.0);
  auto s = sample_clustered_state(60, 10, 4);
  for (auto& v : s.x) v *= 0.5;
  s.y = s.x;
  const auto [dx, dy] = cluster_vector_field(s, kCluster, g, d);
  EXPECT_EQ(dx, dy);
}

TEST(ClusterField, SelfConsistentEquilibriumIsStationary) {
  const auto g = build_buckminster();
  for (std::size_t kmax : {5u, 40u, 177u}) {
    const auto d = powerlaw_distribution(kmax, 3.0);
    const auto eq = solve_selfconsistent_theta(d, kCluster, 3, 1e-12);
    const auto lifted = lift_clusters(60, eq.x_star, eq.x_star);
    EXPECT_LT(cluster_field_residual(lifted, kCluster, g, d), 1e-11);
  }
}

TEST(ClusterField, DimensionMismatchThrows) {
  const auto g = build_buckminster();
  const auto d = powerlaw_distribution(10, 3.0);
  EXPECT_THROW(cluster_vector_field(ClusteredState(59, 10), kCluster, g, d), InputError);
}

TEST(IntegrateClusters, SymmetricStartStaysSymmetric) {
  const auto g = build_buckminster();
  const auto d = powerlaw_distribution(8, 3.0);
  auto s = sample_clustered_state(60, 8, 5);
  for (auto& v : s.x) v *= 0.5;
  s.y = s.x;
  SolverConfig cfg;
  cfg.t_end = 20.0;
  cfg.sample_every = 50;
  const auto traj = integrate_clusters(s, kCluster, g, d, cfg);
  for (const auto& st : traj.states) ASSERT_EQ(st.x, st.y);
}

TEST(IntegrateClusters, StaysInSimplexAndKeepsMomentIdentity) {
  Rng rng(12);
  const auto g = build_circulant(12, {1, 6});
  SolverConfig cfg;
  cfg.t_end = 15.0;
  cfg.sample_every = 25;
  for (int trial = 0; trial < 10; ++trial) {
    const auto p = random_params(rng);
    const auto d = random_distribution(rng);
    const auto traj = integrate_clusters(sample_clustered_state(12, d.kmax, 70 + trial), p, g, d, cfg);
    for (const auto& st : traj.states) {
      ASSERT_LE(st.simplex_violation(), 1e-9);
      const auto [px, py, pz] = compute_psi(st, d);
      for (std::size_t i = 0; i < 12; ++i)
        ASSERT_NEAR(d.mean_k * (px[i] + py[i] + pz[i]), d.second_moment, 1e-10);
    }
  }
}

TEST(IntegrateClusters, DomeClustersReachReportedValues) {
  const auto g = build_buckminster();
  const auto d = powerlaw_distribution(177, 3.0);
  SamplerSpec spec;
  spec.style = SamplerStyle::biased;
  SolverConfig cfg;
  cfg.t_end = 500.0;
  cfg.sample_every = 100000;
  cfg.stop_when_stationary = true;
  cfg.tol_stationary = 1e-12;
  const auto traj = integrate_clusters(sample_clustered_state(60, 177, 2020, spec), kCluster, g, d, cfg);
  const auto& fin = traj.final_state();
  EXPECT_NEAR(fin.xk(7, 1), 0.3127, 2e-3);
  EXPECT_NEAR(fin.xk(7, 10), 0.3143, 2e-3);
  EXPECT_NEAR(fin.xk(7, 40), 0.3190, 2e-3);
  EXPECT_LT(fin.xk(7, 1), fin.xk(7, 10));
  EXPECT_LT(fin.xk(7, 10), fin.xk(7, 40));
}

TEST(Aggregation, ThetaFieldIsTheWeightedClusterField) {
  Rng rng(14);
  const auto g = build_buckminster();
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = random_params(rng);
    const auto d = random_distribution(rng);
    const auto s = sample_clustered_state(60, d.kmax, 300 + trial);
    const auto [cx, cy] = cluster_vector_field(s, p, g, d);
    const auto [tx, ty] = compute_theta(s, d);
    const auto psi = FrozenPsi::from_state(s, d);
    const auto [fx, fy] = theta_vector_field(tx, ty, psi, p, g, d.kmax);
    for (std::size_t i = 0; i < 60; ++i) {
      double ax = 0.0, ay = 0.0;
      for (std::size_t k = 1; k <= d.kmax; ++k) {
        ax += static_cast<double>(k) * d.prob(k) * cx[i * d.kmax + k - 1];
        ay += static_cast<double>(k) * d.prob(k) * cy[i * d.kmax + k - 1];
      }
      ASSERT_NEAR(ax / d.mean_k, fx[i], 1e-12);
      ASSERT_NEAR(ay / d.mean_k, fy[i], 1e-12);
    }
  }
}

TEST(Aggregation, FiniteDifferenceInTime) {
  const auto g = build_buckminster();
  const auto d = powerlaw_distribution(30, 3.0);
  SolverConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 2.0;
  cfg.sample_every = 1;
  const auto traj = integrate_clusters(sample_clustered_state(60, 30, 15), kCluster, g, d, cfg);
  for (std::size_t m : {1u, 500u, 1999u}) {
    const auto before = compute_theta(traj.states[m - 1], d);
    const auto after = compute_theta(traj.states[m + 1], d);
    const auto& mid = traj.states[m];
    const auto [tx, ty] = compute_theta(mid, d);
    const auto [fx, fy] = theta_vector_field(tx, ty, FrozenPsi::from_state(mid, d), kCluster, g, 30);
    for (std::size_t i = 0; i < 60; ++i) {
      EXPECT_NEAR((after.first[i] - before.first[i]) / (2.0 * cfg.dt), fx[i], 1e-6);
      EXPECT_NEAR((after.second[i] - before.second[i]) / (2.0 * cfg.dt), fy[i], 1e-6);
    }
  }
}

TEST(ThetaField, ZeroMomentsGiveSpontaneousRate) {
  const auto g = build_buckminster();
  const FrozenPsi psi{std::vector<double>(60, 0.4), std::vector<double>(60, 0.2), std::vector<double>(60, 1.1)};
  const std::vector<double> zero(60, 0.0);
  const auto [fx, fy] = theta_vector_field(zero, zero, psi, kCluster, g, 40);
  for (std::size_t i = 0; i < 60; ++i) {
    EXPECT_DOUBLE_EQ(fx[i], kCluster.gamma);
    EXPECT_DOUBLE_EQ(fy[i], kCluster.gamma);
  }
}

TEST(ThetaField, EdgelessGraphDecouples) {
  const auto g = RegularGraph::from_adjacency(Adjacency(3, std::vector<int>(3, 0)));
  const FrozenPsi psi{std::vector<double>(3, 0.4), std::vector<double>(3, 0.2), std::vector<double>(3, 1.1)};
  const auto m = theta_equilibrium_matrix(psi, kCluster, g, 10);
  // Node block is -M: [[-(γ+α), -γ], [-γ, -(γ+α)]] with eigenvalues -α and -(2γ+α).
  const double a = -m(0, 0), b = -m(0, 3);
  EXPECT_DOUBLE_EQ(a - b, -kCluster.alpha);
  EXPECT_DOUBLE_EQ(a + b, -(2.0 * kCluster.gamma + kCluster.alpha));
  EXPECT_EQ(m(0, 1), 0.0);
  EXPECT_EQ(m(0, 4), 0.0);
}

TEST(ThetaEquilibrium, ZeroMomentsGiveDecoupledValue) {
  const auto g = build_buckminster();
  const FrozenPsi psi{std::vector<double>(60, 0.0), std::vector<double>(60, 0.0), std::vector<double>(60, 0.0)};
  const auto [tx, ty] = theta_equilibrium(psi, kCluster, g, 40);
  for (std::size_t i = 0; i < 60; ++i) {
    EXPECT_NEAR(tx[i], 0.3125, 1e-14);
    EXPECT_NEAR(ty[i], 0.3125, 1e-14);
  }
}

TEST(ThetaEquilibrium, SymmetricMomentsAndResidual) {
  Rng rng(16);
  const auto g = build_buckminster();
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = random_params(rng);
    const auto d = random_distribution(rng);
    const auto s = sample_clustered_state(60, d.kmax, 400 + trial);
    auto psi = FrozenPsi::from_state(s, d);
    psi.psi_y = psi.psi_x;
    const auto [tx, ty] = theta_equilibrium(psi, p, g, d.kmax);
    for (std::size_t i = 0; i < 60; ++i) ASSERT_NEAR(tx[i], ty[i], 1e-12);
    const auto [fx, fy] = theta_vector_field(tx, ty, psi, p, g, d.kmax);
    ASSERT_LT(std::max(max_abs(fx), max_abs(fy)), 1e-10);
  }
}

TEST(ThetaEquilibrium, IntegrationReachesLinearSolve) {
  const auto g = build_buckminster();
  const auto d = powerlaw_distribution(50, 3.0);
  const auto s = sample_clustered_state(60, 50, 17);
  const auto psi = FrozenPsi::from_state(s, d);
  const auto [tx0, ty0] = compute_theta(s, d);
  SolverConfig cfg;
  cfg.t_end = 200.0;
  cfg.sample_every = 1000;
  cfg.stop_when_stationary = true;
  cfg.tol_stationary = 1e-12;
  const auto traj = integrate_theta(tx0, ty0, psi, kCluster, g, 50, cfg);
  const auto [ex, ey] = theta_equilibrium(psi, kCluster, g, 50);
  EXPECT_LT(max_abs_diff(traj.states.back().first, ex), 1e-8);
  EXPECT_LT(max_abs_diff(traj.states.back().second, ey), 1e-8);
}

TEST(StructuredCertificate, ZeroMomentsAlwaysHold) {
  EXPECT_TRUE(certify_structured(0.0, 0.0, 0.0, kCluster, 3, 40).holds);
}

TEST(StructuredCertificate, LargeCouplingFails) {
  const ModelParams big{0.5, 400.0, 0.6, 300.0};
  EXPECT_FALSE(certify_structured(0.3, 0.3, 0.5, big, 3, 40).holds);
}

TEST(StructuredCertificate, SymmetricBoundary) {
  const auto d = powerlaw_distribution(40, 3.0);
  const double psi_star = 0.6;
  const auto c = certify_symmetric_structured(psi_star, d, kCluster, 3);
  ModelParams above = kCluster;
  above.sigma = c.rhs_bounds[0] + 1e-9;
  const auto fail = certify_symmetric_structured(psi_star, d, above, 3);
  EXPECT_FALSE(fail.holds);
  EXPECT_LT(fail.margin, 0.0);
  EXPECT_THROW(certify_symmetric_structured(0.0, d, kCluster, 3), InapplicableCertificate);
}

TEST(StructuredCertificate, SymmetricFormMatchesGeneralForm) {
  Rng rng(18);
  int agree = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto p = random_params(rng, 0.01, 3.0);
    const auto d = random_distribution(rng);
    const std::size_t deg = 1 + rng.below(6);
    const double cap = d.second_moment / (2.0 * d.mean_k);
    const double psi_star = rng.uniform(0.01, 0.99) * cap;
    const double psi_z = d.second_moment / d.mean_k - 2.0 * psi_star;
    const auto general = certify_structured(psi_star, psi_star, psi_z, p, deg, d.kmax);
    const auto symmetric = certify_symmetric_structured(psi_star, d, p, deg);
    if (std::abs(symmetric.margin) < 1e-9) continue;
    ASSERT_EQ(general.holds, symmetric.holds) << "trial " << trial;
    ++agree;
  }
  EXPECT_GT(agree, 990);
}

TEST(SymmetricCluster, EigenvalueExamples) {
  const auto [a1, a2] = symmetric_cluster_eigenvalues(1.0, 0.0, kCluster, 3);
  EXPECT_DOUBLE_EQ(a1, -0.6);
  EXPECT_DOUBLE_EQ(a2, -1.6);
  const auto [b1, b2] = symmetric_cluster_eigenvalues(1.0, 0.32, kCluster, 3);
  EXPECT_NEAR(b1, -0.888, 1e-12);
  EXPECT_NEAR(b2, -2.656, 1e-12);
}

TEST(SymmetricCluster, EigenvaluesMatchExplicitMatrix) {
  Rng rng(20);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto p = random_params(rng);
    const std::size_t deg = 1 + rng.below(6);
    const double psi = rng.uniform(1e-3, 1.0), theta = rng.uniform();
    const auto [l1, l2] = symmetric_cluster_eigenvalues(psi, theta, p, deg);
    const auto [e_hi, e_lo] = explicit_eigenvalues(psi, theta, p, static_cast<double>(deg));
    ASSERT_NEAR(std::max(l1, l2), e_hi, 1e-12);
    ASSERT_NEAR(std::min(l1, l2), e_lo, 1e-12);
    ASSERT_LT(l1, 0.0);
    ASSERT_LT(l2, 0.0);
    ASSERT_NEAR(symmetric_cluster_determinant(psi, theta, p, deg), l1 * l2, 1e-12 * std::abs(l1 * l2));
  }
}

TEST(SymmetricCluster, EigenvaluesDecreaseWithConnectivity) {
  const auto [a1, a2] = symmetric_cluster_eigenvalues(0.2, 0.3, kCluster, 3);
  const auto [b1, b2] = symmetric_cluster_eigenvalues(0.8, 0.3, kCluster, 3);
  EXPECT_LT(b1, a1);
  EXPECT_LT(b2, a2);
}

TEST(SymmetricCluster, EquilibriumExamples) {
  EXPECT_DOUBLE_EQ(symmetric_cluster_equilibrium(0.0, 0.3, kCluster, 3), 0.3125);
  Rng rng(22);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto p = random_params(rng);
    const double x = symmetric_cluster_equilibrium(rng.uniform(), rng.uniform(), p, 1 + rng.below(6));
    ASSERT_GT(x, 0.0);
    ASSERT_LT(x, 0.5);
  }
}

TEST(SymmetricCluster, MonotoneInConnectivityIffRatioCondition) {
  EXPECT_TRUE(equilibrium_increases_with_connectivity(kCluster));
  Rng rng(24);
  for (int trial = 0; trial < 500; ++trial) {
    const auto p = random_params(rng);
    const double lo = symmetric_cluster_equilibrium(0.3, 0.4, p, 3);
    const double hi = symmetric_cluster_equilibrium(0.6, 0.4, p, 3);
    if (std::abs(p.alpha * p.r - p.sigma * p.gamma) < 1e-6) continue;
    ASSERT_EQ(hi > lo, equilibrium_increases_with_connectivity(p));
  }
}

TEST(SelfConsistent, SingleClusterMatchesBisection) {
  Rng rng(26);
  for (int trial = 0; trial < 50; ++trial) {
    const auto p = random_params(rng);
    const std::size_t kmax = 1 + rng.below(30);
    std::vector<double> w(kmax, 0.0);
    w.back() = 1.0;
    const auto d = DegreeDistribution::from_weights(w);
    const std::size_t deg = 1 + rng.below(5);
    const double dd = static_cast<double>(deg);
    auto g = [&](double t) {
      return t - (p.r * dd * t + p.gamma) / ((2.0 * p.r + p.sigma) * dd * t + 2.0 * p.gamma + p.alpha);
    };
    double lo = 0.0, hi = 0.5;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (g(mid) < 0.0 ? lo : hi) = mid;
    }
    const auto eq = solve_selfconsistent_theta(d, p, deg, 1e-13);
    ASSERT_NEAR(eq.theta, lo, 1e-11);
    ASSERT_LT(std::abs(g(eq.theta)), 1e-12);
  }
}

TEST(SelfConsistent, DomeClusterValues) {
  const auto eq = solve_selfconsistent_theta(powerlaw_distribution(177, 3.0), kCluster, 3);
  EXPECT_NEAR(eq.x_star[0], 0.3127, 2e-3);
  EXPECT_NEAR(eq.x_star[9], 0.3143, 2e-3);
  EXPECT_NEAR(eq.x_star[39], 0.3190, 2e-3);
}

TEST(SelfConsistent, DecoupledValueIsALowerBound) {
  Rng rng(28);
  for (int trial = 0; trial < 200; ++trial) {
    const auto p = random_params(rng);
    if (!equilibrium_increases_with_connectivity(p)) continue;
    const auto eq = solve_selfconsistent_theta(random_distribution(rng), p, 1 + rng.below(5));
    const double floor = p.gamma / (2.0 * p.gamma + p.alpha);
    for (double x : eq.x_star) ASSERT_GE(x, floor - 1e-15);
  }
}

TEST(SelfConsistent, RejectsBadTolerance) {
  EXPECT_THROW(solve_selfconsistent_theta(powerlaw_distribution(5, 3.0), kCluster, 3, 0.0), InputError);
}
