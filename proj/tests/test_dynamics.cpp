#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "swarmnet/dynamics.hpp"

using namespace swarmnet;

namespace {

const ModelParams kDome{0.2, 0.3, 0.4, 0.4};

ModelParams random_params(Rng& rng, double lo = 0.05, double hi = 2.0) {
  return {rng.uniform(lo, hi), rng.uniform(lo, hi), rng.uniform(lo, hi), rng.uniform(lo, hi)};
}

RegularGraph circulant_of_degree(std::size_t n, std::size_t d) {
  std::vector<std::size_t> offsets;
  for (std::size_t s = 1; s <= d / 2; ++s) offsets.push_back(s);
  if (d % 2 == 1) offsets.push_back(n / 2);
  return build_circulant(n, offsets);
}

RegularGraph edgeless(std::size_t n) {
  return RegularGraph::from_adjacency(Adjacency(n, std::vector<int>(n, 0)));
}

// Stationarity of a lifted consensus state, written out independently of the field code.
double consensus_balance(double xi, double mu, const ModelParams& p, double d) {
  const double z = 1.0 - xi - mu;
  const double fx = (p.gamma + p.r * d * xi) * z - xi * (p.alpha + p.sigma * d * mu);
  const double fy = (p.gamma + p.r * d * mu) * z - mu * (p.alpha + p.sigma * d * xi);
  return std::max(std::abs(fx), std::abs(fy));
}

}  // namespace

TEST(VectorField, AllUncommittedGivesSpontaneousRate) {
  const auto g = build_buckminster();
  const PopulationState s{std::vector<double>(60, 0.0), std::vector<double>(60, 0.0)};
  const auto [dx, dy] = vector_field(s, kDome, g);
  for (std::size_t i = 0; i < 60; ++i) {
    EXPECT_DOUBLE_EQ(dx[i], kDome.gamma);
    EXPECT_DOUBLE_EQ(dy[i], kDome.gamma);
  }
}

TEST(VectorField, FullyCommittedFlowPointsInward) {
  const auto g = build_circulant(12, {1, 2});
  const ModelParams p{0.5, 0.7, 0.5, 1.3};
  const double xi = 0.35;
  const PopulationState s{std::vector<double>(12, xi), std::vector<double>(12, 1.0 - xi)};
  const auto [dx, dy] = vector_field(s, p, g);
  for (std::size_t i = 0; i < 12; ++i) EXPECT_LT(dx[i] + dy[i], 0.0);
}

TEST(VectorField, DomeConsensusIsStationary) {
  const auto g = build_buckminster();
  const ConsensusEquilibrium eq{2.0 / 9.0, 1.0 / 3.0, 4.0 / 9.0, EquilibriumCase::zeta_locked};
  EXPECT_LT(field_residual(eq.lift(60), kDome, g), 1e-12);
}

TEST(VectorField, DimensionMismatchThrows) {
  const auto g = build_buckminster();
  const PopulationState s{std::vector<double>(59, 0.1), std::vector<double>(59, 0.1)};
  EXPECT_THROW(vector_field(s, kDome, g), InputError);
}

TEST(VectorField, SwapSymmetryIsExact) {
  Rng rng(11);
  const auto g = build_buckminster();
  for (int trial = 0; trial < 200; ++trial) {
    const auto p = random_params(rng);
    const auto s = sample_simplex_state(60, 100 + trial);
    const auto [dx, dy] = vector_field(s, p, g);
    const auto [sx, sy] = vector_field(PopulationState{s.y, s.x}, p, g);
    EXPECT_EQ(dx, sy);
    EXPECT_EQ(dy, sx);
  }
}

TEST(VectorField, BoundaryFacesNeverPointOutward) {
  Rng rng(7);
  const auto g = build_circulant(10, {1, 5});
  for (int trial = 0; trial < 10000; ++trial) {
    const auto p = random_params(rng);
    auto s = sample_simplex_state(10, 5000 + trial);
    const std::size_t i = rng.below(10);
    const int face = static_cast<int>(rng.below(3));
    if (face == 0) s.y[i] = 0.0;
    if (face == 1) s.x[i] = 0.0;
    if (face == 2) s.y[i] = 1.0 - s.x[i];
    const auto [dx, dy] = vector_field(s, p, g);
    if (face == 0) {
      ASSERT_GE(dy[i], 0.0);
    } else if (face == 1) {
      ASSERT_GE(dx[i], 0.0);
    } else {
      ASSERT_LE(dx[i], 0.0);
      ASSERT_LE(dy[i], 0.0);
    }
  }
}

TEST(Integrate, SymmetricStartStaysSymmetric) {
  const auto g = build_buckminster();
  auto s = sample_simplex_state(60, 3);
  for (auto& v : s.x) v *= 0.5;
  s.y = s.x;
  SolverConfig cfg;
  cfg.t_end = 50.0;
  cfg.sample_every = 10;
  const auto traj = integrate(s, kDome, g, cfg);
  ASSERT_GT(traj.states.size(), 100u);
  for (const auto& st : traj.states) EXPECT_EQ(st.x, st.y);
}

TEST(Integrate, DomeConvergesToZetaLockedConsensus) {
  const auto g = build_buckminster();
  SamplerSpec spec;
  spec.style = SamplerStyle::biased;
  const auto s0 = sample_simplex_state(60, 2020, spec);
  SolverConfig cfg;
  cfg.t_end = 4000.0;
  cfg.sample_every = 100000;
  cfg.stop_when_stationary = true;
  const auto traj = integrate(s0, kDome, g, cfg);
  const auto& fin = traj.final_state();
  EXPECT_TRUE(traj.summary.stationary);
  EXPECT_LT(consensus_spread(fin), 1e-8);
  EXPECT_NEAR(fin.x[0], 2.0 / 9.0, 1e-6);
  EXPECT_NEAR(fin.y[0], 1.0 / 3.0, 1e-6);
}

TEST(Integrate, FinalStateStaysInSimplex) {
  Rng rng(21);
  const auto g = build_circulant(20, {1, 3});
  SolverConfig cfg;
  cfg.t_end = 30.0;
  cfg.sample_every = 50;
  for (int trial = 0; trial < 40; ++trial) {
    const auto p = random_params(rng);
    const auto traj = integrate(sample_simplex_state(20, 900 + trial), p, g, cfg);
    for (const auto& st : traj.states) EXPECT_TRUE(st.in_simplex(1e-9));
  }
}

TEST(Integrate, OversizedStepRaisesIntegrationError) {
  const auto g = build_complete(8);
  const ModelParams p{5.0, 5.0, 5.0, 5.0};
  SolverConfig cfg;
  cfg.dt = 1.0;
  cfg.t_end = 10.0;
  try {
    integrate(sample_simplex_state(8, 1), p, g, cfg);
    FAIL() << "expected IntegrationError";
  } catch (const IntegrationError& e) {
    EXPECT_LT(e.step(), 10u);
  }
}

TEST(Integrate, ObserverSeesEverySample) {
  const auto g = build_buckminster();
  SolverConfig cfg;
  cfg.t_end = 1.0;
  cfg.sample_every = 10;
  std::vector<double> times;
  const auto traj = integrate(sample_simplex_state(60, 1), kDome, g, cfg,
                              [&](double t, std::span<const double>) { times.push_back(t); });
  EXPECT_EQ(times.size(), 11u);
  EXPECT_EQ(traj.states.size(), 2u);
  EXPECT_NEAR(times.back(), 1.0, 1e-12);
}

TEST(EquilibriumCase1, DomeValue) {
  const auto eq = equilibrium_case1(kDome, 3);
  EXPECT_NEAR(eq.xi, (0.1 + std::sqrt(2.41)) / 6.0, 1e-15);
  EXPECT_NEAR(eq.xi, 0.27541, 1e-5);
  EXPECT_NEAR(eq.zeta, 0.44918, 2e-5);
  EXPECT_EQ(eq.xi, eq.mu);
  EXPECT_LT(consensus_balance(eq.xi, eq.mu, kDome, 3.0), 1e-12);
}

TEST(EquilibriumCase1, DecoupledLimit) {
  const ModelParams p{0.3, 1e-13, 0.3, 1e-13};
  EXPECT_NEAR(equilibrium_case1(p, 4).xi, 1.0 / 3.0, 1e-10);
}

TEST(EquilibriumCase1, AlwaysLeavesRoomForUncommitted) {
  Rng rng(5);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto p = random_params(rng, 1e-3, 10.0);
    const std::size_t d = 1 + rng.below(12);
    const auto eq = equilibrium_case1(p, d);
    ASSERT_GE(eq.zeta, 0.0);
    ASSERT_GT(eq.xi, 0.0);
    ASSERT_TRUE(eq.consistent());
  }
}

TEST(EquilibriumCase1, RejectsZeroDegree) { EXPECT_THROW(equilibrium_case1(kDome, 0), InputError); }

TEST(EquilibriumCase2, DomeRoots) {
  const auto eqs = equilibrium_case2(kDome, 3);
  ASSERT_EQ(eqs.size(), 2u);
  EXPECT_NEAR(eqs[0].xi, 2.0 / 9.0, 1e-14);
  EXPECT_NEAR(eqs[0].mu, 1.0 / 3.0, 1e-14);
  EXPECT_NEAR(eqs[0].zeta, 4.0 / 9.0, 1e-14);
  EXPECT_NEAR(eqs[1].xi, 1.0 / 3.0, 1e-14);
  EXPECT_EQ(eqs[0].case_tag, EquilibriumCase::zeta_locked);
}

TEST(EquilibriumCase2, RootsAreMirrorImages) {
  Rng rng(9);
  int pairs = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto p = random_params(rng);
    const auto eqs = equilibrium_case2(p, 1 + rng.below(8));
    if (eqs.size() != 2) continue;
    ++pairs;
    EXPECT_NEAR(eqs[0].xi, eqs[1].mu, 1e-12);
    EXPECT_NEAR(eqs[0].mu, eqs[1].xi, 1e-12);
  }
  EXPECT_GT(pairs, 20);
}

TEST(EquilibriumCase2, LargeAbandonmentGivesNoRoots) {
  EXPECT_TRUE(equilibrium_case2(ModelParams{0.2, 0.3, 0.9, 0.4}, 3).empty());
  EXPECT_TRUE(equilibrium_case2(ModelParams{0.2, 0.3, 1.2, 0.4}, 3).empty());
}

TEST(Equilibria, LiftedConsensusIsStationary) {
  Rng rng(13);
  for (int trial = 0; trial < 300; ++trial) {
    const auto p = random_params(rng);
    const std::size_t d = 2 + rng.below(3);
    const auto g = circulant_of_degree(10, d);
    for (const auto& eq : all_equilibria(p, d)) {
      ASSERT_LT(field_residual(eq.lift(10), p, g), 1e-12);
      ASSERT_LT(consensus_balance(eq.xi, eq.mu, p, static_cast<double>(d)), 1e-12);
    }
  }
}

TEST(Equilibria, CaseConsistency) {
  Rng rng(17);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto p = random_params(rng);
    const std::size_t d = 1 + rng.below(6);
    const double dd = static_cast<double>(d);
    const auto c1 = equilibrium_case1(p, d);
    ASSERT_EQ(c1.xi, c1.mu);
    for (const auto& eq : equilibrium_case2(p, d))
      ASSERT_NEAR((p.r * dd * eq.zeta - p.alpha) * (eq.xi - eq.mu), 0.0, 1e-12);
  }
}

TEST(Jacobian, DiagonalIsNegative) {
  const auto g = build_buckminster();
  for (const auto& eq : all_equilibria(kDome, 3)) {
    const auto j = jacobian(eq, kDome, g);
    for (std::size_t i = 0; i < j.rows; ++i) EXPECT_LT(j(i, i), 0.0);
  }
}

TEST(Jacobian, MatchesCentralDifferences) {
  Rng rng(19);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = random_params(rng);
    const std::size_t d = 2 + rng.below(3);
    const auto g = circulant_of_degree(10, d);
    for (const auto& eq : all_equilibria(p, d)) {
      const auto j = jacobian(eq, p, g);
      const auto base = eq.lift(10).flatten();
      const double h = 1e-5;
      for (std::size_t c = 0; c < 20; ++c) {
        auto plus = base, minus = base;
        plus[c] += h;
        minus[c] -= h;
        const auto fp = vector_field(PopulationState::from_flat(plus), p, g);
        const auto fm = vector_field(PopulationState::from_flat(minus), p, g);
        for (std::size_t row = 0; row < 20; ++row) {
          const double vp = row < 10 ? fp.first[row] : fp.second[row - 10];
          const double vm = row < 10 ? fm.first[row] : fm.second[row - 10];
          ASSERT_NEAR(j(row, c), (vp - vm) / (2.0 * h), 1e-6);
        }
      }
    }
  }
}

TEST(Jacobian, EdgelessGraphDecouplesNodes) {
  const auto g = edgeless(4);
  const ModelParams p{0.3, 0.5, 0.6, 0.9};
  const double xi = p.gamma / (2.0 * p.gamma + p.alpha);
  const ConsensusEquilibrium eq{xi, xi, 1.0 - 2.0 * xi, EquilibriumCase::symmetric};
  EXPECT_LT(field_residual(eq.lift(4), p, g), 1e-15);
  const auto j = jacobian(eq, p, g);
  for (std::size_t a = 0; a < 8; ++a) {
    for (std::size_t b = 0; b < 8; ++b) {
      if (a % 4 != b % 4) {
        EXPECT_EQ(j(a, b), 0.0);
      } else if (a == b) {
        EXPECT_DOUBLE_EQ(j(a, b), -(p.gamma + p.alpha));
      } else {
        EXPECT_DOUBLE_EQ(j(a, b), -p.gamma);
      }
    }
  }
}

TEST(Certificate, DomeZetaLockedHolds) {
  const ConsensusEquilibrium eq{2.0 / 9.0, 1.0 / 3.0, 4.0 / 9.0, EquilibriumCase::zeta_locked};
  const auto c = certify_stability(eq, kDome, 3);
  EXPECT_TRUE(c.holds);
  EXPECT_NEAR(c.rhs_bounds[0], 0.0, 1e-15);
  EXPECT_NEAR(c.rhs_bounds[1], 0.0, 1e-15);
  EXPECT_NEAR(c.margin, 0.4, 1e-15);
}

TEST(Certificate, EveryZetaLockedRootHolds) {
  Rng rng(23);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto p = random_params(rng);
    const std::size_t d = 1 + rng.below(6);
    for (const auto& eq : equilibrium_case2(p, d)) ASSERT_TRUE(certify_stability(eq, p, d).holds);
  }
}

TEST(Certificate, ZeroCrossInhibitionFails) {
  const ModelParams p{0.2, 0.1, 1.0, 0.0};
  const ConsensusEquilibrium eq{0.1, 0.1, 0.8, EquilibriumCase::symmetric};
  const auto c = certify_stability(eq, p, 3);
  EXPECT_FALSE(c.holds);
  EXPECT_LT(c.margin, 0.0);
}

TEST(Certificate, FullCommitmentIsInapplicable) {
  const ConsensusEquilibrium eq{0.0, 1.0, 0.0, EquilibriumCase::zeta_locked};
  EXPECT_THROW(certify_stability(eq, kDome, 3), InapplicableCertificate);
}

TEST(Certificate, HoldsIffMarginPositive) {
  Rng rng(29);
  for (int trial = 0; trial < 500; ++trial) {
    const auto p = random_params(rng);
    const std::size_t d = 1 + rng.below(6);
    for (const auto& eq : all_equilibria(p, d)) {
      const auto c = certify_stability(eq, p, d);
      ASSERT_EQ(c.holds, c.margin > 0.0);
    }
  }
}

TEST(RowDominance, DomeEquilibria) {
  const auto g = build_buckminster();
  const auto eqs = equilibrium_case2(kDome, 3);
  EXPECT_FALSE(jacobian_row_dominance(jacobian(eqs[0], kDome, g)).holds);
  const ModelParams strong{0.2, 0.1, 1.0, 0.4};
  EXPECT_TRUE(jacobian_row_dominance(jacobian(equilibrium_case1(strong, 3), strong, g)).holds);
}

TEST(DecayOracle, DomeZetaLockedEquilibriumDecays) {
  const auto g = build_buckminster();
  const auto eq = equilibrium_case2(kDome, 3).front();
  const auto rep = decay_oracle(eq, kDome, g, 1e-3, 3);
  EXPECT_TRUE(rep.passed);
  EXPECT_EQ(rep.trials, 3u);
}

TEST(DecayOracle, ZeroPerturbationTriviallyPasses) {
  const auto g = build_buckminster();
  const auto rep = decay_oracle(equilibrium_case1(kDome, 3), kDome, g, 0.0, 4);
  EXPECT_TRUE(rep.passed);
}

TEST(DecayOracle, ZeroTrialsWarns) {
  const auto g = build_buckminster();
  const auto rep = decay_oracle(equilibrium_case1(kDome, 3), kDome, g, 1e-3, 0);
  EXPECT_TRUE(rep.passed);
  EXPECT_EQ(rep.trials, 0u);
  EXPECT_FALSE(rep.warning.empty());
}

TEST(DecayOracle, UnstableSymmetricEquilibriumFails) {
  // Antisymmetric modes grow at rate rdζ - α > 0 here.
  const auto g = build_buckminster();
  const auto rep = decay_oracle(equilibrium_case1(kDome, 3), kDome, g, 1e-3, 2);
  EXPECT_FALSE(rep.passed);
}

TEST(DecayOracle, RowDominanceImpliesDecay) {
  Rng rng(31);
  int checked = 0;
  for (int trial = 0; trial < 200 && checked < 15; ++trial) {
    const auto p = random_params(rng, 0.1, 1.5);
    const std::size_t d = 2 + rng.below(3);
    const auto g = circulant_of_degree(10, d);
    for (const auto& eq : all_equilibria(p, d)) {
      const auto c = jacobian_row_dominance(jacobian(eq, p, g));
      if (c.margin < 0.05) continue;
      ++checked;
      DecayOptions opt;
      opt.seed = 40 + static_cast<std::uint64_t>(trial);
      EXPECT_TRUE(decay_oracle(eq, p, g, 1e-3, 2, opt).passed);
    }
  }
  EXPECT_GE(checked, 10);
}
