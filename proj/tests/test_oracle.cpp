#include <gtest/gtest.h>

#include <cmath>

#include "swipt_re/oracle.hpp"
#include "swipt_re/regions.hpp"
#include "swipt_re/solvers.hpp"
#include "test_util.hpp"

namespace swipt {
namespace {

SweepSpec sweep(int n) {
  SweepSpec s;
  s.n_points = n;
  return s;
}

TEST(GridDiag, SisoFullPower) {
  const RVector h = RVector::Constant(1, 0.8);
  const OracleResult o = grid_search_p3_diag(h, h, 2.0, 0.5, 1e-3);
  EXPECT_NEAR(o.best_rate, std::log2(1.0 + 0.64 * 2.0), 1e-12);
}

TEST(GridDiag, ZeroFloorIsWaterfilling) {
  const RVector amp = (RVector(3) << 1.5, 1.0, 0.4).finished();
  const double power = 2.0;
  const OracleResult o = grid_search_p3_diag(amp, amp, power, 0.0, 1e-3);
  const double wf = waterfill(amp.cwiseAbs2(), power).rate;
  EXPECT_LE(o.best_rate, wf + 1e-12);
  // One grid step of power moved between modes costs at most max gain * step in rate.
  EXPECT_GE(o.best_rate, wf - 1e-3 * power * 2.25 / std::log(2.0));
  EXPECT_NEAR(o.best_covariance.trace(), power, 1e-9);
}

TEST(GridDiag, ReferenceDiagonalInstance) {
  const RVector amp = (RVector(2) << 2.0, 1.0).finished();
  const OracleResult o = grid_search_p3_diag(amp, amp, 1.0, 3.5, 1e-3);
  EXPECT_NEAR(o.best_rate, std::log2(4.5) + std::log2(1.125), 1e-9);
  EXPECT_EQ(o.grid_size, 1001);
  EXPECT_GE(harvested_power(test::diag2(2, 1), o.best_covariance), 3.5 - 1e-9);
}

TEST(GridDiag, InfeasibleFloorThrows) {
  const RVector amp = (RVector(2) << 2.0, 1.0).finished();
  try {
    grid_search_p3_diag(amp, amp, 1.0, 4.5, 1e-2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInfeasible);
  }
}

TEST(GridDiag, SoundAgainstSolver) {
  GaussianSource rng(71);
  for (int trial = 0; trial < 5; ++trial) {
    RVector amp(2);
    amp << 0.3 + std::abs(rng.next()), 0.3 + std::abs(rng.next());
    const CMatrix h = test::diag2(amp(0), amp(1));
    const double power = 1.0 + std::abs(rng.next());
    const Corners c = compute_corners(ChannelPair::colocated(h), power);
    const double q = c.q_id + 0.5 * (c.q_max - c.q_id);
    const double solver = solve_p3_colocated(h, power, q).rate;
    const double res = 1e-3;
    const OracleResult o = grid_search_p3_diag(amp, amp, power, q, res);
    EXPECT_LE(o.best_rate, solver + 1e-6);
    EXPECT_GE(o.best_rate, solver - 10.0 * res);
  }
}

TEST(RandomRank, DiagonalBound) {
  const OracleResult o = random_rank_search_p1(test::diag2(2, 1), 1.5, 20000, 5);
  EXPECT_LT(o.best_rate, 4.0 * 1.5);
  EXPECT_GT(o.best_rate, 0.99 * 4.0 * 1.5);
}

TEST(RandomRank, InjectedTopVectorIsExact) {
  GaussianSource rng(72);
  const CMatrix g = test::random_matrix(rng, 3, 3);
  const P1Solution p1 = solve_p1(ChannelPair::separated(g, g), 2.0);
  const OracleResult o = random_rank_search_p1(g, 2.0, 1, 0, p1.v1);
  EXPECT_NEAR(o.best_rate, p1.q_max, 1e-12 * p1.q_max);
}

TEST(RandomRank, ApproachesQmax) {
  GaussianSource rng(73);
  const CMatrix g = test::random_matrix(rng, 3, 3);
  const P1Solution p1 = solve_p1(ChannelPair::separated(g, g), 1.0);
  const OracleResult o = random_rank_search_p1(g, 1.0, 100000, 74);
  EXPECT_LE(o.best_rate, p1.q_max + 1e-9);
  EXPECT_GE(o.best_rate, 0.98 * p1.q_max);
}

TEST(ProjectedAscent, MatchesSolverOnSeparatedInstance) {
  GaussianSource rng(75);
  const ChannelPair ch =
      ChannelPair::separated(test::random_matrix(rng, 2, 3), test::random_matrix(rng, 2, 3));
  const double power = 2.0;
  const Corners c = compute_corners(ch, power);
  const double q = c.q_id + 0.6 * (c.q_max - c.q_id);
  const P3Solution s = solve_p3(ch, power, q);
  const OracleResult o = projected_ascent_p3(ch, power, q, 5, 76);
  EXPECT_GE(harvest_raw(ch.g().adjoint() * ch.g(), o.best_covariance.matrix()), q - 1e-9);
  EXPECT_LE(o.best_rate, s.rate + 1e-6);
  EXPECT_GE(o.best_rate, s.rate - 1e-3);
}

TEST(Containment, ReflexiveAndTransitive) {
  CMatrix h(2, 2);
  h << 1.0, 0.5, 0.5, 1.0;
  const REBoundary ts1 = trace_ts1(h, 100.0, 1.0, 21);
  const REBoundary ts2p = trace_ts2(h, 100.0, 1.0, sweep(21), 200.0);
  const REBoundary ts2 = trace_ts2(h, 100.0, 1.0, sweep(21));
  EXPECT_TRUE(region_contains(ts1, ts1, 1e-12).contained);
  EXPECT_TRUE(region_contains(ts2, ts1, 1e-9).contained);
  EXPECT_TRUE(region_contains(ts2p, ts1, 1e-9).contained);
  EXPECT_TRUE(region_contains(ts2, ts2p, 1e-9).contained);
  const ContainmentReport rev = region_contains(ts1, ts2, 1e-9);
  EXPECT_FALSE(rev.contained);
  EXPECT_FALSE(rev.violations.empty());
  EXPECT_GT(rev.max_excess, 0.0);
}

TEST(Containment, EnergyBeyondOuterReach) {
  REBoundary outer, inner;
  outer.points = {{0.0, 2.0, true}, {1.0, 0.0, true}};
  inner.points = {{0.5, 0.5, true}, {2.0, 0.1, true}};
  const ContainmentReport r = region_contains(outer, inner, 1e-9);
  EXPECT_FALSE(r.contained);
  ASSERT_EQ(r.violations.size(), 1u);
  EXPECT_EQ(r.violations[0].energy, 2.0);
}

TEST(Containment, DisjointRangesThrow) {
  REBoundary outer, inner;
  outer.points = {{0.0, 2.0, true}, {1.0, 0.0, true}};
  inner.points = {{5.0, 0.0, true}, {6.0, 0.0, true}};
  EXPECT_THROW(region_contains(outer, inner, 1e-9), Error);
}

TEST(Containment, Interpolation) {
  REBoundary b;
  b.points = {{1.0, 4.0, true}, {3.0, 0.0, true}};
  EXPECT_EQ(interpolate_rate(b, 0.0), 4.0);
  EXPECT_NEAR(interpolate_rate(b, 2.0), 2.0, 1e-15);
  EXPECT_EQ(interpolate_rate(b, 5.0), 0.0);
}

}  // namespace
}  // namespace swipt
