#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "support.hpp"

using namespace plimit;
using namespace plimit::testing;

namespace {

ScalarField random_field(const DomainMask& m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> val(0.2, 1.5);
  ScalarField f(m.grid());
  for (std::size_t k = 0; k < f.u.size(); ++k)
    if (m.inside(k)) f[k] = val(rng);
  return f;
}

void check_gradient(const WeightField& w, double p, const ScalarField* c) {
  const auto err = gradient_check(w, p, c, 50, 7 + static_cast<int>(p));
  EXPECT_LE(err.energy, 1e-5) << "p = " << p;
  EXPECT_LE(err.mass, 1e-5) << "p = " << p;
}

}  // namespace

TEST(Energy, ZeroFieldHasZeroEnergyAndMass) {
  const auto mask = disk_mask(1.0 / 16);
  const auto w = build_weight(PiecewiseWeight{}, mask);
  const ScalarField z(mask.grid());
  EXPECT_EQ(dirichlet_energy_p(z, w, 4.0).value, 0.0);
  EXPECT_EQ(weighted_mass_p(z, w, 4.0), 0.0);
}

TEST(Energy, ConeEnergyApproximatesBallArea) {
  const double h = 1.0 / 128, r = 0.5;
  const auto mask = disk_mask(h);
  const auto w = build_weight(PiecewiseWeight{}, mask);
  const auto d = edt(mask);
  const Grid& g = mask.grid();
  const auto cone = cone_field({g.nx / 2, g.ny / 2}, r, d);
  const double area = std::numbers::pi * r * r;
  for (double p : {2.0, 6.0}) {
    const double e = dirichlet_energy_p(cone, w, p).value;
    EXPECT_NEAR(e, area, 0.05 * area) << "p = " << p;
  }
}

TEST(Energy, HomogeneousOfDegreeP) {
  const auto mask = disk_mask(1.0 / 16);
  const auto w = build_weight(PiecewiseWeight{}, mask);
  const auto u = random_field(mask, 1);
  ScalarField u2 = u;
  for (auto& v : u2.u) v *= 2;
  for (double p : {2.0, 7.5, 40.0}) {
    const auto a = dirichlet_energy_p(u, w, p), b = dirichlet_energy_p(u2, w, p);
    EXPECT_NEAR(b.log, a.log + p * std::log(2.0), 1e-12 * std::abs(b.log) + 1e-13);
    EXPECT_NEAR(b.value, std::pow(2.0, p) * a.value, 1e-12 * b.value);
  }
}

TEST(Energy, RejectsBadInputs) {
  const auto mask = disk_mask(1.0 / 8);
  const auto w = build_weight(PiecewiseWeight{}, mask);
  const ScalarField z(mask.grid());
  EXPECT_THROW(dirichlet_energy_p(z, w, 1.5), Error);
  ScalarField c(mask.grid());  // C = 0 inside
  EXPECT_THROW(dirichlet_energy_p(z, w, 4.0, &c), Error);
  ScalarField bad(mask.grid());
  bad[0] = 1.0;  // corner node is outside
  EXPECT_THROW(dirichlet_energy_p(bad, w, 4.0), Error);
}

TEST(Energy, PotentialTermAdds) {
  const auto mask = disk_mask(1.0 / 16);
  const auto w = build_weight(PiecewiseWeight{}, mask);
  const auto u = random_field(mask, 2);
  ScalarField c(mask.grid());
  for (std::size_t k = 0; k < c.u.size(); ++k) c[k] = mask.inside(k) ? 3.0 : 0.0;
  const double p = 5.0;
  const double e0 = dirichlet_energy_p(u, w, p).value;
  const double e1 = dirichlet_energy_p(u, w, p, &c).value;
  EXPECT_NEAR(e1 - e0, 3.0 * weighted_mass_p(u, w, p), 1e-10 * e1);
}

TEST(Mass, OddWeightEvenFieldCancels) {
  const auto mask = disk_mask(1.0 / 32);
  const auto w = build_weight(AffineWeight{0.0, 1.0, 0.0}, mask);
  const auto d = edt(mask);
  const Grid& g = mask.grid();
  const auto cone = cone_field({g.nx / 2, g.ny / 2}, 0.7, d);
  EXPECT_NEAR(weighted_mass_p(cone, w, 3.0), 0.0, 1e-12);
}

TEST(Mass, ConeNormTendsToRadius) {
  const double h = 1.0 / 64, r = 0.5;
  const auto mask = disk_mask(h);
  const auto w = build_weight(PiecewiseWeight{}, mask);
  const auto d = edt(mask);
  const Grid& g = mask.grid();
  const auto cone = cone_field({g.nx / 2, g.ny / 2}, r, d);
  double prev = 0.0;
  for (double p : {4.0, 16.0, 64.0}) {
    const double norm = std::pow(weighted_mass_p(cone, w, p), 1.0 / p);
    EXPECT_GT(norm, prev);
    EXPECT_LE(norm, r);
    prev = norm;
  }
  EXPECT_GT(prev, 0.85 * r);
}

TEST(Gradient, MatchesFiniteDifferences) {
  const auto mask = disk_mask(1.0 / 10);
  const auto w = build_weight(RadialWeight{{0.2, 0.013}, 1.0, -2.0}, mask);
  for (double p : {2.0, 6.0, 17.0}) check_gradient(w, p, nullptr);
}

TEST(Gradient, MatchesFiniteDifferencesWithPotential) {
  const auto mask = disk_mask(1.0 / 10);
  const auto w = build_weight(AffineWeight{1.0, 0.5, 0.2}, mask);
  ScalarField c(mask.grid());
  for (std::size_t k = 0; k < c.u.size(); ++k) c[k] = mask.inside(k) ? 2.5 : 0.0;
  for (double p : {2.0, 6.0, 17.0}) check_gradient(w, p, &c);
}

TEST(Rayleigh, ZeroHomogeneous) {
  const auto mask = disk_mask(1.0 / 16);
  const auto w = build_weight(PiecewiseWeight{}, mask);
  const auto u = random_field(mask, 3);
  for (double p : {2.0, 9.0, 33.0}) {
    const double base = rayleigh_quotient(u, w, p).lambda;
    for (double t : {0.5, 3.0}) {
      ScalarField v = u;
      for (auto& x : v.u) x *= t;
      EXPECT_NEAR(rayleigh_quotient(v, w, p).lambda, base, 1e-12 * base);
    }
  }
}

TEST(Solver, ResultIsSelfConsistent) {
  const auto mask = disk_mask(1.0 / 16);
  const auto w = build_weight(ball_weight(0.4), mask);
  for (double p : {2.0, 8.0}) {
    const auto r = solve_lambda1(w, p);
    EXPECT_TRUE(r.converged);
    EXPECT_GT(r.lambda, 0.0);
    EXPECT_NEAR(weighted_mass_p(r.field, w, p), 1.0, 1e-10);
    EXPECT_NEAR(dirichlet_energy_p(r.field, w, p).value, r.lambda, 1e-10 * r.lambda);
    EXPECT_NEAR(rayleigh_quotient(r.field, w, p).lambda, r.lambda, 1e-10 * r.lambda);
    EXPECT_NEAR(r.lambda_root, std::pow(r.lambda, 1.0 / p), 1e-12 * r.lambda_root);
    for (double v : r.field.u) EXPECT_GE(v, 0.0);
    EXPECT_TRUE(satisfies_dirichlet(r.field, mask));
  }
}

TEST(Solver, AcceptedLambdaSequenceIsNonIncreasing) {
  const auto mask = disk_mask(1.0 / 16);
  const auto w = build_weight(two_ball_weight(0.2), mask);
  EigenOptions opts;
  opts.record_history = true;
  const auto r = solve_lambda1(w, 6.0, nullptr, opts);
  ASSERT_GT(r.history.size(), 2u);
  for (std::size_t k = 1; k < r.history.size(); ++k) EXPECT_LE(r.history[k], r.history[k - 1]);
}

TEST(Solver, BelowEveryAdmissibleCone) {
  const auto mask = disk_mask(1.0 / 20);
  const auto w = build_weight(ball_weight(0.5), mask);
  const auto d = edt(mask);
  for (double p : {3.0, 10.0}) {
    const auto r = solve_lambda1(w, p);
    for (const auto& [c, rad] : random_cones(d, w.plus(), 20, 5)) {
      const auto cone = cone_field(c, rad, d);
      const auto ev = RayleighFunctional(w, p).evaluate(cone.u);
      if (!ev.mass_positive) continue;
      EXPECT_LE(r.lambda_root, std::exp(ev.log_rayleigh / p) + 1e-8);
    }
  }
}

TEST(Solver, MonotoneInWeight) {
  const auto mask = disk_mask(1.0 / 16);
  const auto w1 = build_weight(ball_weight(0.4), mask);
  const auto w2 = build_weight(PiecewiseWeight{-0.5, {{Disk{{0, 0}, 0.4}, 1.5}}}, mask);
  for (std::size_t k = 0; k < mask.grid().size(); ++k) ASSERT_GE(w2[k], w1[k]);
  const double p = 5.0;
  const auto r = solve_lambda1(w1, p);
  ScalarField test = r.field;
  const double s = std::pow(weighted_mass_p(test, w2, p), -1.0 / p);
  for (auto& v : test.u) v *= s;
  EXPECT_LE(rayleigh_quotient(test, w2, p).lambda, r.lambda + 1e-8);
}

TEST(Solver, NegationDualityIsExact) {
  const auto mask = disk_mask(1.0 / 16);
  const auto w = build_weight(ball_weight(0.4), mask);
  const auto m = mu1(w, 6.0);
  const auto l = solve_lambda1(negate(w), 6.0);
  EXPECT_EQ(m.lambda, -l.lambda);
  EXPECT_EQ(m.lambda_root, -l.lambda_root);
  EXPECT_LT(m.lambda, 0.0);
}

TEST(Solver, OddWeightGivesSymmetricPair) {
  const auto mask = disk_mask(1.0 / 16);
  const auto w = build_weight(AffineWeight{0.0, 1.0, 0.0}, mask);
  EigenOptions opts;
  opts.tol = 1e-11;
  const auto l = solve_lambda1(w, 4.0, nullptr, opts);
  const auto m = mu1(w, 4.0, opts);
  EXPECT_NEAR(-m.lambda, l.lambda, 1e-6 * l.lambda);
}

TEST(Solver, ErrorsOnMissingRegions) {
  const auto mask = disk_mask(1.0 / 8);
  const auto w = build_weight(PiecewiseWeight{}, mask);
  try {
    mu1(w, 4.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::no_negative_region);
  }
  try {
    solve_lambda1(negate(w), 4.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::no_positive_region);
  }
  EXPECT_THROW(solve_lambda1(w, 80.0), Error);
}

TEST(Solver, NonConvergenceIsReportedNotThrown) {
  const auto mask = disk_mask(1.0 / 16);
  const auto w = build_weight(PiecewiseWeight{}, mask);
  EigenOptions opts;
  opts.max_iter = 2;
  opts.tol = 1e-15;
  const auto r = solve_lambda1(w, 8.0, nullptr, opts);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.iterations, 2);
  EXPECT_TRUE(std::isfinite(r.lambda));
}

TEST(Solver, LargeExponentStaysFinite) {
  const auto mask = DomainMask(Grid(128, 128, 1.0 / 63.5, -1.0, -1.0),
                               std::vector<std::uint8_t>(128 * 128, 1));
  const auto w = build_weight(ball_weight(0.5), mask);
  EigenOptions opts;
  opts.max_iter = 2000;
  const auto r = solve_lambda1(w, 64.0, nullptr, opts);
  EXPECT_TRUE(std::isfinite(r.lambda_root));
  EXPECT_TRUE(std::isfinite(r.log_lambda));
  EXPECT_TRUE(std::isfinite(r.residual));
  EXPECT_TRUE(std::isfinite(r.final_step));
  for (double v : r.field.u) ASSERT_TRUE(std::isfinite(v));
  const auto recs = sweep(w, {64.0}, nullptr, opts);
  EXPECT_TRUE(std::isfinite(recs[0].cone_bound));
  EXPECT_TRUE(std::isfinite(recs[0].deviation));
}

TEST(TwoCone, EndpointAndSymmetry) {
  const double h = 1.0 / 24;
  const auto mask = disk_mask(h);
  const auto w = build_weight(PiecewiseWeight{}, mask);
  const auto d = edt(mask);
  const Grid& g = mask.grid();
  const Node c1{g.nx / 2 - 12, g.ny / 2}, c2{g.nx / 2 + 12, g.ny / 2};
  const double rad = 0.45, p = 6.0;
  const double bound = two_cone_upper_bound(p, c1, c2, rad, w, d);
  const double single = rayleigh_quotient(cone_field(c1, rad, d), w, p).root;
  EXPECT_GE(bound, single * (1 - 1e-14));
  EXPECT_NEAR(bound, single, 1e-12 * single);  // identical cones: flat objective
  const double a = std::pow(0.5, 1.0 / p);
  const double mid = rayleigh_quotient(two_cone_field(a, -a, c1, c2, rad, d), w, p).root;
  EXPECT_NEAR(bound, mid, 1e-12 * mid);
  EXPECT_GE(bound, solve_lambda1(w, p).lambda_root);
}

TEST(TwoCone, AsymmetricWeightPicksLargerEndpoint) {
  const double h = 1.0 / 24;
  const auto mask = disk_mask(h);
  const auto w = build_weight(AffineWeight{1.0, 0.5, 0.0}, mask);  // m = 1 + x/2
  const auto d = edt(mask);
  const Grid& g = mask.grid();
  const Node c1{g.nx / 2 - 12, g.ny / 2}, c2{g.nx / 2 + 12, g.ny / 2};
  const double rad = 0.45, p = 4.0;
  const double bound = two_cone_upper_bound(p, c1, c2, rad, w, d);
  const double r1 = rayleigh_quotient(cone_field(c1, rad, d), w, p).root;
  const double r2 = rayleigh_quotient(cone_field(c2, rad, d), w, p).root;
  EXPECT_NEAR(bound, std::max(r1, r2), 1e-12 * bound);
}

TEST(Sweep, RowsTargetsAndTrend) {
  const auto mask = disk_mask(1.0 / 16);
  const auto w = build_weight(PiecewiseWeight{}, mask);
  const std::vector<double> ps{4, 8, 16, 32};
  const auto recs = sweep(w, ps);
  ASSERT_EQ(recs.size(), ps.size());
  for (std::size_t k = 0; k < recs.size(); ++k) {
    EXPECT_TRUE(recs[k].error.empty());
    EXPECT_EQ(recs[k].p, ps[k]);
    EXPECT_LE(recs[k].lambda_root, recs[k].cone_bound + 1e-8);
    if (k) EXPECT_LE(recs[k].deviation, recs[k - 1].deviation);
  }
  EXPECT_THROW(sweep(w, {8, 4}), Error);
}

TEST(Sweep, PotentialTargetIsOneWhenRadiusExceedsOne) {
  const auto mask = disk_mask(1.0 / 8, 2.0);
  const auto w = build_weight(ball_weight(0.5), mask);
  ScalarField c(mask.grid());
  for (std::size_t k = 0; k < c.u.size(); ++k) c[k] = mask.inside(k) ? 4.0 : 0.0;
  const auto recs = sweep(w, {4, 8}, &c);
  for (const auto& r : recs) {
    EXPECT_EQ(r.target, 1.0);
    EXPECT_TRUE(std::isfinite(r.lambda_root));
  }
  EXPECT_LE(recs[1].deviation, recs[0].deviation);
}
