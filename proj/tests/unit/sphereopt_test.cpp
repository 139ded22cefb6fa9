#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "errors.hpp"
#include "polyring/family.hpp"
#include "sphereopt/sphereopt.hpp"
#include "test_support.hpp"

namespace loj::opt {
namespace {

using poly::parse_poly;

const poly::VarNames kXYZ{"x", "y", "z"};

Polynomial linear() { return parse_poly("x", kXYZ); }

OptConfig quick(int starts = 16) {
  OptConfig cfg;
  cfg.starts = starts;
  return cfg;
}

bool same_point(const ComplexPoint& a, const ComplexPoint& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].real() != b[i].real() || a[i].imag() != b[i].imag()) return false;
  return true;
}

TEST(Sphere, LinearHasUnitGradient) {
  for (double r : {5.0, 100.0}) {
    const PhiSample s = phi_at(linear(), r, quick());
    EXPECT_NEAR(s.phi, 1.0, 1e-15);
    EXPECT_EQ(s.converged_starts, s.total_starts);
  }
}

// Along Psi(t) = (t^-q, t^n, 0) the x- and y-partials vanish and the
// z-partial is y, so t = r^(-1/q) gives gradient norm r^(-n/q).
double psi_bound(int n, int q, double r) { return std::pow(r, -static_cast<double>(n) / q); }

TEST(Sphere, FamilyBelowPsiOracle) {
  EXPECT_LE(phi_at(poly::family(1, 1), 100, OptConfig{}).phi, 1.01e-2);
  EXPECT_LE(phi_at(poly::family(2, 1), 100, OptConfig{}).phi, 1.01e-4);
}

TEST(SphereProperty, PsiConsistency) {
  for (int n = 1; n <= 2; ++n)
    for (int q = 1; q <= 2; ++q)
      for (double r : {1e2, 1e3}) {
        const PhiSample s = phi_at(poly::family(n, q), r, OptConfig{});
        EXPECT_LE(s.phi, psi_bound(n, q, r) + 1e-12) << "n=" << n << " q=" << q << " r=" << r;
      }
}

TEST(SphereProperty, ArgminOnSphereAndPhiRecomputed) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 6; ++trial) {
    const Polynomial g = poly::family(1 + trial % 2, 1 + trial / 3);
    const double r = std::pow(10.0, 1 + trial % 3);
    const PhiSample s = phi_at(g, r, quick());
    EXPECT_NEAR(poly::norm(s.argmin) / r, 1.0, 1e-9);
    EXPECT_EQ(s.phi, exact_grad_norm(g, s.argmin));
  }
  for (int trial = 0; trial < 8; ++trial) {
    Polynomial g = testing::random_poly(rng, 2, 4, 4);
    if (g.is_constant()) continue;
    const PhiSample s = phi_at(g, 3.0, quick(8));
    EXPECT_NEAR(poly::norm(s.argmin) / 3.0, 1.0, 1e-9);
  }
}

TEST(SphereProperty, NeverWorseThanAnyStart) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    Polynomial g = testing::random_poly(rng, 2, 5, 4);
    if (g.is_constant()) continue;
    OptConfig cfg = quick(8);
    cfg.seed = static_cast<std::uint64_t>(trial);
    const double r = 0.5 + trial;
    const PhiSample s = phi_at(g, r, cfg);
    for (const auto& x : start_points(2, r, cfg)) EXPECT_LE(s.phi, exact_grad_norm(g, x)) << g.to_string();
  }
}

TEST(SphereProperty, Deterministic) {
  const Polynomial g = poly::family(1, 2);
  OptConfig cfg = quick();
  cfg.seed = 42;
  const PhiSample a = phi_at(g, 300, cfg);
  const PhiSample b = phi_at(g, 300, cfg);
  cfg.threads = 4;
  const PhiSample c = phi_at(g, 300, cfg);
  EXPECT_EQ(a.phi, b.phi);
  EXPECT_EQ(a.phi, c.phi);
  EXPECT_TRUE(same_point(a.argmin, b.argmin));
  EXPECT_TRUE(same_point(a.argmin, c.argmin));
  EXPECT_EQ(a.converged_starts, c.converged_starts);
}

TEST(Sphere, StartPoints) {
  OptConfig cfg = quick(10);
  cfg.extra_seeds = {{{3, 0}, {0, 4}, {0, 0}}};
  const auto pts = start_points(3, 7.0, cfg);
  ASSERT_EQ(pts.size(), 11u);
  for (const auto& p : pts) EXPECT_NEAR(poly::norm(p), 7.0, 7e-15);
  EXPECT_NEAR(pts.back()[0].real(), 7.0 * 3 / 5, 1e-14);
  cfg.seed = 1;
  EXPECT_FALSE(same_point(pts[0], start_points(3, 7.0, cfg)[0]));
  cfg.extra_seeds = {{{1, 0}}};
  EXPECT_THROW(start_points(3, 7.0, cfg), DimensionError);
}

TEST(Sphere, RejectsBadInput) {
  EXPECT_THROW(phi_at(linear(), 0.0, quick()), DomainError);
  EXPECT_THROW(phi_at(linear(), -1.0, quick()), DomainError);
  EXPECT_THROW(phi_at(parse_poly("3", kXYZ), 1.0, quick()), DomainError);
  OptConfig bad;
  bad.grad_tol = 0;
  EXPECT_THROW(phi_at(linear(), 1.0, bad), DomainError);
  bad = OptConfig{};
  bad.starts = 0;
  EXPECT_THROW(bad.validate(), DomainError);
}

TEST(Sphere, GeometricGrid) {
  const auto g = geometric_grid(10, 1e4, 4);
  ASSERT_EQ(g.size(), 4u);
  EXPECT_EQ(g.front(), 10);
  EXPECT_EQ(g.back(), 1e4);
  EXPECT_NEAR(g[1], 100, 1e-9);
  EXPECT_THROW(geometric_grid(10, 5, 4), DomainError);
}

TEST(SlopeProperty, RecoversSyntheticPowerLaw) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> slope(-4, 2), coef(0.01, 100);
  for (int trial = 0; trial < 25; ++trial) {
    const double s = slope(rng), c = coef(rng);
    std::vector<PhiSample> samples;
    for (double r : geometric_grid(10, 1e4, 12)) {
      PhiSample p;
      p.r = r;
      p.phi = c * std::pow(r, s);
      p.converged_starts = 1;
      samples.push_back(p);
    }
    const SlopeFit fit = fit_slope(samples);
    EXPECT_NEAR(fit.slope, s, 1e-9);
    EXPECT_NEAR(std::exp(fit.intercept), c, 1e-9 * c);
    EXPECT_LT(fit.residual, 1e-9);
  }
}

TEST(Slope, SkipsUnconvergedSamples) {
  std::vector<PhiSample> samples;
  for (double r : {10.0, 100.0, 1000.0, 1e4}) {
    PhiSample p;
    p.r = r;
    p.phi = 1 / r;
    p.converged_starts = 1;
    samples.push_back(p);
  }
  samples[1].phi = 1e6;
  samples[1].converged_starts = 0;
  const SlopeFit fit = fit_slope(samples);
  EXPECT_EQ(fit.used, 3u);
  EXPECT_NEAR(fit.slope, -1, 1e-12);
  samples[2].converged_starts = 0;
  EXPECT_THROW(fit_slope(samples), NumericError);
}

TEST(Slope, LinearIsFlat) {
  const SlopeFit fit = estimate_Linfty(linear(), 10, 1e4, 4, quick(8));
  EXPECT_NEAR(fit.slope, 0, 0.05);
  EXPECT_THROW(estimate_Linfty(linear(), 10, 1e4, 2, quick(8)), DomainError);
}

const std::vector<double> kRadii{10, 100, 1000};

TEST(Probe, MalgrangeFailsWhenNExceedsQ) {
  const MalgrangeProbe p = malgrange_probe(poly::family(2, 1), 0, kRadii, 1e-3, OptConfig{});
  ASSERT_EQ(p.rows.size(), 3u);
  EXPECT_TRUE(p.decreasing);
  // Along Psi the product is r * r^-2.
  EXPECT_NEAR(p.trend_slope, -1, 0.1);
  for (const auto& row : p.rows) EXPECT_LE(row.product, 1.01 / row.r);
}

TEST(Probe, MalgrangeHoldsWhenNAtMostQ) {
  const MalgrangeProbe p = malgrange_probe(poly::family(1, 2), 0, kRadii, 1e-3, OptConfig{});
  EXPECT_FALSE(p.decreasing);
  for (const auto& row : p.rows) EXPECT_GT(row.product, 1.0);
}

TEST(Probe, MalgrangeLinearGrows) {
  const MalgrangeProbe p = malgrange_probe(linear(), {0.5, 0}, kRadii, 1e-3, quick());
  EXPECT_FALSE(p.decreasing);
  for (const auto& row : p.rows) EXPECT_NEAR(row.product, row.r, 1e-9 * row.r);
  EXPECT_THROW(malgrange_probe(linear(), 0, {}, 1e-3, quick()), DomainError);
  EXPECT_THROW(malgrange_probe(linear(), 0, kRadii, 0, quick()), DomainError);
}

TEST(Probe, MtameFamilyGrows) {
  const MtameProbe p = mtame_probe(poly::family(1, 1), kRadii, OptConfig{});
  EXPECT_TRUE(p.increasing);
  for (const auto& row : p.rows) {
    EXPECT_FALSE(row.flagged);
    EXPECT_GT(row.collected, 0);
  }
}

TEST(Probe, MtameQuadraticIsRadial) {
  const MtameProbe p = mtame_probe(parse_poly("x^2 + y^2 + z^2", kXYZ), kRadii, quick());
  EXPECT_TRUE(p.increasing);
  for (const auto& row : p.rows) EXPECT_NEAR(row.min_abs_g, row.r * row.r, 1e-9 * row.r * row.r);
}

TEST(Probe, MtameLinear) {
  const MtameProbe p = mtame_probe(linear(), kRadii, quick());
  EXPECT_TRUE(p.increasing);
  for (const auto& row : p.rows) {
    EXPECT_NEAR(row.min_abs_g, row.r, 1e-9 * row.r);
    EXPECT_NEAR(std::abs(row.argmin[0]), row.r, 1e-9 * row.r);
  }
}

}  // namespace
}  // namespace loj::opt
