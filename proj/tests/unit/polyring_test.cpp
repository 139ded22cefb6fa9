#include <gtest/gtest.h>

#include <cmath>

#include "errors.hpp"
#include "polyring/family.hpp"
#include "polyring/polynomial.hpp"
#include "test_support.hpp"

namespace loj::poly {
namespace {

const VarNames kXYZ{"x", "y", "z"};

Polynomial P(const char* text, const VarNames& vars = kXYZ) { return parse_poly(text, vars); }

TEST(ParsePoly, FamilyMemberFromText) {
  const Polynomial f = P("x - 3*x^3*y^2 + 2*x^4*y^3 + y*z");
  EXPECT_EQ(f.term_count(), 4u);
  EXPECT_EQ(f, family(1, 1));
  EXPECT_EQ(f.coefficient({3, 2, 0}), GaussianRational(-3));
}

TEST(ParsePoly, ZeroAndCancellation) {
  EXPECT_TRUE(P("0", {"x"}).is_zero());
  EXPECT_TRUE(P("(1+2i)*x^2 - (1+2i)*x^2", {"x"}).is_zero());
  EXPECT_EQ(P("0", {"x"}).to_string(), "0");
}

TEST(ParsePoly, RationalAndComplexLiterals) {
  const Polynomial p = P("1/2*x - 2i*y + (3-1/4*i)*z^2");
  EXPECT_EQ(p.coefficient({1, 0, 0}), GaussianRational(mpq_class(1, 2)));
  EXPECT_EQ(p.coefficient({0, 1, 0}), GaussianRational(0, -2));
  EXPECT_EQ(p.coefficient({0, 0, 2}), GaussianRational(3, mpq_class(-1, 4)));
  EXPECT_EQ(P(p.to_string().c_str()), p);
}

TEST(ParsePoly, Errors) {
  EXPECT_THROW(P("x + w"), ParseError);
  EXPECT_THROW(P("x^-1"), ParseError);
  EXPECT_THROW(P("x + * y"), ParseError);
  EXPECT_THROW(P("x / y"), ParseError);
  EXPECT_THROW(P("(x + y"), ParseError);
  EXPECT_THROW(parse_poly("i + x", {"i", "x"}), ParseError);
  try {
    P("x + 3*q");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 6u);
  }
}

TEST(PolyArith, Basics) {
  EXPECT_EQ(P("(x+y)*(x-y)"), P("x^2 - y^2"));
  EXPECT_EQ(P("x^2 - y^2").to_string(), "x^2 - y^2");
  EXPECT_EQ(pow(P("x"), 0), P("1"));
  EXPECT_TRUE((family(1, 1) - family(1, 1)).is_zero());
  EXPECT_THROW(P("x") + parse_poly("x", {"x"}), DimensionError);
}

TEST(Partial, FamilyYDerivative) {
  for (int n = 1; n <= 3; ++n) {
    for (int q = 1; q <= 3; ++q) {
      Polynomial expected(kXYZ);
      expected.add_term({static_cast<std::uint32_t>(2 * n + 1), static_cast<std::uint32_t>(2 * q - 1), 0},
                        -6L * q);
      expected.add_term({static_cast<std::uint32_t>(3 * n + 1), static_cast<std::uint32_t>(3 * q - 1), 0},
                        6L * q);
      expected.add_term({0, 0, 1}, 1);
      EXPECT_EQ(partial(family(n, q), 1), expected) << n << "," << q;
    }
  }
}

TEST(Partial, SimpleCases) {
  EXPECT_EQ(partial(family(1, 1), 2), P("y"));
  EXPECT_TRUE(partial(P("7 + 2i"), 0).is_zero());
  EXPECT_THROW(partial(P("x"), 3), DimensionError);
}

TEST(Eval, FamilyAtOneOneZero) {
  const std::complex<double> pt[] = {1.0, 1.0, 0.0};
  EXPECT_EQ(eval(family(1, 1), pt), std::complex<double>(0.0));
  const ComplexPoint g = grad_vec(family(1, 1), pt);
  EXPECT_EQ(g, (ComplexPoint{0.0, 0.0, 1.0}));
}

TEST(Eval, GradIsConjugated) {
  const Polynomial g = P("i*x + y");
  const std::complex<double> pt[] = {{1, 2}, {3, 4}, 0.0};
  const ComplexPoint v = grad_vec(g, pt);
  EXPECT_EQ(v[0], std::complex<double>(0, -1));
  EXPECT_EQ(v[1], std::complex<double>(1, 0));
  // grad of a coordinate function
  const ComplexPoint e = grad_vec(P("x"), pt);
  EXPECT_EQ(e, (ComplexPoint{1.0, 0.0, 0.0}));
  EXPECT_THROW(eval(P("x"), std::span<const std::complex<double>>(pt, 2)), DimensionError);
}

TEST(Compose, IdentityProjectionAndCoordinateChange) {
  const Polynomial g = P("x + y*z");
  EXPECT_EQ(compose(g, PolyMap::identity(kXYZ)), g);
  const PolyMap s{{P("x^2 + z"), P("3*y"), P("x*y*z")}};
  EXPECT_EQ(compose(P("x"), s), s.components[0]);
  // Pulling f_{1,1} back along z -> z + 3x^3y - 2x^4y^2 absorbs its middle terms.
  const PolyMap change{{P("x"), P("y"), P("z + 3*x^3*y - 2*x^4*y^2")}};
  EXPECT_EQ(compose(family(1, 1), change), g);
  const PolyMap forward{{P("x"), P("y"), P("z - 3*x^3*y + 2*x^4*y^2")}};
  EXPECT_EQ(compose(g, forward), family(1, 1));
  EXPECT_THROW(compose(g, PolyMap{{P("x"), P("y")}}), DimensionError);
}

TEST(Family, Constructor) {
  EXPECT_EQ(family(1, 1).to_string(), "x - 3*x^3*y^2 + 2*x^4*y^3 + y*z");
  EXPECT_EQ(family(2, 3).to_string(), "x - 3*x^5*y^6 + 2*x^7*y^9 + y*z");
  EXPECT_THROW(family(0, 1), DomainError);
  EXPECT_THROW(family(1, 0), DomainError);
}

TEST(Family, EulerIdentityVanishes) {
  for (int n = 1; n <= 6; ++n)
    for (int q = 1; q <= 6; ++q) EXPECT_TRUE(euler_identity_residual(n, q).is_zero()) << n << "," << q;
  FamilyCoefficients bad;
  bad.middle = -4;
  EXPECT_FALSE(euler_identity_residual(family(2, 1, bad), 2, 1).is_zero());
}

TEST(Family, Automorphism) {
  for (auto [n, q] : {std::pair{1, 1}, std::pair{2, 2}, std::pair{3, 1}}) {
    const AutomorphismReport r = verify_automorphism(n, q);
    EXPECT_TRUE(r.ok()) << n << "," << q;
    EXPECT_EQ(r.in_z_coordinates, P("x + y*z"));
  }
  FamilyCoefficients bad;
  bad.middle = -4;
  const AutomorphismReport r = verify_automorphism(family(1, 1, bad), 1, 1);
  EXPECT_FALSE(r.ok());
  EXPECT_EQ(r.residual, P("-x^3*y^2"));
}

TEST(Family, CubicRoots) {
  const CubicReport eq4 = cubic_root_check(CubicKind::kEq4, 1);
  EXPECT_TRUE(eq4.one_is_root);
  EXPECT_TRUE(eq4.remainder.is_zero());
  EXPECT_EQ(eq4.quadratic, parse_poly("8*T^2 - T - 1", {"T"}));
  const double s = std::sqrt(33.0);
  std::vector<double> roots{eq4.quadratic_roots[0].real(), eq4.quadratic_roots[1].real()};
  std::sort(roots.begin(), roots.end());
  EXPECT_NEAR(roots[0], (1 - s) / 16, 1e-15);
  EXPECT_NEAR(roots[1], (1 + s) / 16, 1e-15);

  const CubicReport cp = cubic_root_check(CubicKind::kCounterpart, 1);
  EXPECT_TRUE(cp.one_is_root);
  EXPECT_EQ(cp.quadratic, parse_poly("-4*T^2 - T - 1", {"T"}));
  EXPECT_LE(cp.max_root_residual, 1e-12);

  const CubicReport big = cubic_root_check(CubicKind::kEq4, 10);
  EXPECT_EQ(big.cubic, parse_poly("1 - 63*T^2 + 62*T^3", {"T"}));
  EXPECT_TRUE(big.one_is_root);
}

// ---------------------------------------------------------------------------
// Properties on random polynomials.

class PolyProperties : public ::testing::Test {
 protected:
  std::mt19937_64 rng{20240517};
  static constexpr int kIterations = 200;
};

TEST_F(PolyProperties, RingAxioms) {
  for (int it = 0; it < kIterations; ++it) {
    const Polynomial a = testing::random_poly(rng, 3, 5, 4);
    const Polynomial b = testing::random_poly(rng, 3, 5, 4);
    const Polynomial c = testing::random_poly(rng, 3, 5, 4);
    EXPECT_EQ((a + b) + c, a + (b + c));
    EXPECT_EQ(a * (b + c), a * b + a * c);
    EXPECT_EQ(a * b, b * a);
    EXPECT_TRUE((a - a).is_zero());
  }
}

TEST_F(PolyProperties, LeibnizRule) {
  for (int it = 0; it < kIterations; ++it) {
    const Polynomial a = testing::random_poly(rng, 3, 6, 5);
    const Polynomial b = testing::random_poly(rng, 3, 6, 5);
    for (std::size_t i = 0; i < 3; ++i)
      EXPECT_EQ(partial(a * b, i), partial(a, i) * b + a * partial(b, i));
  }
}

TEST_F(PolyProperties, PrintParseRoundTrip) {
  for (int it = 0; it < kIterations; ++it) {
    const Polynomial a = testing::random_poly(rng, 3, 6, 5);
    EXPECT_EQ(parse_poly(a.to_string(), a.vars()), a) << a.to_string();
  }
}

TEST_F(PolyProperties, ChainRuleConsistency) {
  for (int it = 0; it < 100; ++it) {
    const Polynomial g = testing::random_poly(rng, 3, 4, 3);
    PolyMap s;
    for (int k = 0; k < 3; ++k) s.components.push_back(testing::random_poly(rng, 2, 3, 2));
    const auto x = testing::random_point(rng, 2, 1.5);
    std::vector<std::complex<double>> inner;
    for (const auto& c : s.components) inner.push_back(eval(c, x));
    const std::complex<double> direct = eval(compose(g, s), x);
    const std::complex<double> nested = eval(g, inner);
    // Relative to the magnitude of the terms, not of a possibly cancelled value.
    double scale = 1;
    for (const auto& [e, c] : g.terms()) {
      double t = std::abs(c.to_complex());
      for (std::size_t k = 0; k < 3; ++k) t *= std::pow(std::abs(inner[k]), e[k]);
      scale = std::max(scale, t);
    }
    EXPECT_LE(std::abs(direct - nested), 1e-12 * scale);
  }
}

TEST_F(PolyProperties, FiniteDifferenceGradient) {
  const double h = 1e-5;
  for (int it = 0; it < 100; ++it) {
    const Polynomial g = testing::random_poly(rng, 3, 6, 6);
    const auto x = testing::random_point(rng, 3, 2.0);
    const ComplexPoint grad = grad_vec(g, x);
    for (std::size_t i = 0; i < 3; ++i) {
      auto xp = x, xm = x;
      xp[i] += h;
      xm[i] -= h;
      const std::complex<double> fd = (eval(g, xp) - eval(g, xm)) / (2 * h);
      const std::complex<double> exact = std::conj(grad[i]);
      EXPECT_LE(std::abs(fd - exact), 1e-6 * std::max(1.0, std::abs(exact)));
    }
  }
}

}  // namespace
}  // namespace loj::poly
