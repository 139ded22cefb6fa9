#include <gtest/gtest.h>

#include <random>

#include "errors.hpp"
#include "laurent/series.hpp"
#include "polyring/family.hpp"
#include "test_support.hpp"

namespace loj::laurent {
namespace {

LaurentSeries S(const char* text, std::size_t w = kDefaultWindow) { return parse_series(text, w); }

TEST(LaurentArith, Basics) {
  EXPECT_EQ(S("t^-1") * S("t^2"), S("t"));
  const LaurentSeries z = S("1 + t") - S("1 + t");
  EXPECT_TRUE(z.is_exact_zero());
  EXPECT_FALSE(z.ord().has_value());
  EXPECT_EQ(pow(S("t^-1 + t"), 2), S("t^-2 + 2 + t^2"));
  EXPECT_EQ(pow(S("t^-1 + t"), 0), S("1"));
}

TEST(LaurentArith, WindowAndModeMismatch) {
  EXPECT_THROW(S("t", 8) + S("t", 16), DimensionError);
  EXPECT_THROW(S("t") * S("t").to_approx(), DimensionError);
}

TEST(LaurentDiv, GeometricSeries) {
  const std::size_t w = 12;
  const LaurentSeries q = divide(S("1", w), S("1 - t", w));
  EXPECT_EQ(q.ord(), 0);
  EXPECT_EQ(q.length(), w);
  for (long k = 0; k < static_cast<long>(w); ++k) EXPECT_EQ(q.exact_coeff(k), GaussianRational(1));
  EXPECT_EQ(q.precision(), static_cast<long>(w));
}

TEST(LaurentDiv, MonomialAndMultiplyBack) {
  EXPECT_EQ(divide(S("t^3"), S("t")), S("t^2"));
  const LaurentSeries a = S("t^2 + t^3"), b = S("t + t^2");
  const LaurentSeries q = divide(a, b);
  // Multiply-back oracle: q * b reproduces a on every known coefficient.
  const LaurentSeries back = q * b;
  for (long e = 0; e < *back.precision(); ++e) EXPECT_EQ(back.exact_coeff(e), a.exact_coeff(e));
  EXPECT_EQ(q.ord(), 1);
  EXPECT_EQ(q.exact_coeff(1), GaussianRational(1));
  for (long e = 2; e < *q.precision(); ++e) EXPECT_TRUE(q.exact_coeff(e).is_zero());
  EXPECT_THROW(divide(S("t"), S("0")), DomainError);
}

TEST(LaurentOrd, Cases) {
  EXPECT_EQ(S("t^-3*(1 + t)").ord(), -3);
  EXPECT_FALSE(S("0").ord().has_value());
  // grad component conj(y(psi(t))) for n = 2: conj(t^2).
  EXPECT_EQ(conj(S("t^2")).ord(), 2);
}

TEST(LaurentConj, Cases) {
  EXPECT_EQ(conj(S("i*t")), S("-i*t"));
  EXPECT_EQ(conj(S("1 + 2*t^-1")), S("1 + 2*t^-1"));
  const LaurentSeries a = S("(1+2i)*t + 3i");
  EXPECT_EQ(conj(conj(a)), a);
}

TEST(LaurentCompose, FamilyAlongPsiVanishes) {
  const poly::VarNames v{"x", "y", "z"};
  const SeriesVector psi({S("t^-1"), S("t"), S("0")});
  // Hand expansion: t^-1 - 3 t^-3 t^2 + 2 t^-4 t^3 + 0 = (1 - 3 + 2) t^-1.
  EXPECT_TRUE(compose_poly(poly::family(1, 1), psi).is_exact_zero());
  const SeriesVector c({S("t^-2"), S("t^3"), S("0")});
  EXPECT_EQ(compose_poly(poly::parse_poly("x", v), c), S("t^-2"));
  EXPECT_EQ(compose_poly(poly::parse_poly("x*y", v), SeriesVector({S("t^-1"), S("t"), S("0")})), S("1"));
  EXPECT_THROW(compose_poly(poly::parse_poly("x", v), SeriesVector({S("t")})), DimensionError);
}

TEST(LaurentText, PrintParse) {
  EXPECT_EQ(S("t^-3*(1 + 2*t + (1+1i)*t^2)").to_string(), "t^-3*(1 + 2*t + (1+i)*t^2)");
  EXPECT_EQ(S("-1/2*t^-1").to_string(), "-1/2*t^-1");
  const LaurentSeries trunc = divide(S("1", 4), S("1 - t", 4));
  EXPECT_EQ(trunc.to_string(), "1 + t + t^2 + t^3 + O(t^4)");
  EXPECT_EQ(S(trunc.to_string().c_str(), 4), trunc);
  EXPECT_EQ(S("t^-2*(1 + t) + O(t^3)").to_string(), "t^-2*(1 + t) + O(t^3)");
  EXPECT_THROW(S("2*O(t^3)"), ParseError);
  EXPECT_THROW(S("t^-2*(1 + O(t))"), ParseError);
}

TEST(LaurentWindow, TruncatedZeroIsFlagged) {
  // (1 + t)^... cancellation beyond a short window leaves an O() remainder.
  const LaurentSeries a = divide(S("1", 3), S("1 - t", 3));   // 1 + t + t^2 + O(t^3)
  const LaurentSeries b = S("1 + t + t^2", 3);
  const LaurentSeries d = a - b;
  EXPECT_TRUE(d.zero_within_window());
  EXPECT_EQ(d.precision(), 3);
  EXPECT_FALSE(d.ord().has_value());
}

TEST(LaurentApprox, CancellationFlushes) {
  const LaurentSeries a = LaurentSeries::from_terms(std::map<long, std::complex<double>>{{0, 0.1}, {1, 0.7}});
  const LaurentSeries b = LaurentSeries::from_terms(std::map<long, std::complex<double>>{{0, 0.3}, {1, 2.1}});
  // 3a - b cancels up to rounding.
  const LaurentSeries three = LaurentSeries::constant(3, kDefaultWindow, ScalarMode::kApprox);
  EXPECT_TRUE((three * a - b).is_exact_zero());
}

// ---------------------------------------------------------------------------

class LaurentProperties : public ::testing::Test {
 protected:
  std::mt19937_64 rng{77};

  LaurentSeries random_series(std::size_t window, bool exact_only = false) {
    std::uniform_int_distribution<long> base(-4, 4), len(1, 7), num(-5, 5), den(1, 3);
    std::map<long, GaussianRational> terms;
    const long b = base(rng);
    const long n = len(rng);
    for (long k = 0; k < n; ++k) terms[b + k] = GaussianRational(mpq_class(num(rng), den(rng)), mpq_class(num(rng), den(rng)));
    terms[b] = GaussianRational(mpq_class(num(rng) == 0 ? 1 : 2, den(rng)), 1);
    std::optional<long> prec;
    if (!exact_only && std::uniform_int_distribution<int>(0, 2)(rng) == 0) prec = b + n + 2;
    return LaurentSeries::from_terms(terms, window, prec);
  }
};

TEST_F(LaurentProperties, OrderIsAdditive) {
  for (int it = 0; it < 300; ++it) {
    const LaurentSeries a = random_series(16), b = random_series(16);
    ASSERT_TRUE(a.ord() && b.ord());
    EXPECT_EQ((a * b).ord(), *a.ord() + *b.ord());
  }
}

TEST_F(LaurentProperties, DivisionRoundTrip) {
  for (int it = 0; it < 200; ++it) {
    const LaurentSeries a = random_series(16), b = random_series(16);
    const LaurentSeries q = divide(a, b);
    EXPECT_EQ(q.ord(), *a.ord() - *b.ord());
    const LaurentSeries back = q * b;
    const long known = std::min(back.precision().value_or(1000), a.precision().value_or(1000));
    ASSERT_GT(known, *a.ord());
    for (long e = *a.ord(); e < known; ++e) EXPECT_EQ(back.exact_coeff(e), a.exact_coeff(e));
  }
}

TEST_F(LaurentProperties, ComposeIsMultiplicative) {
  for (int it = 0; it < 60; ++it) {
    const poly::Polynomial g1 = testing::random_poly(rng, 2, 3, 3);
    const poly::Polynomial g2 = testing::random_poly(rng, 2, 3, 3);
    const SeriesVector p({random_series(24), random_series(24)});
    const LaurentSeries lhs = compose_poly(g1 * g2, p);
    const LaurentSeries rhs = compose_poly(g1, p) * compose_poly(g2, p);
    const long known = std::min(lhs.precision().value_or(1L << 40), rhs.precision().value_or(1L << 40));
    for (long e = -60; e < std::min(known, 60L); ++e) EXPECT_EQ(lhs.exact_coeff(e), rhs.exact_coeff(e));
    if (lhs.is_exact() && rhs.is_exact()) EXPECT_EQ(lhs, rhs);
  }
}

TEST_F(LaurentProperties, TruncationConsistency) {
  for (int it = 0; it < 60; ++it) {
    const poly::Polynomial g = testing::random_poly(rng, 2, 4, 4);
    const LaurentSeries a1 = random_series(8, true), a2 = random_series(8, true);
    const SeriesVector narrow({a1, a2});
    const SeriesVector wide({a1.with_window(16), a2.with_window(16)});
    const LaurentSeries small = divide(compose_poly(g, narrow) + S("1", 8), S("1 - t", 8));
    const LaurentSeries large = divide(compose_poly(g, wide) + S("1", 16), S("1 - t", 16)).with_window(8);
    EXPECT_EQ(small.ord(), large.ord());
    const long known = small.precision().value_or(1L << 40);
    EXPECT_LE(known, large.precision().value_or(1L << 40));
    for (long e = -80; e < std::min(known, 80L); ++e) EXPECT_EQ(small.exact_coeff(e), large.exact_coeff(e));
  }
}

}  // namespace
}  // namespace loj::laurent
