#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "polyring/gaussian_rational.hpp"
#include "polyring/polynomial.hpp"

namespace loj::laurent {

using poly::GaussianRational;

enum class ScalarMode { kExact, kApprox };

inline constexpr std::size_t kDefaultWindow = 64;

/// Coefficients whose magnitude is below this fraction of the magnitude of
/// the products that formed them are flushed to zero in approximate mode.
inline constexpr double kApproxFlush = 1e-13;

/// Truncated Laurent series in a real parameter t -> 0+:
///
///   t^base * (c_0 + c_1 t + ... + c_{len-1} t^{len-1}) + O(t^precision)
///
/// At most `window` coefficients are kept, counted from the normalized base
/// (c_0 != 0). A series whose terms all fit in the window and were never
/// truncated has no O() term and is exact. The zero series is either exactly
/// zero or zero within the window (an O(t^k) remainder).
class LaurentSeries {
 public:
  using ExactCoeffs = std::vector<GaussianRational>;
  using ApproxCoeffs = std::vector<std::complex<double>>;

  /// Exact zero.
  explicit LaurentSeries(std::size_t window = kDefaultWindow, ScalarMode mode = ScalarMode::kExact);

  static LaurentSeries constant(const GaussianRational& c, std::size_t window = kDefaultWindow,
                                ScalarMode mode = ScalarMode::kExact);
  static LaurentSeries monomial(const GaussianRational& c, long exponent,
                                std::size_t window = kDefaultWindow,
                                ScalarMode mode = ScalarMode::kExact);
  static LaurentSeries monomial(std::complex<double> c, long exponent,
                                std::size_t window = kDefaultWindow);
  /// Terms keyed by exponent; `precision` adds an O(t^precision) remainder.
  static LaurentSeries from_terms(const std::map<long, GaussianRational>& terms,
                                  std::size_t window = kDefaultWindow,
                                  std::optional<long> precision = std::nullopt,
                                  ScalarMode mode = ScalarMode::kExact);
  static LaurentSeries from_terms(const std::map<long, std::complex<double>>& terms,
                                  std::size_t window = kDefaultWindow,
                                  std::optional<long> precision = std::nullopt);

  ScalarMode mode() const noexcept { return mode_; }
  std::size_t window() const noexcept { return window_; }
  bool is_zero() const noexcept { return length() == 0; }
  bool is_exact_zero() const noexcept { return is_zero() && !precision_; }
  bool zero_within_window() const noexcept { return is_zero() && precision_.has_value(); }
  bool is_exact() const noexcept { return !precision_.has_value(); }
  /// Absolute exponent of the O() remainder, empty when exact.
  std::optional<long> precision() const noexcept { return precision_; }
  /// Normalized lowest exponent; empty for the zero series.
  std::optional<long> ord() const;
  std::size_t length() const noexcept;

  /// Coefficient of t^exponent (zero outside the stored range). The exact
  /// accessor requires exact mode; the complex one works in both.
  GaussianRational exact_coeff(long exponent) const;
  std::complex<double> coeff(long exponent) const;
  /// Coefficient at ord(); requires a nonzero series.
  std::complex<double> leading() const;
  GaussianRational exact_leading() const;

  const ExactCoeffs& exact_coeffs() const { return std::get<ExactCoeffs>(coeffs_); }
  const ApproxCoeffs& approx_coeffs() const { return std::get<ApproxCoeffs>(coeffs_); }

  /// Same series with a (smaller or larger) window; shrinking truncates.
  LaurentSeries with_window(std::size_t window) const;
  /// Converts exact coefficients to complex doubles.
  LaurentSeries to_approx() const;

  /// "t^-3*(1 + 2*t + (1+i)*t^2)" with an "O(t^k)" term when truncated.
  std::string to_string() const;

  friend bool operator==(const LaurentSeries& a, const LaurentSeries& b);

 private:
  template <class S>
  friend struct SeriesOps;

  ScalarMode mode_;
  std::size_t window_;
  long base_ = 0;
  std::variant<ExactCoeffs, ApproxCoeffs> coeffs_;
  std::optional<long> precision_;
};

LaurentSeries operator+(const LaurentSeries& a, const LaurentSeries& b);
LaurentSeries operator-(const LaurentSeries& a, const LaurentSeries& b);
LaurentSeries operator*(const LaurentSeries& a, const LaurentSeries& b);
LaurentSeries operator-(const LaurentSeries& a);
LaurentSeries scale(const LaurentSeries& a, const GaussianRational& c);

LaurentSeries pow(const LaurentSeries& a, unsigned k);
/// a / b with ord = ord(a) - ord(b). Throws DomainError when b is zero.
LaurentSeries divide(const LaurentSeries& a, const LaurentSeries& b);
/// Coefficientwise complex conjugate (t is real).
LaurentSeries conj(const LaurentSeries& a);

/// Parses a series literal in the variable t, e.g. "t^-3*(1 + 2*t + (1+1i)*t^2)"
/// or "1 + t + O(t^5)".
LaurentSeries parse_series(std::string_view text, std::size_t window = kDefaultWindow);

/// Vector of series sharing window and scalar mode.
class SeriesVector {
 public:
  SeriesVector() = default;
  explicit SeriesVector(std::vector<LaurentSeries> components);

  std::size_t size() const noexcept { return components_.size(); }
  const LaurentSeries& operator[](std::size_t k) const { return components_[k]; }
  const std::vector<LaurentSeries>& components() const noexcept { return components_; }
  std::size_t window() const;
  ScalarMode mode() const;
  /// min over nonzero components; empty when every component is zero.
  std::optional<long> ord() const;
  /// Hermitian product sum_k a_k * conj(b_k).
  friend LaurentSeries hermitian(const SeriesVector& a, const SeriesVector& b);

  std::string to_string() const;

 private:
  std::vector<LaurentSeries> components_;
};

/// sum a_i conj(b_i).
LaurentSeries hermitian(const SeriesVector& a, const SeriesVector& b);
/// g(p(t)), truncated to the window of p.
LaurentSeries compose_poly(const poly::Polynomial& g, const SeriesVector& p);

}  // namespace loj::laurent
