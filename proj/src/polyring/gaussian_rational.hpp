#pragma once

#include <gmpxx.h>

#include <complex>
#include <string>

namespace loj::poly {

/// Exact complex number re + im*i with rational parts. mpq_class keeps both
/// parts canonical (lowest terms, positive denominator) after every operation.
class GaussianRational {
 public:
  GaussianRational() = default;
  GaussianRational(long value) : re_(value) {}  // NOLINT(google-explicit-constructor)
  GaussianRational(mpq_class re, mpq_class im = 0) : re_(std::move(re)), im_(std::move(im)) {
    re_.canonicalize();
    im_.canonicalize();
  }

  /// Exact conversion; every finite double is a dyadic rational.
  static GaussianRational from_double(std::complex<double> z);

  const mpq_class& re() const noexcept { return re_; }
  const mpq_class& im() const noexcept { return im_; }

  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  bool is_real() const { return sgn(im_) == 0; }
  bool is_one() const { return re_ == 1 && sgn(im_) == 0; }

  GaussianRational conj() const { return {re_, -im_}; }
  /// |z|^2, exact.
  mpq_class norm() const { return re_ * re_ + im_ * im_; }

  std::complex<double> to_complex() const { return {re_.get_d(), im_.get_d()}; }
  std::complex<long double> to_complex_ld() const;

  GaussianRational& operator+=(const GaussianRational& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
  }
  GaussianRational& operator-=(const GaussianRational& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
  }
  GaussianRational& operator*=(const GaussianRational& o);
  GaussianRational& operator/=(const GaussianRational& o);

  friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
  friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
  friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
  friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }
  GaussianRational operator-() const { return {-re_, -im_}; }

  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }

  /// Canonical text: "3", "-1/2", "2i", "1/3*i", "(1+2i)", "(1/2-3/4*i)".
  /// Non-real values with a nonzero real part are parenthesised so the
  /// literal can be used as a factor.
  std::string to_string() const;

 private:
  mpq_class re_{0};
  mpq_class im_{0};
};

/// Text of a rational in "p/q" form ("3" when the denominator is 1).
std::string rational_to_string(const mpq_class& q);

/// A rational always written with a denominator ("-1/1"), for reporting exact
/// ratios such as L(g;p).
std::string rational_to_fraction(const mpq_class& q);

}  // namespace loj::poly
