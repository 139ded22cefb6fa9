#include "polyring/gaussian_rational.hpp"

#include <cmath>

#include "errors.hpp"

namespace loj::poly {

namespace {

mpq_class exact_from_double(double v) {
  if (!std::isfinite(v)) throw DomainError("non-finite value cannot be made exact");
  mpq_class q;
  mpq_set_d(q.get_mpq_t(), v);
  return q;
}

long double to_long_double(const mpq_class& q) {
  // Split into a double head and the double-rounded remainder so the result
  // carries more than 53 bits when long double is wider.
  const double head = q.get_d();
  mpq_class rest = q - mpq_class(head);
  return static_cast<long double>(head) + static_cast<long double>(rest.get_d());
}

}  // namespace

GaussianRational GaussianRational::from_double(std::complex<double> z) {
  return {exact_from_double(z.real()), exact_from_double(z.imag())};
}

std::complex<long double> GaussianRational::to_complex_ld() const {
  return {to_long_double(re_), to_long_double(im_)};
}

GaussianRational& GaussianRational::operator*=(const GaussianRational& o) {
  if (is_real() && o.is_real()) {
    re_ *= o.re_;
    return *this;
  }
  mpq_class re = re_ * o.re_ - im_ * o.im_;
  mpq_class im = re_ * o.im_ + im_ * o.re_;
  re_ = std::move(re);
  im_ = std::move(im);
  return *this;
}

GaussianRational& GaussianRational::operator/=(const GaussianRational& o) {
  if (o.is_zero()) throw DomainError("division by zero");
  if (o.is_real()) {
    re_ /= o.re_;
    im_ /= o.re_;
    return *this;
  }
  const mpq_class d = o.norm();
  mpq_class re = (re_ * o.re_ + im_ * o.im_) / d;
  mpq_class im = (im_ * o.re_ - re_ * o.im_) / d;
  re_ = std::move(re);
  im_ = std::move(im);
  return *this;
}

std::string rational_to_string(const mpq_class& q) { return q.get_str(); }

std::string rational_to_fraction(const mpq_class& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

namespace {

// Imaginary part literal without sign: "i", "2i", "1/3*i".
std::string imag_literal(const mpq_class& magnitude) {
  if (magnitude == 1) return "i";
  if (magnitude.get_den() == 1) return magnitude.get_str() + "i";
  return magnitude.get_str() + "*i";
}

}  // namespace

std::string GaussianRational::to_string() const {
  if (is_real()) return rational_to_string(re_);
  const mpq_class mag = abs(im_);
  if (sgn(re_) == 0) return (sgn(im_) < 0 ? "-" : "") + imag_literal(mag);
  return "(" + rational_to_string(re_) + (sgn(im_) < 0 ? "-" : "+") + imag_literal(mag) + ")";
}

}  // namespace loj::poly
