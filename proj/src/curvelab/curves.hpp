#pragma once

#include <complex>
#include <optional>
#include <string>
#include <string_view>

#include <gmpxx.h>

#include "laurent/series.hpp"
#include "polyring/polynomial.hpp"

namespace loj::curve {

using laurent::LaurentSeries;
using laurent::SeriesVector;

/// Analytic curve p(t), t -> 0+, one Laurent series per coordinate.
struct Curve {
  SeriesVector coords;
  std::string label;

  std::size_t dim() const { return coords.size(); }
  std::size_t window() const { return coords.window(); }
  /// True when some component has negative order, i.e. |p(t)| -> infinity.
  bool escapes() const;
  std::string to_string() const { return coords.to_string(); }
};

/// "(t, -1/2*t^-1)" style literal: comma-separated series in t.
Curve parse_curve(std::string_view text, std::size_t window = laurent::kDefaultWindow);

/// (t^-q, t^n, 0), exact.
Curve psi_curve(int n, int q, std::size_t window = laurent::kDefaultWindow);

/// Minimum order over nonzero components. Throws DomainError when every
/// component is zero.
long curve_order(const Curve& p);

/// Component i is conj(dg/dx_i (p(t))).
SeriesVector grad_along(const poly::Polynomial& g, const Curve& p);

enum class LimitKind { kZero, kFinite, kInfinite, kUnknown };

const char* to_string(LimitKind kind);

/// How g(p(t)) behaves as t -> 0+.
struct ValueLimit {
  LimitKind kind = LimitKind::kUnknown;
  std::complex<double> value{};                       // meaningful for kZero / kFinite
  std::optional<poly::GaussianRational> exact_value;  // exact-mode series only

  bool finite() const { return kind == LimitKind::kZero || kind == LimitKind::kFinite; }
  std::string to_string() const;
};

ValueLimit classify_limit(const LaurentSeries& s);

/// Orders and the curve exponent L(g;p) = ord(grad g(p)) / ord(p).
struct CurveReport {
  long ord_p = 0;
  std::optional<long> ord_grad;  // empty when grad vanishes along p
  std::optional<mpq_class> L;
  std::optional<long> malgrange_sum;  // ord_p + ord_grad
  LaurentSeries value_series;         // g(p(t))
  ValueLimit value_limit;
  SeriesVector grad;
  bool grad_identically_zero = false;  // exactly, not only within the window
  bool grad_zero_within_window = false;
  bool grad_tends_to_zero = false;     // ord_grad > 0, or grad identically zero
  bool orders_certain = true;          // no truncated-zero component can undercut the minimum
};

CurveReport L_of(const poly::Polynomial& g, const Curve& p);

/// "s > 0 with a finite value limit" certifies that Malgrange's condition
/// fails at t0 = lim g(p(t)).
struct MalgrangeCertificate {
  CurveReport report;
  bool fails = false;
  ValueLimit t0;
  std::string verdict;  // "FAILS at t0 = 0" | "no certificate (s = -1)"
};

MalgrangeCertificate malgrange_certificate(const poly::Polynomial& g, const Curve& p);

/// d(t) = g(p) - <p, grad g(p)> with <u,v> = sum u_i conj(v_i). When grad -> 0
/// along p and d stays bounded, p witnesses that g is not quasitame.
struct QuasitameCertificate {
  CurveReport report;
  LaurentSeries discrepancy;
  std::optional<long> discrepancy_order;
  bool premise_met = false;
  bool discrepancy_bounded = false;
  bool not_quasitame = false;
  std::string verdict;
};

QuasitameCertificate quasitame_discrepancy(const poly::Polynomial& g, const Curve& p);

/// lambda*(t) = <grad, p> / <p, p> and r = grad - lambda* p. A nonzero r shows
/// p(t) lies outside M(g) for small t.
struct MsetResidual {
  LaurentSeries lambda;
  SeriesVector residual;
  std::optional<long> residual_order;  // empty when r vanishes
  bool residual_exactly_zero = false;
  bool avoids_mset = false;
  std::string verdict;
};

MsetResidual mset_residual(const poly::Polynomial& g, const Curve& p);

/// Leading-coefficient bookkeeping for the ansatz x = t^A, y = t^B + rho0 t^{B+D}
/// with A = -q, B = D = n, z solved from the second M(f) equation.
struct ContradictionTrace {
  int n = 0, q = 0;
  std::complex<double> rho0;
  long A = 0, B = 0, D = 0;
  long C = 0;                 // ord conj(df/dx (p))
  long ord_lambda = 0;        // expected C - A
  long ord_z = 0;             // expected B + A - C
  std::complex<double> lambda_leading;  // expected 6nq conj(rho0)
  std::complex<double> z_leading;       // expected -6 q^2 rho0
  bool relations_hold = false;          // nA + qB = 0, both order relations, B = C = D
  bool first_equations_hold = false;    // components 1 and 2 vanish identically
  long lhs_order = 0, rhs_order = 0;
  std::complex<double> lhs;             // leading coefficient of conj(df/dz (p))
  std::complex<double> rhs;             // leading coefficient of lambda * z
  double expected_rhs = 0;              // -36 n q^3 |rho0|^2
  bool contradiction = false;
  std::string verdict;
};

ContradictionTrace contradiction_trace(int n, int q, std::complex<double> rho0,
                                       std::size_t window = laurent::kDefaultWindow);

/// Stable "key = value" lines, one field per line.
std::string to_key_value(const CurveReport& r);

}  // namespace loj::curve
