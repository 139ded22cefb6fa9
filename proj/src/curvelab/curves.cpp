#include "curvelab/curves.hpp"

#include <cmath>
#include <sstream>

#include "errors.hpp"
#include "polyring/family.hpp"

namespace loj::curve {

using laurent::ScalarMode;
using poly::GaussianRational;
using poly::Polynomial;

bool Curve::escapes() const {
  const auto o = coords.ord();
  return o && *o < 0;
}

Curve parse_curve(std::string_view text, std::size_t window) {
  std::size_t lo = 0, hi = text.size();
  while (lo < hi && std::isspace(static_cast<unsigned char>(text[lo]))) ++lo;
  while (hi > lo && std::isspace(static_cast<unsigned char>(text[hi - 1]))) --hi;
  if (lo >= hi || text[lo] != '(' || text[hi - 1] != ')')
    throw ParseError("curve literal must be a parenthesised, comma-separated list", lo);
  std::vector<LaurentSeries> parts;
  int depth = 0;
  std::size_t start = lo + 1;
  for (std::size_t k = lo + 1; k < hi; ++k) {
    const char c = text[k];
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if ((c == ',' && depth == 0) || k == hi - 1) {
      if (depth < 0 && k != hi - 1) throw ParseError("unbalanced parentheses", k);
      const std::string_view piece = text.substr(start, k - start);
      try {
        parts.push_back(laurent::parse_series(piece, window));
      } catch (const ParseError& e) {
        throw ParseError("curve component " + std::to_string(parts.size() + 1) + ": " + e.what(),
                         start + e.position());
      }
      start = k + 1;
    }
  }
  if (depth != -1) throw ParseError("unbalanced parentheses", hi);
  return Curve{SeriesVector(std::move(parts)), std::string(text.substr(lo, hi - lo))};
}

Curve psi_curve(int n, int q, std::size_t window) {
  if (n < 1 || q < 1) throw DomainError("psi curve needs n, q >= 1");
  std::vector<LaurentSeries> c{LaurentSeries::monomial(GaussianRational(1), -q, window),
                               LaurentSeries::monomial(GaussianRational(1), n, window),
                               LaurentSeries(window)};
  return Curve{SeriesVector(std::move(c)),
               "psi(" + std::to_string(n) + "," + std::to_string(q) + ") = (t^-" + std::to_string(q) +
                   ", t^" + std::to_string(n) + ", 0)"};
}

long curve_order(const Curve& p) {
  const auto o = p.coords.ord();
  if (!o) throw DomainError("curve has no nonzero component");
  return *o;
}

SeriesVector grad_along(const Polynomial& g, const Curve& p) {
  if (p.dim() != g.varcount())
    throw DimensionError("curve has " + std::to_string(p.dim()) + " components, polynomial has " +
                         std::to_string(g.varcount()) + " variables");
  std::vector<LaurentSeries> out;
  for (std::size_t k = 0; k < g.varcount(); ++k)
    out.push_back(laurent::conj(laurent::compose_poly(poly::partial(g, k), p.coords)));
  return SeriesVector(std::move(out));
}

const char* to_string(LimitKind kind) {
  switch (kind) {
    case LimitKind::kZero: return "zero";
    case LimitKind::kFinite: return "finite";
    case LimitKind::kInfinite: return "infinite";
    case LimitKind::kUnknown: break;
  }
  return "unknown";
}

std::string ValueLimit::to_string() const {
  switch (kind) {
    case LimitKind::kZero: return "0";
    case LimitKind::kFinite: {
      if (exact_value) return exact_value->to_string();
      std::ostringstream os;
      os.precision(17);
      os << value.real();
      if (value.imag() != 0) os << (value.imag() < 0 ? "-" : "+") << std::fabs(value.imag()) << "*i";
      return os.str();
    }
    case LimitKind::kInfinite: return "infinity";
    case LimitKind::kUnknown: break;
  }
  return "unknown";
}

ValueLimit classify_limit(const LaurentSeries& s) {
  ValueLimit v;
  if (s.is_zero()) {
    // Exact zero, or O(t^k) with k > 0: both tend to 0.
    if (s.is_exact_zero() || *s.precision() > 0) {
      v.kind = LimitKind::kZero;
      if (s.mode() == ScalarMode::kExact) v.exact_value = GaussianRational(0);
    }
    return v;
  }
  const long o = *s.ord();
  if (o > 0) {
    v.kind = LimitKind::kZero;
    if (s.mode() == ScalarMode::kExact) v.exact_value = GaussianRational(0);
  } else if (o == 0) {
    v.kind = LimitKind::kFinite;
    v.value = s.leading();
    if (s.mode() == ScalarMode::kExact) v.exact_value = s.exact_leading();
  } else {
    v.kind = LimitKind::kInfinite;
  }
  return v;
}

namespace {

void require_escaping(const Curve& p) {
  if (!p.escapes()) throw DomainError("curve does not escape to infinity (no component of negative order)");
}

}  // namespace

CurveReport L_of(const Polynomial& g, const Curve& p) {
  require_escaping(p);
  CurveReport r;
  r.ord_p = curve_order(p);
  r.grad = grad_along(g, p);
  r.value_series = laurent::compose_poly(g, p.coords);
  r.value_limit = classify_limit(r.value_series);
  r.ord_grad = r.grad.ord();
  r.grad_identically_zero = true;
  for (const auto& c : r.grad.components()) {
    if (!c.is_exact_zero()) r.grad_identically_zero = false;
    // A truncated zero component hides its order somewhere at or above its
    // precision; the minimum is only certain if that cannot undercut it.
    if (c.zero_within_window() && (!r.ord_grad || *c.precision() <= *r.ord_grad)) r.orders_certain = false;
  }
  r.grad_zero_within_window = !r.ord_grad && !r.grad_identically_zero;
  if (r.ord_grad) {
    r.L = mpq_class(*r.ord_grad, r.ord_p);
    r.L->canonicalize();
    r.malgrange_sum = r.ord_p + *r.ord_grad;
    r.grad_tends_to_zero = *r.ord_grad > 0;
  } else {
    r.grad_tends_to_zero = r.grad_identically_zero ||
                           std::all_of(r.grad.components().begin(), r.grad.components().end(),
                                       [](const LaurentSeries& c) { return c.is_exact_zero() || *c.precision() > 0; });
  }
  return r;
}

MalgrangeCertificate malgrange_certificate(const Polynomial& g, const Curve& p) {
  MalgrangeCertificate c;
  c.report = L_of(g, p);
  c.t0 = c.report.value_limit;
  const CurveReport& r = c.report;
  // grad identically zero makes |p|*|grad| vanish outright (s = +infinity).
  const bool product_vanishes = r.grad_identically_zero || (r.malgrange_sum && *r.malgrange_sum > 0);
  c.fails = product_vanishes && r.orders_certain && c.t0.finite();
  const std::string s = r.malgrange_sum ? std::to_string(*r.malgrange_sum) : std::string("+inf");
  if (c.fails) {
    c.verdict = "FAILS at t0 = " + c.t0.to_string();
  } else {
    c.verdict = "no certificate (s = " + s + ")";
  }
  return c;
}

QuasitameCertificate quasitame_discrepancy(const Polynomial& g, const Curve& p) {
  QuasitameCertificate c;
  c.report = L_of(g, p);
  const CurveReport& r = c.report;
  c.discrepancy = r.value_series - laurent::hermitian(p.coords, r.grad);
  c.discrepancy_order = c.discrepancy.ord();
  c.premise_met = r.grad_tends_to_zero && r.orders_certain;
  if (c.discrepancy.is_exact_zero()) {
    c.discrepancy_bounded = true;
  } else if (c.discrepancy.is_zero()) {
    c.discrepancy_bounded = *c.discrepancy.precision() >= 0;
  } else {
    c.discrepancy_bounded = *c.discrepancy_order >= 0;
  }
  c.not_quasitame = c.premise_met && c.discrepancy_bounded;
  if (c.not_quasitame) {
    c.verdict = "NOT quasitame, witness " + p.label;
  } else if (!c.premise_met) {
    c.verdict = "premise not met (grad does not tend to 0 along the curve)";
  } else {
    c.verdict = "no certificate (discrepancy unbounded)";
  }
  return c;
}

MsetResidual mset_residual(const Polynomial& g, const Curve& p) {
  require_escaping(p);
  MsetResidual m;
  const SeriesVector grad = grad_along(g, p);
  const LaurentSeries pp = laurent::hermitian(p.coords, p.coords);
  m.lambda = laurent::divide(laurent::hermitian(grad, p.coords), pp);
  std::vector<LaurentSeries> r;
  for (std::size_t k = 0; k < p.dim(); ++k) r.push_back(grad[k] - m.lambda * p.coords[k]);
  m.residual = SeriesVector(std::move(r));
  m.residual_order = m.residual.ord();
  m.residual_exactly_zero = std::all_of(m.residual.components().begin(), m.residual.components().end(),
                                        [](const LaurentSeries& c) { return c.is_exact_zero(); });
  m.avoids_mset = m.residual_order.has_value();
  if (m.avoids_mset) {
    m.verdict = "curve avoids M(g) (ord r = " + std::to_string(*m.residual_order) + ")";
  } else if (m.residual_exactly_zero) {
    m.verdict = "curve lies in M(g)";
  } else {
    m.verdict = "residual vanishes within window";
  }
  return m;
}

ContradictionTrace contradiction_trace(int n, int q, std::complex<double> rho0, std::size_t window) {
  if (n < 1 || q < 1) throw DomainError("contradiction trace needs n, q >= 1");
  if (rho0 == std::complex<double>(0)) throw DomainError("rho0 must be nonzero");
  if (!std::isfinite(rho0.real()) || !std::isfinite(rho0.imag())) throw DomainError("rho0 must be finite");
  using laurent::compose_poly;
  using laurent::conj;
  const ScalarMode approx = ScalarMode::kApprox;

  ContradictionTrace tr;
  tr.n = n;
  tr.q = q;
  tr.rho0 = rho0;
  tr.A = -q;
  tr.B = n;
  tr.D = n;

  const Polynomial f = poly::family(n, q);
  const Polynomial fx = poly::partial(f, 0), fy = poly::partial(f, 1), fz = poly::partial(f, 2);
  // df/dx is free of z and df/dy = h(x,y) + z.
  if (!poly::partial(fx, 2).is_zero() || poly::partial(fy, 2) != Polynomial::constant(f.vars(), 1))
    throw Error("family derivative structure changed");

  const LaurentSeries x = LaurentSeries::monomial(std::complex<double>(1), tr.A, window);
  const LaurentSeries y = LaurentSeries::from_terms(
      std::map<long, std::complex<double>>{{tr.B, 1.0}, {tr.B + tr.D, rho0}}, window);
  const LaurentSeries zero(window, approx);
  const SeriesVector xy0({x, y, zero});

  const LaurentSeries fx_bar = conj(compose_poly(fx, xy0));
  const LaurentSeries lambda = laurent::divide(fx_bar, x);
  const LaurentSeries h = compose_poly(fy, xy0);
  const LaurentSeries z = conj(lambda * y) - h;
  const SeriesVector p({x, y, z});

  const LaurentSeries eq1 = conj(compose_poly(fx, p)) - lambda * x;
  const LaurentSeries eq2 = conj(compose_poly(fy, p)) - lambda * y;
  tr.first_equations_hold = eq1.is_zero() && eq2.is_zero();

  if (fx_bar.is_zero() || lambda.is_zero() || z.is_zero())
    throw NumericError("ansatz produced a vanishing series");
  tr.C = *fx_bar.ord();
  tr.ord_lambda = *lambda.ord();
  tr.ord_z = *z.ord();
  tr.lambda_leading = lambda.leading();
  tr.z_leading = z.leading();
  tr.relations_hold = n * tr.A + q * tr.B == 0 && tr.ord_lambda == tr.C - tr.A &&
                      tr.ord_z == tr.B + tr.A - tr.C && tr.B == tr.C && tr.C == tr.D;

  const LaurentSeries lhs = conj(compose_poly(fz, p));
  const LaurentSeries rhs = lambda * z;
  tr.lhs_order = *lhs.ord();
  tr.rhs_order = *rhs.ord();
  tr.lhs = lhs.leading();
  tr.rhs = rhs.leading();
  tr.expected_rhs = -36.0 * n * std::pow(static_cast<double>(q), 3) * std::norm(rho0);

  // Leading orders agree, and a positive real cannot equal a negative real.
  const bool lhs_positive = tr.lhs.real() > 0 && std::fabs(tr.lhs.imag()) <= 1e-12 * std::abs(tr.lhs);
  const bool rhs_negative = tr.rhs.real() < 0 && std::fabs(tr.rhs.imag()) <= 1e-12 * std::abs(tr.rhs);
  tr.contradiction = tr.lhs_order == tr.rhs_order && lhs_positive && rhs_negative;
  std::ostringstream os;
  os.precision(12);
  os << "leading coefficients: " << tr.lhs.real() << " = " << tr.rhs.real();
  tr.verdict = tr.contradiction ? "contradiction: no M(g) escape curve of this form (" + os.str() + ")"
                                : "no contradiction (" + os.str() + ")";
  return tr;
}

std::string to_key_value(const CurveReport& r) {
  std::ostringstream os;
  os << "ord_p = " << r.ord_p << "\n";
  os << "ord_grad = " << (r.ord_grad ? std::to_string(*r.ord_grad) : std::string("zero")) << "\n";
  os << "L = " << (r.L ? poly::rational_to_fraction(*r.L) : std::string("undefined")) << "\n";
  os << "malgrange_sum = " << (r.malgrange_sum ? std::to_string(*r.malgrange_sum) : std::string("undefined"))
     << "\n";
  os << "value_series = " << r.value_series.to_string() << "\n";
  os << "value_limit = " << to_string(r.value_limit.kind) << "\n";
  if (r.value_limit.finite()) os << "value_limit_value = " << r.value_limit.to_string() << "\n";
  os << "grad = " << r.grad.to_string() << "\n";
  os << "grad_identically_zero = " << (r.grad_identically_zero ? "true" : "false") << "\n";
  os << "grad_tends_to_zero = " << (r.grad_tends_to_zero ? "true" : "false") << "\n";
  os << "orders_certain = " << (r.orders_certain ? "true" : "false") << "\n";
  return os.str();
}

}  // namespace loj::curve
