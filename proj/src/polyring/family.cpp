#include "polyring/family.hpp"

#include <cmath>

#include "errors.hpp"

namespace loj::poly {

namespace {

const VarNames& xyz() {
  static const VarNames names{"x", "y", "z"};
  return names;
}

void require_parameters(int n, int q) {
  if (n < 1) throw DomainError("n must be ≥ 1");
  if (q < 1) throw DomainError("q must be ≥ 1");
}

Exponents ex(long a, long b, long c) {
  return {static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b),
          static_cast<std::uint32_t>(c)};
}

Polynomial mono(long a, long b, long c, GaussianRational coef) {
  return Polynomial::monomial(xyz(), ex(a, b, c), std::move(coef));
}

}  // namespace

Polynomial family(int n, int q) { return family(n, q, FamilyCoefficients{}); }

Polynomial family(int n, int q, const FamilyCoefficients& c) {
  require_parameters(n, q);
  Polynomial f(xyz());
  f.add_term(ex(1, 0, 0), c.linear);
  f.add_term(ex(2 * n + 1, 2 * q, 0), c.middle);
  f.add_term(ex(3 * n + 1, 3 * q, 0), c.top);
  f.add_term(ex(0, 1, 1), c.yz);
  return f;
}

Polynomial euler_identity_residual(int n, int q) { return euler_identity_residual(family(n, q), n, q); }

Polynomial euler_identity_residual(const Polynomial& f, int n, int q) {
  require_parameters(n, q);
  if (f.varcount() != 3) throw DimensionError("family members have three variables");
  const Polynomial y = Polynomial::variable(f.vars(), 1);
  const Polynomial x = Polynomial::variable(f.vars(), 0);
  Polynomial bracket = Polynomial::constant(f.vars(), 1);
  bracket += mono(2 * n, 2 * q, 0, 6L * q - 3);
  bracket -= mono(3 * n, 3 * q, 0, 6L * q - 2);
  return f - (y * partial(f, 1) + x * bracket);
}

AutomorphismReport verify_automorphism(int n, int q) { return verify_automorphism(family(n, q), n, q); }

AutomorphismReport verify_automorphism(const Polynomial& f, int n, int q) {
  require_parameters(n, q);
  if (f.varcount() != 3) throw DimensionError("family members have three variables");
  const VarNames& v = f.vars();
  const Polynomial x = Polynomial::variable(v, 0);
  const Polynomial y = Polynomial::variable(v, 1);
  const Polynomial z = Polynomial::variable(v, 2);
  // The part of f that Z absorbs, divided by y.
  const Polynomial shift = mono(2 * n + 1, 2 * q - 1, 0, -3) + mono(3 * n + 1, 3 * q - 1, 0, 2);

  const PolyMap b{{x, y, z + shift}};
  const PolyMap b_inv{{x, y, z - shift}};
  const PolyMap a{{x + y * z, y, z}};
  const PolyMap a_inv{{x - y * z, y, z}};
  const PolyMap id = PolyMap::identity(v);

  AutomorphismReport r{.in_z_coordinates = compose(f, b_inv), .residual = Polynomial(v), .forward = {}, .inverse = {}};
  r.z_substitution_ok = f == x + y * b.components[2];
  r.forward = compose(a, b);
  r.inverse = compose(b_inv, a_inv);
  r.residual = f - r.forward.components[0];
  r.first_component_ok = r.residual.is_zero();
  // Associativity keeps the intermediate expansions small: (P o B^-1) o A^-1
  // and (Q o A) o B.
  const PolyMap pq = compose(compose(r.forward, b_inv), a_inv);
  const PolyMap qp = compose(compose(r.inverse, a), b);
  r.right_inverse_ok = pq.components == id.components;
  r.left_inverse_ok = qp.components == id.components;
  r.pulls_back_to_x = compose(compose(f, b_inv), a_inv) == x;
  return r;
}

const char* to_string(CubicKind kind) { return kind == CubicKind::kEq4 ? "eq4" : "counterpart"; }

CubicReport cubic_root_check(CubicKind kind, int parameter) {
  if (parameter < 1) throw DomainError("cubic parameter must be >= 1");
  const VarNames tv{"T"};
  const long k = parameter;
  // Coefficients c0 + c2 T^2 + c3 T^3.
  const GaussianRational c0 = 1;
  const GaussianRational c2 = kind == CubicKind::kEq4 ? -(6 * k + 3) : 6 * k - 3;
  const GaussianRational c3 = kind == CubicKind::kEq4 ? 6 * k + 2 : -(6 * k - 2);

  CubicReport r;
  r.kind = kind;
  r.parameter = parameter;
  r.cubic = Polynomial(tv);
  r.cubic.add_term({0}, c0);
  r.cubic.add_term({2}, c2);
  r.cubic.add_term({3}, c3);
  r.value_at_one = c0 + c2 + c3;
  r.one_is_root = r.value_at_one.is_zero();

  // Synthetic division by (T - 1): dense coefficients high to low.
  const GaussianRational dense[4] = {c3, c2, GaussianRational(0), c0};
  GaussianRational q[3];
  GaussianRational carry = 0;
  for (int j = 0; j < 3; ++j) {
    carry = dense[j] + carry;
    q[j] = carry;
  }
  r.remainder = dense[3] + carry;
  r.quadratic = Polynomial(tv);
  r.quadratic.add_term({2}, q[0]);
  r.quadratic.add_term({1}, q[1]);
  r.quadratic.add_term({0}, q[2]);

  // Roots of q0 T^2 + q1 T + q2, cancellation-free form.
  using C = std::complex<double>;
  const C qa = q[0].to_complex(), qb = q[1].to_complex(), qc = q[2].to_complex();
  const C disc = std::sqrt(qb * qb - 4.0 * qa * qc);
  const C w = std::real(std::conj(qb) * disc) >= 0 ? -(qb + disc) / 2.0 : -(qb - disc) / 2.0;
  if (std::abs(w) > 0) {
    r.quadratic_roots = {w / qa, qc / w};
  } else {
    r.quadratic_roots = {C(0), C(0)};
  }
  for (const C& root : r.quadratic_roots) {
    const C pt[] = {root};
    r.max_root_residual = std::max(r.max_root_residual, std::abs(eval(r.cubic, pt)));
  }
  return r;
}

}  // namespace loj::poly
