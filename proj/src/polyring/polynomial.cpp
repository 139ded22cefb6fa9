#include "polyring/polynomial.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"
#include "polyring/expr_parser.hpp"

namespace loj::poly {

VarNames default_var_names(std::size_t varcount) {
  static const char* const kShort[] = {"x", "y", "z"};
  VarNames names;
  for (std::size_t k = 0; k < varcount; ++k)
    names.push_back(varcount <= 3 ? kShort[k] : "x" + std::to_string(k + 1));
  return names;
}

Polynomial::Polynomial(VarNames vars) : vars_(std::make_shared<const VarNames>(std::move(vars))) {
  if (vars_->empty()) throw DimensionError("polynomial needs at least one variable");
}

Polynomial Polynomial::constant(VarNames vars, GaussianRational c) {
  Polynomial p(std::move(vars));
  p.add_term(Exponents(p.varcount(), 0), c);
  return p;
}

Polynomial Polynomial::variable(VarNames vars, std::size_t index) {
  Polynomial p(std::move(vars));
  if (index >= p.varcount()) throw DimensionError("variable index out of range");
  Exponents e(p.varcount(), 0);
  e[index] = 1;
  p.add_term(e, 1);
  return p;
}

Polynomial Polynomial::monomial(VarNames vars, Exponents exps, GaussianRational c) {
  Polynomial p(std::move(vars));
  if (exps.size() != p.varcount()) throw DimensionError("monomial length differs from variable count");
  p.add_term(exps, c);
  return p;
}

bool Polynomial::is_constant() const {
  return terms_.empty() ||
         (terms_.size() == 1 &&
          std::all_of(terms_.begin()->first.begin(), terms_.begin()->first.end(),
                      [](std::uint32_t e) { return e == 0; }));
}

std::uint32_t Polynomial::total_degree() const {
  std::uint32_t best = 0;
  for (const auto& [e, c] : terms_) {
    std::uint32_t d = 0;
    for (auto k : e) d += k;
    best = std::max(best, d);
  }
  return best;
}

GaussianRational Polynomial::coefficient(const Exponents& exps) const {
  const auto it = terms_.find(exps);
  return it == terms_.end() ? GaussianRational() : it->second;
}

void Polynomial::add_term(const Exponents& exps, const GaussianRational& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(exps, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

void Polynomial::require_same_ring(const Polynomial& o) const {
  if (varcount() != o.varcount())
    throw DimensionError("variable count mismatch: " + std::to_string(varcount()) + " vs " +
                         std::to_string(o.varcount()));
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  require_same_ring(o);
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  require_same_ring(o);
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(const GaussianRational& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, v] : terms_) v *= c;
  return *this;
}

Polynomial Polynomial::operator-() const {
  Polynomial out = *this;
  for (auto& [e, v] : out.terms_) v = -v;
  return out;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  a.require_same_ring(b);
  Polynomial out(a.vars());
  Exponents e(a.varcount());
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      for (std::size_t k = 0; k < e.size(); ++k) e[k] = ea[k] + eb[k];
      out.add_term(e, ca * cb);
    }
  }
  return out;
}

Polynomial pow(const Polynomial& a, unsigned k) {
  Polynomial result = Polynomial::constant(a.vars(), 1);
  Polynomial base = a;
  while (k > 0) {
    if (k & 1U) result = result * base;
    k >>= 1U;
    if (k > 0) base = base * base;
  }
  return result;
}

namespace {

std::string monomial_text(const Exponents& e, const VarNames& vars) {
  std::string out;
  for (std::size_t k = 0; k < e.size(); ++k) {
    if (e[k] == 0) continue;
    if (!out.empty()) out += "*";
    out += vars[k];
    if (e[k] != 1) out += "^" + std::to_string(e[k]);
  }
  return out;
}

bool leads_negative(const GaussianRational& c) {
  return sgn(c.re()) < 0 || (sgn(c.re()) == 0 && sgn(c.im()) < 0);
}

}  // namespace

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    const bool negative = leads_negative(c);
    const GaussianRational mag = negative ? -c : c;
    if (first) {
      if (negative) out += "-";
    } else {
      out += negative ? " - " : " + ";
    }
    first = false;
    const std::string mono = monomial_text(e, vars());
    if (mono.empty()) {
      out += mag.to_string();
    } else if (mag.is_one()) {
      out += mono;
    } else {
      out += mag.to_string() + "*" + mono;
    }
  }
  return out;
}

Polynomial partial(const Polynomial& g, std::size_t index) {
  if (index >= g.varcount())
    throw DimensionError("partial derivative index " + std::to_string(index) + " out of range");
  Polynomial out(g.vars());
  for (const auto& [e, c] : g.terms()) {
    if (e[index] == 0) continue;
    Exponents d = e;
    d[index] -= 1;
    out.add_term(d, c * GaussianRational(static_cast<long>(e[index])));
  }
  return out;
}

std::vector<Polynomial> gradient(const Polynomial& g) {
  std::vector<Polynomial> out;
  out.reserve(g.varcount());
  for (std::size_t k = 0; k < g.varcount(); ++k) out.push_back(partial(g, k));
  return out;
}

PolyMap PolyMap::identity(const VarNames& vars) {
  PolyMap m;
  for (std::size_t k = 0; k < vars.size(); ++k) m.components.push_back(Polynomial::variable(vars, k));
  return m;
}

std::size_t PolyMap::source_dim() const {
  if (components.empty()) throw DimensionError("empty polynomial map");
  return components.front().varcount();
}

void PolyMap::validate() const {
  const std::size_t m = source_dim();
  for (const auto& c : components)
    if (c.varcount() != m) throw DimensionError("polynomial map components differ in variable count");
}

Polynomial compose(const Polynomial& g, const PolyMap& s) {
  s.validate();
  if (s.target_dim() != g.varcount())
    throw DimensionError("substitution has " + std::to_string(s.target_dim()) +
                         " components for " + std::to_string(g.varcount()) + " variables");
  const VarNames& target_vars = s.components.front().vars();
  // powers[k][j] = s_k^j, filled on demand.
  std::vector<std::vector<Polynomial>> powers(g.varcount());
  auto power_of = [&](std::size_t k, std::uint32_t j) -> const Polynomial& {
    auto& cache = powers[k];
    if (cache.empty()) cache.push_back(Polynomial::constant(target_vars, 1));
    while (cache.size() <= j) cache.push_back(cache.back() * s.components[k]);
    return cache[j];
  };
  Polynomial out(target_vars);
  for (const auto& [e, c] : g.terms()) {
    Polynomial term = Polynomial::constant(target_vars, c);
    for (std::size_t k = 0; k < e.size(); ++k)
      if (e[k] != 0) term = term * power_of(k, e[k]);
    out += term;
  }
  return out;
}

PolyMap compose(const PolyMap& g, const PolyMap& s) {
  PolyMap out;
  for (const auto& c : g.components) out.components.push_back(compose(c, s));
  return out;
}

namespace {

void require_point(const Polynomial& g, std::span<const std::complex<double>> x) {
  if (x.size() != g.varcount())
    throw DimensionError("point has " + std::to_string(x.size()) + " coordinates, polynomial has " +
                         std::to_string(g.varcount()) + " variables");
  for (const auto& v : x)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw DomainError("point has a non-finite coordinate");
}

}  // namespace

std::complex<double> eval(const Polynomial& g, std::span<const std::complex<double>> x) {
  require_point(g, x);
  using C = std::complex<long double>;
  std::vector<std::vector<C>> cache(x.size());
  auto power_of = [&](std::size_t k, std::uint32_t j) -> const C& {
    auto& pk = cache[k];
    if (pk.empty()) pk.push_back(C(1));
    while (pk.size() <= j) pk.push_back(pk.back() * C(x[k]));
    return pk[j];
  };
  // Neumaier-compensated sum of the extended-precision terms.
  long double sre = 0, sim = 0, cre = 0, cim = 0;
  auto add = [](long double& sum, long double& comp, long double v) {
    const long double t = sum + v;
    if (std::fabs(sum) >= std::fabs(v)) {
      comp += (sum - t) + v;
    } else {
      comp += (v - t) + sum;
    }
    sum = t;
  };
  for (const auto& [e, c] : g.terms()) {
    C term = c.to_complex_ld();
    for (std::size_t k = 0; k < e.size(); ++k)
      if (e[k] != 0) term *= power_of(k, e[k]);
    add(sre, cre, term.real());
    add(sim, cim, term.imag());
  }
  return {static_cast<double>(sre + cre), static_cast<double>(sim + cim)};
}

ComplexPoint grad_vec(const Polynomial& g, std::span<const std::complex<double>> x) {
  require_point(g, x);
  ComplexPoint out;
  out.reserve(g.varcount());
  for (std::size_t k = 0; k < g.varcount(); ++k) out.push_back(std::conj(eval(partial(g, k), x)));
  return out;
}

double norm(std::span<const std::complex<double>> x) {
  double scale = 0;
  for (const auto& v : x) scale = std::max({scale, std::fabs(v.real()), std::fabs(v.imag())});
  if (scale == 0) return 0;
  double s = 0;
  for (const auto& v : x) s += std::norm(v / scale);
  return scale * std::sqrt(s);
}

Polynomial parse_poly(std::string_view text, const VarNames& vars) {
  const ParsedExpr parsed = parse_expression(text, vars);
  Polynomial out(vars);
  for (const auto& [e, c] : parsed.terms) {
    Exponents u(e.size());
    for (std::size_t k = 0; k < e.size(); ++k) u[k] = static_cast<std::uint32_t>(e[k]);
    out.add_term(u, c);
  }
  return out;
}

}  // namespace loj::poly
