#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "polyring/gaussian_rational.hpp"

namespace loj::poly {

using Exponents = std::vector<std::uint32_t>;
using ComplexPoint = std::vector<std::complex<double>>;

/// Term order used for storage and printing: exponent vectors compared from
/// the last variable to the first, ascending. For (x,y,z) this lists
/// x, x^3*y^2, x^4*y^3, y*z in that order.
struct TermOrder {
  bool operator()(const Exponents& a, const Exponents& b) const {
    for (std::size_t k = a.size(); k-- > 0;) {
      if (a[k] != b[k]) return a[k] < b[k];
    }
    return false;
  }
};

using VarNames = std::vector<std::string>;

/// Names used when a caller only supplies a variable count: x, y, z for up
/// to three variables, x1..xm otherwise.
VarNames default_var_names(std::size_t varcount);

/// Sparse multivariate polynomial with exact Gaussian-rational coefficients.
/// Zero coefficients are never stored, so equality is structural.
class Polynomial {
 public:
  using TermMap = std::map<Exponents, GaussianRational, TermOrder>;

  explicit Polynomial(VarNames vars);
  explicit Polynomial(std::size_t varcount) : Polynomial(default_var_names(varcount)) {}

  static Polynomial constant(VarNames vars, GaussianRational c);
  static Polynomial variable(VarNames vars, std::size_t index);
  static Polynomial monomial(VarNames vars, Exponents exps, GaussianRational c);

  std::size_t varcount() const noexcept { return vars_->size(); }
  const VarNames& vars() const noexcept { return *vars_; }
  const TermMap& terms() const noexcept { return terms_; }
  std::size_t term_count() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }
  bool is_constant() const;
  std::uint32_t total_degree() const;
  GaussianRational coefficient(const Exponents& exps) const;

  /// Adds c * monomial, dropping the entry if it cancels.
  void add_term(const Exponents& exps, const GaussianRational& c);

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(const GaussianRational& c);
  Polynomial operator-() const;

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(Polynomial a, const GaussianRational& c) { return a *= c; }
  friend Polynomial operator*(const GaussianRational& c, Polynomial a) { return a *= c; }

  /// Equal iff the coefficient tables agree; variable names are not compared.
  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.varcount() == b.varcount() && a.terms_ == b.terms_;
  }

  /// Canonical text, e.g. "x - 3*x^3*y^2 + 2*x^4*y^3 + y*z". Re-parses to an
  /// equal polynomial.
  std::string to_string() const;

 private:
  void require_same_ring(const Polynomial& o) const;

  std::shared_ptr<const VarNames> vars_;
  TermMap terms_;
};

Polynomial pow(const Polynomial& a, unsigned k);

/// Formal partial derivative with respect to variable `index` (0-based).
Polynomial partial(const Polynomial& g, std::size_t index);

/// All first partials, in variable order.
std::vector<Polynomial> gradient(const Polynomial& g);

/// A polynomial map C^m' -> C^k; every component shares one variable list.
struct PolyMap {
  std::vector<Polynomial> components;

  static PolyMap identity(const VarNames& vars);
  std::size_t source_dim() const;  // m'
  std::size_t target_dim() const { return components.size(); }
  void validate() const;
};

/// g(s_1, ..., s_k): substitutes component i of s for variable i of g.
Polynomial compose(const Polynomial& g, const PolyMap& s);

/// Componentwise composition g_j(s) for every component of g.
PolyMap compose(const PolyMap& g, const PolyMap& s);

/// Floating-point value of g at x. Monomials come from a per-variable power
/// cache, every term is formed in extended precision and the sum is
/// accumulated with compensation before the single final rounding.
std::complex<double> eval(const Polynomial& g, std::span<const std::complex<double>> x);

/// Conjugated gradient: component i is conj(dg/dx_i (x)).
ComplexPoint grad_vec(const Polynomial& g, std::span<const std::complex<double>> x);

/// Euclidean norm of a complex vector.
double norm(std::span<const std::complex<double>> x);

/// Parses text against an ordered variable list. Grammar in docs/formats.md.
Polynomial parse_poly(std::string_view text, const VarNames& vars);

}  // namespace loj::poly
