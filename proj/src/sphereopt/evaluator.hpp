#pragma once

#include <complex>
#include <cstdint>
#include <type_traits>
#include <vector>

#include "polyring/polynomial.hpp"

namespace loj::opt::detail {

#if defined(__SIZEOF_FLOAT128__) && !defined(LOJ_NO_FLOAT128)
using Quad = __float128;
#else
using Quad = long double;
#endif

template <class T>
struct Cx {
  T re{}, im{};
};

template <class T>
inline Cx<T> operator+(Cx<T> a, Cx<T> b) { return {a.re + b.re, a.im + b.im}; }
template <class T>
inline Cx<T> operator-(Cx<T> a, Cx<T> b) { return {a.re - b.re, a.im - b.im}; }
template <class T>
inline Cx<T> operator*(Cx<T> a, Cx<T> b) { return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re}; }
template <class T>
inline Cx<T> conj(Cx<T> a) { return {a.re, -a.im}; }
template <class T>
inline T norm2(Cx<T> a) { return a.re * a.re + a.im * a.im; }

/// Powers x_j^k for every variable up to the largest exponent in use.
template <class T>
struct PowerTable {
  std::vector<std::vector<Cx<T>>> p;

  void fill(const std::vector<double>& v, const std::vector<std::uint32_t>& maxdeg) {
    p.resize(maxdeg.size());
    for (std::size_t j = 0; j < maxdeg.size(); ++j) {
      auto& row = p[j];
      row.assign(maxdeg[j] + 1, Cx<T>{});
      row[0] = {T(1), T(0)};
      const Cx<T> x{T(v[2 * j]), T(v[2 * j + 1])};
      for (std::uint32_t k = 1; k <= maxdeg[j]; ++k) row[k] = row[k - 1] * x;
    }
  }
};

/// Polynomial flattened for repeated floating-point evaluation.
class CompiledPoly {
 public:
  CompiledPoly() = default;
  explicit CompiledPoly(const poly::Polynomial& g);

  bool empty() const { return terms_.empty(); }
  void extend_degrees(std::vector<std::uint32_t>& maxdeg) const;

  template <class T>
  Cx<T> eval(const PowerTable<T>& t) const {
    if constexpr (std::is_same_v<T, double>) {
      return eval_impl(t, &Term::cd);
    } else if constexpr (std::is_same_v<T, Quad>) {
      return eval_impl(t, &Term::cq);
    } else {
      static_assert(std::is_same_v<T, long double>);
      return eval_impl(t, &Term::cl);
    }
  }

 private:
  struct Term {
    std::vector<std::uint32_t> e;
    Cx<double> cd;
    Cx<long double> cl;
    Cx<Quad> cq;
  };

  template <class T>
  Cx<T> eval_impl(const PowerTable<T>& t, Cx<T> Term::*coef) const {
    Cx<T> sum{};
    for (const Term& term : terms_) {
      Cx<T> v = term.*coef;
      for (std::size_t j = 0; j < term.e.size(); ++j)
        if (term.e[j]) v = v * t.p[j][term.e[j]];
      sum = sum + v;
    }
    return sum;
  }

  std::vector<Term> terms_;
};

/// g with its first and second partials.
struct Model {
  std::size_t m = 0;
  CompiledPoly g;
  std::vector<CompiledPoly> d;  // d[i] = dg/dx_i
  std::vector<CompiledPoly> h;  // h[i*m+j] = d2g/dx_i dx_j
  std::vector<std::uint32_t> maxdeg;

  explicit Model(const poly::Polynomial& poly);
};

/// Nearest Quad to an exact rational.
Quad to_quad(const mpq_class& q);

}  // namespace loj::opt::detail
