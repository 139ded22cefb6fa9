#include "sphereopt/evaluator.hpp"

#include <algorithm>

namespace loj::opt::detail {

Quad to_quad(const mpq_class& q) {
  // Double-double split carries ~106 bits, enough for any coefficient we meet.
  const mpf_class f(q, 256);
  const double hi = f.get_d();
  const mpf_class rest = f - hi;
  const double lo = rest.get_d();
  return Quad(hi) + Quad(lo);
}

CompiledPoly::CompiledPoly(const poly::Polynomial& g) {
  for (const auto& [e, c] : g.terms()) {
    Term t;
    t.e = e;
    t.cd = {c.re().get_d(), c.im().get_d()};
    t.cq = {to_quad(c.re()), to_quad(c.im())};
    t.cl = {static_cast<long double>(t.cq.re), static_cast<long double>(t.cq.im)};
    terms_.push_back(std::move(t));
  }
}

void CompiledPoly::extend_degrees(std::vector<std::uint32_t>& maxdeg) const {
  for (const Term& t : terms_)
    for (std::size_t j = 0; j < t.e.size(); ++j) maxdeg[j] = std::max(maxdeg[j], t.e[j]);
}

Model::Model(const poly::Polynomial& poly) : m(poly.varcount()), g(poly), maxdeg(poly.varcount(), 0) {
  g.extend_degrees(maxdeg);
  const auto grads = poly::gradient(poly);
  for (std::size_t i = 0; i < m; ++i) d.emplace_back(grads[i]);
  h.resize(m * m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i; j < m; ++j) {
      h[i * m + j] = CompiledPoly(poly::partial(grads[i], j));
      h[j * m + i] = h[i * m + j];
    }
}

}  // namespace loj::opt::detail
