#include "capi/payloads.hpp"

#include <cmath>

#include "errors.hpp"

namespace loj::capi {

namespace {

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

template <class T>
json opt_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

json limit_json(const curve::ValueLimit& v) {
  json j{{"kind", curve::to_string(v.kind)}, {"text", v.to_string()}};
  j["value"] = v.finite() ? complex_json(v.value) : json(nullptr);
  return j;
}

json report_json(const curve::CurveReport& r) {
  return {
      {"ord_p", r.ord_p},
      {"ord_grad", opt_json(r.ord_grad)},
      {"L", r.L ? json(poly::rational_to_fraction(*r.L)) : json(nullptr)},
      {"malgrange_sum", opt_json(r.malgrange_sum)},
      {"value_series", r.value_series.to_string()},
      {"value_limit", limit_json(r.value_limit)},
      {"grad", r.grad.to_string()},
      {"grad_identically_zero", r.grad_identically_zero},
      {"grad_zero_within_window", r.grad_zero_within_window},
      {"grad_tends_to_zero", r.grad_tends_to_zero},
      {"orders_certain", r.orders_certain},
  };
}

json cubic_json(const poly::CubicReport& c) {
  json roots = json::array();
  for (const auto& z : c.quadratic_roots) roots.push_back(complex_json(z));
  return {
      {"kind", poly::to_string(c.kind)},
      {"parameter", c.parameter},
      {"cubic", c.cubic.to_string()},
      {"value_at_one", c.value_at_one.to_string()},
      {"one_is_root", c.one_is_root},
      {"quadratic", c.quadratic.to_string()},
      {"quadratic_roots", roots},
      {"max_root_residual", c.max_root_residual},
      {"pass", cubic_ok(c)},
  };
}

}  // namespace

bool cubic_ok(const poly::CubicReport& c) { return c.one_is_root && c.max_root_residual <= kRootTolerance; }

json complex_json(std::complex<double> z) { return {{"re", z.real()}, {"im", z.imag()}}; }

json point_json(const poly::ComplexPoint& x) {
  json a = json::array();
  for (const auto& z : x) a.push_back(complex_json(z));
  return a;
}

json family_json(int n, int q, bool checks) {
  const poly::Polynomial f = poly::family(n, q);
  json j{{"n", n}, {"q", q}, {"polynomial", f.to_string()}, {"vars", f.vars()}};
  if (!checks) return j;
  const poly::Polynomial euler = poly::euler_identity_residual(n, q);
  const poly::AutomorphismReport aut = poly::verify_automorphism(n, q);
  const poly::CubicReport c4 = poly::cubic_root_check(poly::CubicKind::kEq4, n);
  const poly::CubicReport cc = poly::cubic_root_check(poly::CubicKind::kCounterpart, q);
  j["checks"] = {
      {"euler", {{"pass", euler.is_zero()}, {"residual", euler.to_string()}}},
      {"automorphism",
       {{"pass", aut.ok()},
        {"z_substitution_ok", aut.z_substitution_ok},
        {"first_component_ok", aut.first_component_ok},
        {"right_inverse_ok", aut.right_inverse_ok},
        {"left_inverse_ok", aut.left_inverse_ok},
        {"pulls_back_to_x", aut.pulls_back_to_x},
        {"in_z_coordinates", aut.in_z_coordinates.to_string()}}},
      {"cubic", json::array({cubic_json(c4), cubic_json(cc)})},
  };
  j["pass"] = euler.is_zero() && aut.ok() && cubic_ok(c4) && cubic_ok(cc);
  return j;
}

json curve_json(const poly::Polynomial& g, const curve::Curve& p) {
  if (g.varcount() != p.dim())
    throw DimensionError("curve has " + std::to_string(p.dim()) + " coordinates, polynomial has " +
                         std::to_string(g.varcount()) + " variables");
  const curve::MalgrangeCertificate mal = curve::malgrange_certificate(g, p);
  const curve::QuasitameCertificate qt = curve::quasitame_discrepancy(g, p);
  json j{{"curve", p.to_string()}, {"label", p.label}, {"exponent", report_json(mal.report)}};
  j["malgrange"] = {{"fails", mal.fails}, {"t0", limit_json(mal.t0)}, {"verdict", mal.verdict}};
  j["quasitame"] = {
      {"premise_met", qt.premise_met},
      {"discrepancy", qt.discrepancy.to_string()},
      {"discrepancy_order", opt_json(qt.discrepancy_order)},
      {"discrepancy_bounded", qt.discrepancy_bounded},
      {"not_quasitame", qt.not_quasitame},
      {"verdict", qt.verdict},
  };
  // A curve with zero norm series has no M-set residual.
  try {
    const curve::MsetResidual ms = curve::mset_residual(g, p);
    j["mset"] = {
        {"lambda", ms.lambda.to_string()},
        {"residual", ms.residual.to_string()},
        {"residual_order", opt_json(ms.residual_order)},
        {"residual_exactly_zero", ms.residual_exactly_zero},
        {"avoids_mset", ms.avoids_mset},
        {"verdict", ms.verdict},
    };
  } catch (const DomainError& e) {
    j["mset"] = {{"verdict", std::string("not computed: ") + e.what()}};
  }
  j["key_value"] = curve::to_key_value(mal.report);
  return j;
}

json trace_json(const curve::ContradictionTrace& t) {
  const double scale = std::fabs(t.expected_rhs);
  return {
      {"n", t.n},
      {"q", t.q},
      {"rho0", complex_json(t.rho0)},
      {"A", t.A},
      {"B", t.B},
      {"C", t.C},
      {"D", t.D},
      {"ord_lambda", t.ord_lambda},
      {"ord_z", t.ord_z},
      {"lambda_leading", complex_json(t.lambda_leading)},
      {"z_leading", complex_json(t.z_leading)},
      {"relations_hold", t.relations_hold},
      {"first_equations_hold", t.first_equations_hold},
      {"lhs_order", t.lhs_order},
      {"rhs_order", t.rhs_order},
      {"lhs", complex_json(t.lhs)},
      {"rhs", complex_json(t.rhs)},
      {"expected_rhs", t.expected_rhs},
      {"lhs_error", std::abs(t.lhs - 1.0)},
      {"rhs_relative_error", scale > 0 ? std::abs(t.rhs - t.expected_rhs) / scale : 0.0},
      {"contradiction", t.contradiction},
      {"verdict", t.verdict},
  };
}

json sample_json(const opt::PhiSample& s) {
  return {{"r", s.r},
          {"phi", s.phi},
          {"argmin", point_json(s.argmin)},
          {"converged_starts", s.converged_starts},
          {"total_starts", s.total_starts}};
}

json fit_json(const opt::SlopeFit& f) {
  json samples = json::array();
  for (const auto& s : f.samples) samples.push_back(sample_json(s));
  return {{"slope", f.slope}, {"intercept", f.intercept}, {"residual", f.residual}, {"used", f.used},
          {"samples", samples}};
}

json malgrange_json(const opt::MalgrangeProbe& p, double mu) {
  json rows = json::array();
  for (const auto& r : p.rows)
    rows.push_back({{"r", r.r},
                    {"product", r.product},
                    {"value_gap", r.value_gap},
                    {"feasible", r.feasible},
                    {"converged_starts", r.converged_starts},
                    {"argmin", point_json(r.argmin)}});
  return {{"t0", complex_json(p.t0)}, {"eps", p.eps},           {"mu", mu},
          {"rows", rows},             {"trend_slope", p.trend_slope}, {"decreasing", p.decreasing},
          {"verdict", p.verdict}};
}

json mtame_json(const opt::MtameProbe& p) {
  json rows = json::array();
  for (const auto& r : p.rows)
    rows.push_back({{"r", r.r},
                    {"collected", r.collected},
                    {"min_abs_g", finite_or_null(r.min_abs_g)},
                    {"best_residual", finite_or_null(r.best_residual)},
                    {"flagged", r.flagged},
                    {"argmin", point_json(r.argmin)}});
  return {{"rows", rows}, {"increasing", p.increasing}, {"verdict", p.verdict}};
}

json config_json(const opt::OptConfig& c) {
  json seeds = json::array();
  for (const auto& s : c.extra_seeds) seeds.push_back(point_json(s));
  return {{"starts", c.starts},     {"max_iters", c.max_iters}, {"step_tol", c.step_tol},
          {"grad_tol", c.grad_tol}, {"seed", c.seed},           {"mu", c.mu},
          {"threads", c.threads},   {"extra_seeds", seeds}};
}

json verify_json(int n_lo, int n_hi, int q_lo, int q_hi, std::optional<long> middle) {
  for (int v : {n_lo, n_hi, q_lo, q_hi})
    if (v < 1 || v > 8) throw DomainError("verify ranges must lie within 1..8");
  if (n_lo > n_hi || q_lo > q_hi) throw DomainError("verify range is empty");
  poly::FamilyCoefficients coeffs;
  if (middle) coeffs.middle = poly::GaussianRational(*middle);

  json cells = json::array();
  int passed = 0, total = 0;
  for (int n = n_lo; n <= n_hi; ++n)
    for (int q = q_lo; q <= q_hi; ++q) {
      const poly::Polynomial f = poly::family(n, q, coeffs);
      const curve::Curve psi = curve::psi_curve(n, q);
      json checks;
      json failed = json::array();
      auto record = [&](const char* name, bool pass, json extra) {
        extra["pass"] = pass;
        checks[name] = std::move(extra);
        if (!pass) failed.push_back(name);
      };

      const curve::MalgrangeCertificate mal = curve::malgrange_certificate(f, psi);
      mpq_class expected(-n, q);
      expected.canonicalize();
      const auto& L = mal.report.L;
      record("exponent", L && *L == expected,
             {{"L", L ? json(poly::rational_to_fraction(*L)) : json(nullptr)},
              {"expected", poly::rational_to_fraction(expected)}});

      record("euler", poly::euler_identity_residual(f, n, q).is_zero(), json::object());
      record("automorphism", poly::verify_automorphism(f, n, q).ok(), json::object());

      const bool cubic = cubic_ok(poly::cubic_root_check(poly::CubicKind::kEq4, n)) &&
                         cubic_ok(poly::cubic_root_check(poly::CubicKind::kCounterpart, q));
      record("cubic", cubic, json::object());

      record("malgrange", mal.fails == (n > q), {{"fails", mal.fails}, {"expected_fail", n > q}});

      const curve::QuasitameCertificate qt = curve::quasitame_discrepancy(f, psi);
      record("quasitame", qt.not_quasitame, {{"verdict", qt.verdict}});

      const curve::ContradictionTrace tr = curve::contradiction_trace(n, q, {1.0, 0.0});
      const double scale = std::fabs(tr.expected_rhs);
      const bool trace_ok = tr.contradiction && std::abs(tr.lhs - 1.0) <= kTraceTolerance &&
                            std::abs(tr.rhs - tr.expected_rhs) <= kTraceTolerance * scale;
      record("trace", trace_ok,
             {{"lhs", complex_json(tr.lhs)}, {"rhs", complex_json(tr.rhs)}, {"expected_rhs", tr.expected_rhs}});

      const bool pass = failed.empty();
      passed += pass ? 1 : 0;
      ++total;
      cells.push_back({{"n", n}, {"q", q}, {"pass", pass}, {"failed", failed}, {"checks", checks}});
    }
  return {{"n_range", {n_lo, n_hi}},
          {"q_range", {q_lo, q_hi}},
          {"mutation", middle ? json("middle=" + std::to_string(*middle)) : json(nullptr)},
          {"cells", cells},
          {"passed", passed},
          {"total", total},
          {"pass", passed == total}};
}

}  // namespace loj::capi
