#include "loj/loj.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <cstring>
#include <new>
#include <set>
#include <string>
#include <string_view>

#include "capi/payloads.hpp"
#include "errors.hpp"

struct loj_poly {
  loj::poly::Polynomial p;
};

struct loj_curve {
  loj::curve::Curve c;
};

struct loj_config {
  loj::opt::OptConfig cfg;
};

namespace {

using loj::capi::json;

thread_local std::string g_last_error;

loj_status fail(loj_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

template <class Fn>
loj_status guard(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return LOJ_OK;
  } catch (const loj::ParseError& e) {
    return fail(LOJ_ERR_INPUT, e.what());
  } catch (const loj::DomainError& e) {
    return fail(LOJ_ERR_INPUT, e.what());
  } catch (const loj::DimensionError& e) {
    return fail(LOJ_ERR_DIMENSION, e.what());
  } catch (const loj::NumericError& e) {
    return fail(LOJ_ERR_NUMERIC, e.what());
  } catch (const std::bad_alloc&) {
    return fail(LOJ_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(LOJ_ERR_INTERNAL, e.what());
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void put(char** out, const std::string& s) { *out = dup_string(s); }
void put(char** out, const json& j) { *out = dup_string(j.dump()); }

void need(const void* p, const char* what) {
  if (!p) throw loj::DomainError(std::string(what) + " must not be null");
}

std::vector<std::string> split_names(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = std::min(text.find(',', start), text.size());
    std::string name(text.substr(start, comma - start));
    name.erase(std::remove_if(name.begin(), name.end(), [](unsigned char c) { return std::isspace(c); }),
               name.end());
    if (name.empty()) throw loj::DomainError("empty variable name in list");
    out.push_back(std::move(name));
    start = comma + 1;
  }
  return out;
}

// x < y < z < anything else; digit runs compare numerically so x2 < x10.
bool natural_less(const std::string& a, const std::string& b) {
  static const std::string kFirst = "xyz";
  const auto rank = [](const std::string& s) {
    return s.size() == 1 && kFirst.find(s[0]) != std::string::npos ? static_cast<int>(kFirst.find(s[0])) : 3;
  };
  if (rank(a) != rank(b)) return rank(a) < rank(b);
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (std::isdigit(static_cast<unsigned char>(a[i])) && std::isdigit(static_cast<unsigned char>(b[j]))) {
      std::size_t i2 = i, j2 = j;
      while (i2 < a.size() && std::isdigit(static_cast<unsigned char>(a[i2]))) ++i2;
      while (j2 < b.size() && std::isdigit(static_cast<unsigned char>(b[j2]))) ++j2;
      const std::string na = a.substr(i, i2 - i), nb = b.substr(j, j2 - j);
      if (na.size() != nb.size()) return na.size() < nb.size();
      if (na != nb) return na < nb;
      i = i2;
      j = j2;
    } else {
      if (a[i] != b[j]) return a[i] < b[j];
      ++i;
      ++j;
    }
  }
  return a.size() - i < b.size() - j;
}

std::vector<std::string> infer_names(std::string_view text) {
  std::set<std::string> found;
  for (std::size_t k = 0; k < text.size();) {
    const unsigned char c = static_cast<unsigned char>(text[k]);
    if (std::isalpha(c) || c == '_') {
      std::size_t e = k;
      while (e < text.size() && (std::isalnum(static_cast<unsigned char>(text[e])) || text[e] == '_')) ++e;
      std::string name(text.substr(k, e - k));
      if (name != "i") found.insert(std::move(name));
      k = e;
    } else {
      ++k;
    }
  }
  std::vector<std::string> out(found.begin(), found.end());
  std::sort(out.begin(), out.end(), natural_less);
  if (out.empty()) out.push_back("x");
  return out;
}

double parse_double(std::string_view key, const std::string& v) {
  char* end = nullptr;
  const double d = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size()) throw loj::DomainError("bad number for " + std::string(key) + ": " + v);
  return d;
}

template <class Int>
Int parse_int(std::string_view key, const std::string& v) {
  Int out{};
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw loj::DomainError("bad integer for " + std::string(key) + ": " + v);
  return out;
}

std::vector<double> radii_of(const double* radii, std::size_t n) {
  if (n > 0) need(radii, "radii");
  return std::vector<double>(radii, radii + n);
}

}  // namespace

extern "C" {

const char* loj_version(void) { return LOJ_VERSION_STRING; }

const char* loj_last_error(void) { return g_last_error.c_str(); }

void loj_string_free(char* s) { std::free(s); }

loj_status loj_poly_parse(const char* text, const char* vars, loj_poly** out) {
  return guard([&] {
    need(text, "text");
    need(out, "out");
    const auto names = vars ? split_names(vars) : infer_names(text);
    *out = new loj_poly{loj::poly::parse_poly(text, names)};
  });
}

loj_status loj_poly_family(int n, int q, loj_poly** out) {
  return guard([&] {
    need(out, "out");
    *out = new loj_poly{loj::poly::family(n, q)};
  });
}

loj_status loj_poly_family_mutated(int n, int q, int64_t middle, loj_poly** out) {
  return guard([&] {
    need(out, "out");
    loj::poly::FamilyCoefficients c;
    c.middle = loj::poly::GaussianRational(static_cast<long>(middle));
    *out = new loj_poly{loj::poly::family(n, q, c)};
  });
}

void loj_poly_free(loj_poly* p) { delete p; }

size_t loj_poly_varcount(const loj_poly* p) { return p ? p->p.varcount() : 0; }

loj_status loj_poly_to_string(const loj_poly* p, char** out) {
  return guard([&] {
    need(p, "polynomial");
    need(out, "out");
    put(out, p->p.to_string());
  });
}

loj_status loj_poly_vars(const loj_poly* p, char** out) {
  return guard([&] {
    need(p, "polynomial");
    need(out, "out");
    std::string s;
    for (const auto& v : p->p.vars()) s += (s.empty() ? "" : ",") + v;
    put(out, s);
  });
}

loj_status loj_curve_parse(const char* text, size_t window, loj_curve** out) {
  return guard([&] {
    need(text, "text");
    need(out, "out");
    *out = new loj_curve{loj::curve::parse_curve(text, window ? window : loj::laurent::kDefaultWindow)};
  });
}

loj_status loj_curve_psi(int n, int q, loj_curve** out) {
  return guard([&] {
    need(out, "out");
    *out = new loj_curve{loj::curve::psi_curve(n, q)};
  });
}

void loj_curve_free(loj_curve* c) { delete c; }

size_t loj_curve_dim(const loj_curve* c) { return c ? c->c.dim() : 0; }

loj_status loj_curve_to_string(const loj_curve* c, char** out) {
  return guard([&] {
    need(c, "curve");
    need(out, "out");
    put(out, c->c.to_string());
  });
}

loj_status loj_config_new(loj_config** out) {
  return guard([&] {
    need(out, "out");
    *out = new loj_config{};
  });
}

void loj_config_free(loj_config* c) { delete c; }

loj_status loj_config_set(loj_config* c, const char* key, const char* value) {
  return guard([&] {
    need(c, "config");
    need(key, "key");
    need(value, "value");
    const std::string k = key, v = value;
    loj::opt::OptConfig next = c->cfg;
    if (k == "starts") next.starts = parse_int<int>(k, v);
    else if (k == "max_iters") next.max_iters = parse_int<int>(k, v);
    else if (k == "threads") next.threads = parse_int<int>(k, v);
    else if (k == "seed") next.seed = parse_int<std::uint64_t>(k, v);
    else if (k == "step_tol") next.step_tol = parse_double(k, v);
    else if (k == "grad_tol") next.grad_tol = parse_double(k, v);
    else if (k == "mu") next.mu = parse_double(k, v);
    else throw loj::DomainError("unknown config key: " + k);
    next.validate();
    c->cfg = std::move(next);
  });
}

loj_status loj_config_add_seed(loj_config* c, const double* coords, size_t m) {
  return guard([&] {
    need(c, "config");
    need(coords, "coords");
    if (m == 0) throw loj::DimensionError("seed needs at least one coordinate");
    loj::poly::ComplexPoint p(m);
    for (size_t j = 0; j < m; ++j) p[j] = {coords[2 * j], coords[2 * j + 1]};
    c->cfg.extra_seeds.push_back(std::move(p));
  });
}

loj_status loj_config_json(const loj_config* c, char** out) {
  return guard([&] {
    need(c, "config");
    need(out, "out");
    put(out, loj::capi::config_json(c->cfg));
  });
}

loj_status loj_family_report(int n, int q, int checks, char** json_out) {
  return guard([&] {
    need(json_out, "out");
    put(json_out, loj::capi::family_json(n, q, checks != 0));
  });
}

loj_status loj_curve_report(const loj_poly* g, const loj_curve* p, char** json_out) {
  return guard([&] {
    need(g, "polynomial");
    need(p, "curve");
    need(json_out, "out");
    put(json_out, loj::capi::curve_json(g->p, p->c));
  });
}

loj_status loj_contradiction_trace(int n, int q, double rho_re, double rho_im, char** json_out) {
  return guard([&] {
    need(json_out, "out");
    put(json_out, loj::capi::trace_json(loj::curve::contradiction_trace(n, q, {rho_re, rho_im})));
  });
}

loj_status loj_phi_at(const loj_poly* g, double r, const loj_config* cfg, char** json_out) {
  return guard([&] {
    need(g, "polynomial");
    need(cfg, "config");
    need(json_out, "out");
    put(json_out, loj::capi::sample_json(loj::opt::phi_at(g->p, r, cfg->cfg)));
  });
}

loj_status loj_estimate_linfty(const loj_poly* g, double r_min, double r_max, int count, const loj_config* cfg,
                               char** json_out) {
  return guard([&] {
    need(g, "polynomial");
    need(cfg, "config");
    need(json_out, "out");
    put(json_out, loj::capi::fit_json(loj::opt::estimate_Linfty(g->p, r_min, r_max, count, cfg->cfg)));
  });
}

loj_status loj_malgrange_probe(const loj_poly* g, double t0_re, double t0_im, const double* radii, size_t nradii,
                               double eps, const loj_config* cfg, char** json_out) {
  return guard([&] {
    need(g, "polynomial");
    need(cfg, "config");
    need(json_out, "out");
    const auto probe = loj::opt::malgrange_probe(g->p, {t0_re, t0_im}, radii_of(radii, nradii), eps, cfg->cfg);
    put(json_out, loj::capi::malgrange_json(probe, cfg->cfg.mu));
  });
}

loj_status loj_mtame_probe(const loj_poly* g, const double* radii, size_t nradii, const loj_config* cfg,
                           char** json_out) {
  return guard([&] {
    need(g, "polynomial");
    need(cfg, "config");
    need(json_out, "out");
    put(json_out, loj::capi::mtame_json(loj::opt::mtame_probe(g->p, radii_of(radii, nradii), cfg->cfg)));
  });
}

loj_status loj_verify(int n_lo, int n_hi, int q_lo, int q_hi, const char* mutation, char** json_out) {
  return guard([&] {
    need(json_out, "out");
    std::optional<long> middle;
    if (mutation) {
      const std::string m = mutation;
      constexpr std::string_view kKey = "middle=";
      if (m.rfind(kKey, 0) != 0) throw loj::DomainError("unknown mutation: " + m);
      middle = parse_int<long>("middle", m.substr(kKey.size()));
    }
    put(json_out, loj::capi::verify_json(n_lo, n_hi, q_lo, q_hi, middle));
  });
}

}  // extern "C"
