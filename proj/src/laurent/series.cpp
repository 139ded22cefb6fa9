#include "laurent/series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "errors.hpp"
#include "polyring/expr_parser.hpp"

namespace loj::laurent {

namespace {

using Approx = std::complex<double>;

constexpr long kInfinite = std::numeric_limits<long>::max();

long or_inf(const std::optional<long>& p) { return p ? *p : kInfinite; }
std::optional<long> from_inf(long p) { return p == kInfinite ? std::nullopt : std::optional<long>(p); }
long add_prec(long a, long b) { return (a == kInfinite || b == kInfinite) ? kInfinite : a + b; }

template <class S>
struct Scalar;

template <>
struct Scalar<GaussianRational> {
  static bool zero(const GaussianRational& c) { return c.is_zero(); }
  static double mag(const GaussianRational&) { return 0; }
  static GaussianRational conj(const GaussianRational& c) { return c.conj(); }
  static constexpr bool kApprox = false;
};

template <>
struct Scalar<Approx> {
  static bool zero(const Approx& c) { return c == Approx(0); }
  static double mag(const Approx& c) { return std::abs(c); }
  static Approx conj(const Approx& c) { return std::conj(c); }
  static constexpr bool kApprox = true;
};

void require_compatible(const LaurentSeries& a, const LaurentSeries& b) {
  if (a.window() != b.window())
    throw DimensionError("series windows differ: " + std::to_string(a.window()) + " vs " +
                         std::to_string(b.window()));
  if (a.mode() != b.mode()) throw DimensionError("series scalar modes differ");
}

std::string exponent_factor(long e) {
  if (e == 0) return "";
  if (e == 1) return "t";
  return "t^" + std::to_string(e);
}

std::string approx_text(Approx c) {
  std::ostringstream os;
  os.precision(17);
  if (c.imag() == 0) {
    os << c.real();
  } else if (c.real() == 0) {
    os << c.imag() << "*i";
  } else {
    os << "(" << c.real() << (c.imag() < 0 ? "-" : "+") << std::fabs(c.imag()) << "*i)";
  }
  return os.str();
}

}  // namespace

template <class S>
struct SeriesOps {
  using Vec = std::vector<S>;
  using Traits = Scalar<S>;

  static const Vec& co(const LaurentSeries& a) { return std::get<Vec>(a.coeffs_); }

  static LaurentSeries make(std::size_t window, ScalarMode mode) { return LaurentSeries(window, mode); }

  /// Builds a normalized series from raw coefficients raw[k] of t^{lo+k}.
  /// Entries at or above `limit` are unknown and dropped. In approximate mode
  /// entries small against `bound` are rounding residue and flushed.
  static LaurentSeries finish(long lo, Vec raw, long limit, std::size_t window, ScalarMode mode,
                              const std::vector<double>* bound = nullptr) {
    LaurentSeries out(window, mode);
    if constexpr (Traits::kApprox) {
      if (bound) {
        for (std::size_t k = 0; k < raw.size(); ++k)
          if (Traits::mag(raw[k]) <= kApproxFlush * (*bound)[k]) raw[k] = S(0);
      }
      for (auto& c : raw)
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
          throw NumericError("non-finite series coefficient");
    }
    std::size_t usable = raw.size();
    if (limit != kInfinite) usable = static_cast<std::size_t>(std::clamp<long>(limit - lo, 0, static_cast<long>(raw.size())));
    std::size_t first = 0;
    while (first < usable && Traits::zero(raw[first])) ++first;
    if (first == usable) {
      out.coeffs_ = Vec{};
      out.precision_ = from_inf(limit);
      return out;
    }
    const long base = lo + static_cast<long>(first);
    std::size_t last = usable;  // one past the last nonzero
    while (last > first && Traits::zero(raw[last - 1])) --last;
    long cap = limit;
    if (last - first > window) {
      cap = std::min(limit, base + static_cast<long>(window));
    } else if (limit != kInfinite) {
      cap = std::min(limit, base + static_cast<long>(window));
    }
    if (cap != kInfinite) {
      last = std::min(last, static_cast<std::size_t>(cap - lo));
      while (last > first && Traits::zero(raw[last - 1])) --last;
    }
    out.base_ = base;
    out.coeffs_ = Vec(std::make_move_iterator(raw.begin() + static_cast<long>(first)),
                      std::make_move_iterator(raw.begin() + static_cast<long>(last)));
    out.precision_ = from_inf(cap);
    return out;
  }

  static LaurentSeries add(const LaurentSeries& a, const LaurentSeries& b, bool subtract) {
    const long limit = std::min(or_inf(a.precision_), or_inf(b.precision_));
    if (a.is_zero() && b.is_zero()) {
      LaurentSeries out(a.window_, a.mode_);
      out.coeffs_ = Vec{};
      out.precision_ = from_inf(limit);
      return out;
    }
    long lo = kInfinite, hi = std::numeric_limits<long>::min();
    for (const LaurentSeries* s : {&a, &b}) {
      if (s->is_zero()) continue;
      lo = std::min(lo, s->base_);
      hi = std::max(hi, s->base_ + static_cast<long>(co(*s).size()));
    }
    hi = std::min(hi, limit);
    if (hi <= lo) return finish(lo, Vec{}, limit, a.window_, a.mode_);
    Vec raw(static_cast<std::size_t>(hi - lo), S(0));
    std::vector<double> bound(raw.size(), 0.0);
    auto accumulate = [&](const LaurentSeries& s, bool negate) {
      if (s.is_zero()) return;
      const Vec& c = co(s);
      for (std::size_t k = 0; k < c.size(); ++k) {
        const long e = s.base_ + static_cast<long>(k);
        if (e >= hi) break;
        const std::size_t at = static_cast<std::size_t>(e - lo);
        if (negate) {
          raw[at] -= c[k];
        } else {
          raw[at] += c[k];
        }
        if constexpr (Traits::kApprox) bound[at] += Traits::mag(c[k]);
      }
    };
    accumulate(a, false);
    accumulate(b, subtract);
    return finish(lo, std::move(raw), limit, a.window_, a.mode_, &bound);
  }

  static LaurentSeries mul(const LaurentSeries& a, const LaurentSeries& b) {
    if (a.is_exact_zero() || b.is_exact_zero()) return LaurentSeries(a.window_, a.mode_);
    if (a.is_zero() || b.is_zero()) {
      // O(t^p) * (t^beta * ...) = O(t^{p+beta}); O(t^p) * O(t^r) = O(t^{p+r}).
      const long pa = a.is_zero() ? *a.precision_ : a.base_;
      const long pb = b.is_zero() ? *b.precision_ : b.base_;
      LaurentSeries out(a.window_, a.mode_);
      out.coeffs_ = Vec{};
      out.precision_ = pa + pb;
      return out;
    }
    const Vec& ca = co(a);
    const Vec& cb = co(b);
    const long lo = a.base_ + b.base_;
    long limit = std::min(add_prec(or_inf(a.precision_), b.base_), add_prec(or_inf(b.precision_), a.base_));
    const std::size_t full = ca.size() + cb.size() - 1;
    std::size_t count = std::min(full, a.window_);
    if (full > a.window_) limit = std::min(limit, lo + static_cast<long>(a.window_));
    if (limit != kInfinite) count = std::min<std::size_t>(count, static_cast<std::size_t>(std::max<long>(limit - lo, 0)));
    Vec raw(count, S(0));
    std::vector<double> bound(count, 0.0);
    for (std::size_t i = 0; i < ca.size() && i < count; ++i) {
      for (std::size_t j = 0; j < cb.size() && i + j < count; ++j) {
        raw[i + j] += ca[i] * cb[j];
        if constexpr (Traits::kApprox) bound[i + j] += Traits::mag(ca[i]) * Traits::mag(cb[j]);
      }
    }
    return finish(lo, std::move(raw), limit, a.window_, a.mode_, &bound);
  }

  static LaurentSeries div(const LaurentSeries& a, const LaurentSeries& b) {
    if (b.is_zero()) throw DomainError("division by the zero series");
    if (a.is_exact_zero()) return LaurentSeries(a.window_, a.mode_);
    if (a.is_zero()) {
      LaurentSeries out(a.window_, a.mode_);
      out.coeffs_ = Vec{};
      out.precision_ = *a.precision_ - b.base_;
      return out;
    }
    const Vec& ca = co(a);
    const Vec& cb = co(b);
    const long lo = a.base_ - b.base_;
    const long rel_a = a.precision_ ? *a.precision_ - a.base_ : kInfinite;
    const long rel_b = b.precision_ ? *b.precision_ - b.base_ : kInfinite;
    if (cb.size() == 1 && rel_b == kInfinite) {
      Vec raw(ca.size());
      for (std::size_t k = 0; k < ca.size(); ++k) raw[k] = ca[k] / cb[0];
      return finish(lo, std::move(raw), add_prec(rel_a, lo), a.window_, a.mode_);
    }
    const long terms = std::min({static_cast<long>(a.window_), rel_a, rel_b});
    const std::size_t count = static_cast<std::size_t>(terms);
    Vec q(count, S(0));
    std::vector<double> bound(count, 0.0);
    for (std::size_t k = 0; k < count; ++k) {
      S num = k < ca.size() ? ca[k] : S(0);
      double mag = Traits::mag(num);
      for (std::size_t j = 1; j <= k && j < cb.size(); ++j) {
        num -= cb[j] * q[k - j];
        if constexpr (Traits::kApprox) mag += Traits::mag(cb[j]) * Traits::mag(q[k - j]);
      }
      if constexpr (Traits::kApprox) {
        if (Traits::mag(num) <= kApproxFlush * mag) num = S(0);
      }
      q[k] = num / cb[0];
      bound[k] = 0;
    }
    return finish(lo, std::move(q), lo + terms, a.window_, a.mode_, &bound);
  }

  static LaurentSeries conjugate(const LaurentSeries& a) {
    LaurentSeries out = a;
    for (auto& c : std::get<Vec>(out.coeffs_)) c = Traits::conj(c);
    return out;
  }

  static LaurentSeries scaled(const LaurentSeries& a, const S& c) {
    if (Traits::zero(c)) return LaurentSeries(a.window_, a.mode_);
    LaurentSeries out = a;
    for (auto& v : std::get<Vec>(out.coeffs_)) v *= c;
    return out;
  }

  static LaurentSeries rewindow(const LaurentSeries& a, std::size_t window) {
    const Vec& c = co(a);
    if (a.is_zero()) {
      LaurentSeries out(window, a.mode_);
      out.coeffs_ = Vec{};
      out.precision_ = a.precision_;
      return out;
    }
    return finish(a.base_, c, or_inf(a.precision_), window, a.mode_);
  }

  static std::string text(const LaurentSeries& a) {
    const Vec& c = co(a);
    const std::string remainder =
        a.precision_ ? "O(" + (*a.precision_ == 0 ? std::string("1") : exponent_factor(*a.precision_)) + ")" : "";
    if (c.empty()) return remainder.empty() ? "0" : remainder;
    std::string body;
    std::size_t shown = 0;
    for (std::size_t k = 0; k < c.size(); ++k) {
      if (Traits::zero(c[k])) continue;
      std::string coef;
      bool negative = false;
      if constexpr (Traits::kApprox) {
        negative = c[k].real() < 0 || (c[k].real() == 0 && c[k].imag() < 0);
        coef = approx_text(negative ? -c[k] : c[k]);
      } else {
        negative = sgn(c[k].re()) < 0 || (sgn(c[k].re()) == 0 && sgn(c[k].im()) < 0);
        coef = (negative ? -c[k] : c[k]).to_string();
      }
      const std::string f = exponent_factor(static_cast<long>(k));
      std::string term;
      if (f.empty()) {
        term = coef;
      } else if (coef == "1") {
        term = f;
      } else {
        term = coef + "*" + f;
      }
      if (shown == 0) {
        body += (negative ? "-" : "") + term;
      } else {
        body += (negative ? " - " : " + ") + term;
      }
      ++shown;
    }
    std::string head;
    if (a.base_ == 0) {
      head = body;
    } else if (c.size() == 1) {
      // Single term: "t^-3", "-1/2*t^-1".
      const bool negative = body.front() == '-';
      const std::string mag = negative ? body.substr(1) : body;
      head = (negative ? "-" : "") + (mag == "1" ? "" : mag + "*") + exponent_factor(a.base_);
    } else {
      head = exponent_factor(a.base_) + "*(" + body + ")";
    }
    return remainder.empty() ? head : head + " + " + remainder;
  }
};

LaurentSeries::LaurentSeries(std::size_t window, ScalarMode mode) : mode_(mode), window_(window) {
  if (window == 0) throw DomainError("series window must be positive");
  if (mode == ScalarMode::kExact) {
    coeffs_ = ExactCoeffs{};
  } else {
    coeffs_ = ApproxCoeffs{};
  }
}

LaurentSeries LaurentSeries::constant(const GaussianRational& c, std::size_t window, ScalarMode mode) {
  return monomial(c, 0, window, mode);
}

LaurentSeries LaurentSeries::monomial(const GaussianRational& c, long exponent, std::size_t window,
                                      ScalarMode mode) {
  if (mode == ScalarMode::kApprox) return monomial(c.to_complex(), exponent, window);
  return from_terms(std::map<long, GaussianRational>{{exponent, c}}, window);
}

LaurentSeries LaurentSeries::monomial(std::complex<double> c, long exponent, std::size_t window) {
  return from_terms(std::map<long, std::complex<double>>{{exponent, c}}, window);
}

LaurentSeries LaurentSeries::from_terms(const std::map<long, GaussianRational>& terms,
                                        std::size_t window, std::optional<long> precision,
                                        ScalarMode mode) {
  if (mode == ScalarMode::kApprox) {
    std::map<long, std::complex<double>> approx;
    for (const auto& [e, c] : terms) approx.emplace(e, c.to_complex());
    return from_terms(approx, window, precision);
  }
  if (terms.empty()) {
    LaurentSeries out(window, mode);
    out.precision_ = precision;
    return out;
  }
  const long lo = terms.begin()->first;
  const long hi = terms.rbegin()->first;
  ExactCoeffs raw(static_cast<std::size_t>(hi - lo + 1));
  for (const auto& [e, c] : terms) raw[static_cast<std::size_t>(e - lo)] = c;
  return SeriesOps<GaussianRational>::finish(lo, std::move(raw), or_inf(precision), window, mode);
}

LaurentSeries LaurentSeries::from_terms(const std::map<long, std::complex<double>>& terms,
                                        std::size_t window, std::optional<long> precision) {
  if (terms.empty()) {
    LaurentSeries out(window, ScalarMode::kApprox);
    out.precision_ = precision;
    return out;
  }
  const long lo = terms.begin()->first;
  const long hi = terms.rbegin()->first;
  ApproxCoeffs raw(static_cast<std::size_t>(hi - lo + 1));
  for (const auto& [e, c] : terms) raw[static_cast<std::size_t>(e - lo)] = c;
  return SeriesOps<Approx>::finish(lo, std::move(raw), or_inf(precision), window, ScalarMode::kApprox);
}

std::optional<long> LaurentSeries::ord() const {
  if (is_zero()) return std::nullopt;
  return base_;
}

std::size_t LaurentSeries::length() const noexcept {
  return std::visit([](const auto& v) { return v.size(); }, coeffs_);
}

GaussianRational LaurentSeries::exact_coeff(long exponent) const {
  const ExactCoeffs& c = exact_coeffs();
  if (c.empty() || exponent < base_ || exponent >= base_ + static_cast<long>(c.size())) return {};
  return c[static_cast<std::size_t>(exponent - base_)];
}

std::complex<double> LaurentSeries::coeff(long exponent) const {
  if (is_zero() || exponent < base_ || exponent >= base_ + static_cast<long>(length())) return {};
  const auto k = static_cast<std::size_t>(exponent - base_);
  if (mode_ == ScalarMode::kExact) return exact_coeffs()[k].to_complex();
  return approx_coeffs()[k];
}

std::complex<double> LaurentSeries::leading() const {
  if (is_zero()) throw DomainError("zero series has no leading coefficient");
  return coeff(base_);
}

GaussianRational LaurentSeries::exact_leading() const {
  if (is_zero()) throw DomainError("zero series has no leading coefficient");
  return exact_coeffs().front();
}

LaurentSeries LaurentSeries::with_window(std::size_t window) const {
  if (mode_ == ScalarMode::kExact) return SeriesOps<GaussianRational>::rewindow(*this, window);
  return SeriesOps<Approx>::rewindow(*this, window);
}

LaurentSeries LaurentSeries::to_approx() const {
  if (mode_ == ScalarMode::kApprox) return *this;
  LaurentSeries out(window_, ScalarMode::kApprox);
  ApproxCoeffs c;
  for (const auto& v : exact_coeffs()) c.push_back(v.to_complex());
  out.base_ = base_;
  out.coeffs_ = std::move(c);
  out.precision_ = precision_;
  return out;
}

std::string LaurentSeries::to_string() const {
  if (mode_ == ScalarMode::kExact) return SeriesOps<GaussianRational>::text(*this);
  return SeriesOps<Approx>::text(*this);
}

bool operator==(const LaurentSeries& a, const LaurentSeries& b) {
  if (a.mode_ != b.mode_ || a.window_ != b.window_ || a.precision_ != b.precision_) return false;
  if (a.is_zero() != b.is_zero()) return false;
  if (a.is_zero()) return true;
  return a.base_ == b.base_ && a.coeffs_ == b.coeffs_;
}

namespace {

template <class F>
LaurentSeries dispatch(const LaurentSeries& a, F&& f) {
  if (a.mode() == ScalarMode::kExact) return f(SeriesOps<GaussianRational>{});
  return f(SeriesOps<Approx>{});
}

}  // namespace

LaurentSeries operator+(const LaurentSeries& a, const LaurentSeries& b) {
  require_compatible(a, b);
  return dispatch(a, [&](auto ops) { return ops.add(a, b, false); });
}

LaurentSeries operator-(const LaurentSeries& a, const LaurentSeries& b) {
  require_compatible(a, b);
  return dispatch(a, [&](auto ops) { return ops.add(a, b, true); });
}

LaurentSeries operator*(const LaurentSeries& a, const LaurentSeries& b) {
  require_compatible(a, b);
  return dispatch(a, [&](auto ops) { return ops.mul(a, b); });
}

LaurentSeries operator-(const LaurentSeries& a) { return scale(a, GaussianRational(-1)); }

LaurentSeries scale(const LaurentSeries& a, const GaussianRational& c) {
  if (a.mode() == ScalarMode::kExact) return SeriesOps<GaussianRational>::scaled(a, c);
  return SeriesOps<Approx>::scaled(a, c.to_complex());
}

LaurentSeries pow(const LaurentSeries& a, unsigned k) {
  LaurentSeries result = LaurentSeries::constant(1, a.window(), a.mode());
  LaurentSeries base = a;
  while (k > 0) {
    if (k & 1U) result = result * base;
    k >>= 1U;
    if (k > 0) base = base * base;
  }
  return result;
}

LaurentSeries divide(const LaurentSeries& a, const LaurentSeries& b) {
  require_compatible(a, b);
  return dispatch(a, [&](auto ops) { return ops.div(a, b); });
}

LaurentSeries conj(const LaurentSeries& a) {
  return dispatch(a, [&](auto ops) { return ops.conjugate(a); });
}

LaurentSeries parse_series(std::string_view text, std::size_t window) {
  static const std::vector<std::string> kVars{"t"};
  const poly::ParsedExpr parsed =
      poly::parse_expression(text, kVars, {.allow_negative_exponents = true, .allow_big_o = true});
  std::map<long, GaussianRational> terms;
  for (const auto& [e, c] : parsed.terms) terms.emplace(e[0], c);
  std::optional<long> precision;
  if (parsed.big_o) {
    precision = (*parsed.big_o)[0];
    // Terms at or beyond the remainder are absorbed by it.
    terms.erase(terms.lower_bound(*precision), terms.end());
  }
  return LaurentSeries::from_terms(terms, window, precision);
}

// ---------------------------------------------------------------------------

SeriesVector::SeriesVector(std::vector<LaurentSeries> components) : components_(std::move(components)) {
  for (const auto& c : components_) {
    if (c.window() != components_.front().window())
      throw DimensionError("series vector components differ in window");
    if (c.mode() != components_.front().mode())
      throw DimensionError("series vector components differ in scalar mode");
  }
}

std::size_t SeriesVector::window() const {
  return components_.empty() ? kDefaultWindow : components_.front().window();
}

ScalarMode SeriesVector::mode() const {
  return components_.empty() ? ScalarMode::kExact : components_.front().mode();
}

std::optional<long> SeriesVector::ord() const {
  std::optional<long> best;
  for (const auto& c : components_) {
    const auto o = c.ord();
    if (o && (!best || *o < *best)) best = o;
  }
  return best;
}

LaurentSeries hermitian(const SeriesVector& a, const SeriesVector& b) {
  if (a.size() != b.size()) throw DimensionError("hermitian product of vectors of different length");
  LaurentSeries sum(a.window(), a.mode());
  for (std::size_t k = 0; k < a.size(); ++k) sum = sum + a[k] * conj(b[k]);
  return sum;
}

std::string SeriesVector::to_string() const {
  std::string out = "(";
  for (std::size_t k = 0; k < components_.size(); ++k) {
    if (k) out += ", ";
    out += components_[k].to_string();
  }
  return out + ")";
}

LaurentSeries compose_poly(const poly::Polynomial& g, const SeriesVector& p) {
  if (p.size() != g.varcount())
    throw DimensionError("curve has " + std::to_string(p.size()) + " components, polynomial has " +
                         std::to_string(g.varcount()) + " variables");
  const std::size_t w = p.window();
  const ScalarMode mode = p.mode();
  std::vector<std::vector<LaurentSeries>> cache(p.size());
  auto power_of = [&](std::size_t k, std::uint32_t j) -> const LaurentSeries& {
    auto& pk = cache[k];
    if (pk.empty()) pk.push_back(LaurentSeries::constant(1, w, mode));
    while (pk.size() <= j) pk.push_back(pk.back() * p[k]);
    return pk[j];
  };
  LaurentSeries sum(w, mode);
  for (const auto& [e, c] : g.terms()) {
    LaurentSeries term = LaurentSeries::constant(c, w, mode);
    for (std::size_t k = 0; k < e.size() && !term.is_exact_zero(); ++k)
      if (e[k] != 0) term = term * power_of(k, e[k]);
    sum = sum + term;
  }
  return sum;
}

}  // namespace loj::laurent
