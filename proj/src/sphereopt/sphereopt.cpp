#include "sphereopt/sphereopt.hpp"

#include <algorithm>
#include <exception>
#include <limits>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <optional>
#include <thread>

#include <Eigen/Dense>

#include "errors.hpp"
#include "sphereopt/evaluator.hpp"

namespace loj::opt {

using detail::Cx;
using detail::Model;
using detail::PowerTable;
using detail::Quad;

void OptConfig::validate() const {
  if (starts < 1) throw DomainError("starts must be >= 1");
  if (max_iters < 1) throw DomainError("max_iters must be >= 1");
  if (!(step_tol > 0) || !(grad_tol > 0)) throw DomainError("tolerances must be positive");
  if (!(mu > 0)) throw DomainError("mu must be positive");
  if (threads < 1) throw DomainError("threads must be >= 1");
}

namespace {

using RealPoint = std::vector<double>;  // (Re x_1, Im x_1, ..., Re x_m, Im x_m)

RealPoint to_real(const ComplexPoint& x) {
  RealPoint v;
  v.reserve(2 * x.size());
  for (const auto& c : x) {
    v.push_back(c.real());
    v.push_back(c.imag());
  }
  return v;
}

ComplexPoint to_complex(const RealPoint& v) {
  ComplexPoint x(v.size() / 2);
  for (std::size_t j = 0; j < x.size(); ++j) x[j] = {v[2 * j], v[2 * j + 1]};
  return x;
}

double euclid(const RealPoint& v) {
  long double s = 0;
  for (double a : v) s += static_cast<long double>(a) * a;
  return static_cast<double>(std::sqrt(s));
}

RealPoint scaled_to(const RealPoint& v, double r) {
  const double n = euclid(v);
  if (!(n > 0) || !std::isfinite(n)) throw DomainError("start point must be finite and nonzero");
  RealPoint out(v.size());
  const double s = r / n;
  for (std::size_t k = 0; k < v.size(); ++k) out[k] = v[k] * s;
  return out;
}

bool finite_quad(Quad q) { return std::isfinite(static_cast<long double>(q)); }

long double to_ld(Quad q) { return static_cast<long double>(q); }

std::string describe(const RealPoint& v) {
  std::ostringstream os;
  os.precision(17);
  os << "(";
  for (std::size_t j = 0; j < v.size() / 2; ++j) {
    if (j) os << ", ";
    os << v[2 * j] << (v[2 * j + 1] < 0 ? "-" : "+") << std::fabs(v[2 * j + 1]) << "i";
  }
  os << ")";
  return os.str();
}

enum class Kind { kPhi, kMalgrange, kMtame };

// Relative distance from the sphere tolerated before a step is rescaled.
constexpr long double kSphereSlack = 1e-13L;

// Damping below which the undamped Gauss-Newton step is tried first.
constexpr long double kUndampedBelow = 1e-10L;

using MatL = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
using VecL = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

/// Least-squares residual vector on the sphere; F = sum of squares.
class Objective {
 public:
  Objective(const Model& model, Kind kind, double r) : M_(model), kind_(kind), r_(r) {}

  void set_target(std::complex<double> t0, double eps, double mu) {
    t0_ = t0;
    eps_ = eps;
    sqrt_mu_ = std::sqrt(mu);
  }

  std::size_t rows() const { return 2 * M_.m + (kind_ == Kind::kMalgrange ? 1 : 0); }

  std::vector<Quad> residual(const RealPoint& v) const {
    PowerTable<Quad> t;
    t.fill(v, M_.maxdeg);
    std::vector<Quad> out;
    out.reserve(rows());
    const std::size_t m = M_.m;
    switch (kind_) {
      case Kind::kPhi:
        for (std::size_t i = 0; i < m; ++i) {
          const Cx<Quad> d = M_.d[i].eval(t);
          out.push_back(d.re);
          out.push_back(d.im);
        }
        break;
      case Kind::kMalgrange: {
        const Quad r = r_;
        for (std::size_t i = 0; i < m; ++i) {
          const Cx<Quad> d = M_.d[i].eval(t);
          out.push_back(r * d.re);
          out.push_back(r * d.im);
        }
        const Cx<Quad> w = M_.g.eval(t) - Cx<Quad>{Quad(t0_.real()), Quad(t0_.imag())};
        const long double gap = std::sqrt(to_ld(detail::norm2(w)));
        out.push_back(Quad(sqrt_mu_ * std::max(0.0L, gap - eps_)));
        break;
      }
      case Kind::kMtame: {
        std::vector<Cx<Quad>> G(m), x(m);
        Quad nx2 = 0;
        Cx<Quad> s{};
        for (std::size_t i = 0; i < m; ++i) {
          G[i] = detail::conj(M_.d[i].eval(t));
          x[i] = {Quad(v[2 * i]), Quad(v[2 * i + 1])};
          nx2 += detail::norm2(x[i]);
          s = s + G[i] * detail::conj(x[i]);
        }
        const Cx<Quad> lambda{s.re / nx2, s.im / nx2};
        for (std::size_t i = 0; i < m; ++i) {
          const Cx<Quad> res = G[i] - lambda * x[i];
          out.push_back(res.re);
          out.push_back(res.im);
        }
        break;
      }
    }
    return out;
  }

  /// d(residual)/dv, scaled by 1/scale so that huge radii stay in double range.
  MatL jacobian(const RealPoint& v, long double scale) const {
    using L = long double;
    PowerTable<L> t;
    t.fill(v, M_.maxdeg);
    const std::size_t m = M_.m;
    std::vector<Cx<L>> H(m * m);
    for (std::size_t k = 0; k < m * m; ++k) H[k] = M_.h[k].eval(t);
    MatL J = MatL::Zero(static_cast<Eigen::Index>(rows()), static_cast<Eigen::Index>(2 * m));
    auto put = [&](std::size_t row, std::size_t col, Cx<L> val) {
      J(static_cast<Eigen::Index>(2 * row), static_cast<Eigen::Index>(col)) = val.re / scale;
      J(static_cast<Eigen::Index>(2 * row + 1), static_cast<Eigen::Index>(col)) = val.im / scale;
    };
    const Cx<L> I{0, 1};
    switch (kind_) {
      case Kind::kPhi:
      case Kind::kMalgrange: {
        const L r = kind_ == Kind::kMalgrange ? L(r_) : L(1);
        for (std::size_t i = 0; i < m; ++i)
          for (std::size_t j = 0; j < m; ++j) {
            const Cx<L> hij{r * H[i * m + j].re, r * H[i * m + j].im};
            put(i, 2 * j, hij);
            put(i, 2 * j + 1, I * hij);
          }
        if (kind_ == Kind::kMalgrange) {
          const Cx<L> w = M_.g.eval(t) - Cx<L>{L(t0_.real()), L(t0_.imag())};
          const L gap = std::sqrt(detail::norm2(w));
          if (gap - eps_ > 0 && gap > 0) {
            const auto row = static_cast<Eigen::Index>(2 * m);
            for (std::size_t j = 0; j < m; ++j) {
              const Cx<L> dj = M_.d[j].eval(t);
              const Cx<L> a = detail::conj(w) * dj, b = detail::conj(w) * (I * dj);
              J(row, static_cast<Eigen::Index>(2 * j)) = L(sqrt_mu_) * a.re / gap / scale;
              J(row, static_cast<Eigen::Index>(2 * j + 1)) = L(sqrt_mu_) * b.re / gap / scale;
            }
          }
        }
        break;
      }
      case Kind::kMtame: {
        // r = P G with P = I - x x^H / |x|^2 and G = conj(grad). Along a tangent
        // direction dx: dr = P conj(H dx) - lambda dx - x (dx^H G) / |x|^2.
        std::vector<Cx<L>> G(m), x(m);
        L nx2 = 0;
        Cx<L> s{};
        for (std::size_t i = 0; i < m; ++i) {
          G[i] = detail::conj(M_.d[i].eval(t));
          x[i] = {L(v[2 * i]), L(v[2 * i + 1])};
          nx2 += detail::norm2(x[i]);
          s = s + G[i] * detail::conj(x[i]);
        }
        const Cx<L> lambda{s.re / nx2, s.im / nx2};
        for (std::size_t j = 0; j < m; ++j)
          for (int part = 0; part < 2; ++part) {
            const Cx<L> unit = part == 0 ? Cx<L>{1, 0} : I;  // dx = unit * e_j
            std::vector<Cx<L>> w(m);
            for (std::size_t i = 0; i < m; ++i) w[i] = detail::conj(H[i * m + j] * unit);
            Cx<L> xhw{};
            for (std::size_t i = 0; i < m; ++i) xhw = xhw + detail::conj(x[i]) * w[i];
            const Cx<L> proj{xhw.re / nx2, xhw.im / nx2};
            const Cx<L> dxG = detail::conj(unit) * G[j];
            const Cx<L> tail{dxG.re / nx2, dxG.im / nx2};
            for (std::size_t i = 0; i < m; ++i) {
              Cx<L> col = w[i] - x[i] * proj - x[i] * tail;
              if (i == j) col = col - lambda * unit;
              put(i, 2 * j + static_cast<std::size_t>(part), col);
            }
          }
        break;
      }
    }
    return J;
  }

 private:
  const Model& M_;
  Kind kind_;
  double r_;
  std::complex<double> t0_{};
  long double eps_ = 0;
  double sqrt_mu_ = 0;
};

Quad sum_squares(const std::vector<Quad>& r) {
  Quad s = 0;
  for (Quad a : r) s += a * a;
  return s;
}

struct Outcome {
  RealPoint v;
  Quad F = 0;
  bool converged = false;
  int iterations = 0;
};

enum class Damping { kNone, kEuclidean, kMarquardt };

/// One local descent on the sphere. The sphere is charted over the largest
/// coordinate p: the other coordinates move freely and v_p follows from the
/// norm. While the norm drift stays below kSphereSlack, v_p is simply held,
/// which keeps rounding in v_p out of the residual. Directions come from
/// Gauss-Newton with Armijo backtracking.
class SphereDescent {
 public:
  SphereDescent(const Objective& obj, double r, const OptConfig& cfg) : obj_(obj), r_(r), cfg_(cfg) {}

  Outcome run(RealPoint v) {
    v_ = std::move(v);
    n_ = static_cast<Eigen::Index>(v_.size());
    res_ = obj_.residual(v_);
    F_ = sum_squares(res_);
    if (!finite_quad(F_)) throw NumericError("non-finite objective at start point " + describe(v_));
    Outcome out;
    for (int it = 0; it < cfg_.max_iters; ++it) {
      out.iterations = it + 1;
      if (F_ == 0 || step()) {
        out.converged = true;
        break;
      }
    }
    out.v = std::move(v_);
    out.F = F_;
    return out;
  }

 private:
  using L = long double;

  /// Linear model of the scaled residual in the free coordinates.
  struct Linear {
    bool chart = false;
    MatL A;
    VecL D, gT, bend;
    L anorm = 1;
  };

  void prepare(Linear& m, MatL A) const {
    m.A = std::move(A);
    m.gT = m.A.transpose() * R_;
    const L anorm = m.A.norm();
    m.anorm = anorm > 0 ? anorm : 1;
    m.D.resize(n_ - 1);
    for (Eigen::Index k = 0; k < n_ - 1; ++k) {
      const L c = m.A.col(k).norm();
      m.D(k) = c > 0 ? c : m.anorm;
    }
  }

  /// One iteration; true when converged.
  bool step() {
    p_ = 0;
    for (Eigen::Index k = 1; k < n_; ++k)
      if (std::fabs(v_[static_cast<std::size_t>(k)]) > std::fabs(v_[static_cast<std::size_t>(p_)])) p_ = k;
    scale_ = std::sqrt(to_ld(F_));
    const auto rows = static_cast<Eigen::Index>(res_.size());
    R_.resize(rows);
    for (Eigen::Index k = 0; k < rows; ++k) R_(k) = to_ld(res_[static_cast<std::size_t>(k)]) / scale_;
    const MatL J = obj_.jacobian(v_, scale_);
    const VecL Jp = J.col(p_);
    const L vp = v_[static_cast<std::size_t>(p_)];
    MatL A(rows, n_ - 1), A0(rows, n_ - 1);
    free_.clear();
    for (Eigen::Index k = 0, c = 0; k < n_; ++k) {
      if (k == p_) continue;
      A0.col(c) = J.col(k);
      A.col(c++) = J.col(k) - Jp * (v_[static_cast<std::size_t>(k)] / vp);
      free_.push_back(k);
    }
    if (!A.allFinite() || !R_.allFinite()) throw NumericError("non-finite derivative at " + describe(v_));
    chart_.chart = true;
    prepare(chart_, std::move(A));
    prepare(local_, std::move(A0));

    const MatL As = chart_.A * chart_.D.cwiseInverse().asDiagonal();
    const Eigen::ColPivHouseholderQR<MatL> qr(As);
    // Stationary when R has (almost) no component in the range of A; the
    // equilibrated QR keeps weakly coupled directions visible.
    const VecL d0 = qr.solve(-R_);
    if (!d0.allFinite() || (As * d0).norm() <= static_cast<L>(cfg_.grad_tol) * R_.norm()) return true;
    // Following the chart bends v_p by -q(delta); bend undoes the effect on R.
    chart_.bend = qr.solve(Jp).cwiseQuotient(chart_.D);
    if (!chart_.bend.allFinite()) chart_.bend.setZero();

    bool undamped = false;
    bool accepted = false;
    if (lambda_ <= kUndampedBelow) {
      int halvings = 0;
      accepted = try_both(Damping::kNone, halvings);
      if (accepted && halvings == 0) {
        undamped = true;
      } else if (accepted) {
        lambda_ = kUndampedBelow * 10;
      }
    }
    if (!accepted) {
      int halvings = 0;
      accepted = try_both(Damping::kEuclidean, halvings);
      if (accepted && halvings == 0) {
        lambda_ /= 10;
      } else {
        lambda_ = std::min(std::max(lambda_, 1e-8L) * std::pow(4.0L, std::max(halvings, 1)), 1e15L);
      }
    }
    int halvings = 0;
    if (!accepted) accepted = try_both(Damping::kMarquardt, halvings);
    if (!accepted) accepted = try_steepest(local_) || try_steepest(chart_);
    // Nothing decreases the objective at working precision.
    if (!accepted) return true;

    long double d2 = 0;
    for (std::size_t k = 0; k < v_.size(); ++k) {
      const long double d = static_cast<long double>(next_v_[k]) - v_[k];
      d2 += d * d;
    }
    v_ = std::move(next_v_);
    res_ = std::move(next_res_);
    F_ = next_F_;
    // A short step only means convergence when nothing shortened it.
    return undamped && std::sqrt(d2) <= cfg_.step_tol * r_;
  }

  bool try_both(Damping damping, int& halvings) {
    return try_direction(local_, damping, halvings) || try_direction(chart_, damping, halvings);
  }

  /// Damped least-squares direction. Coordinates whose step is below their
  /// own spacing are frozen and the system re-solved: such a move only
  /// rounds, and the others must carry the correction.
  VecL direction(const Linear& m, Damping damping) const {
    const auto rows = R_.size();
    std::vector<bool> frozen(static_cast<std::size_t>(n_ - 1), false);
    VecL delta = VecL::Zero(n_ - 1);
    for (int pass = 0; pass < 4; ++pass) {
      std::vector<Eigen::Index> cols;
      for (Eigen::Index k = 0; k < n_ - 1; ++k)
        if (!frozen[static_cast<std::size_t>(k)]) cols.push_back(k);
      if (cols.empty()) return VecL::Zero(n_ - 1);
      const auto c = static_cast<Eigen::Index>(cols.size());
      MatL aug = MatL::Zero(rows + (damping == Damping::kNone ? 0 : c), c);
      for (Eigen::Index j = 0; j < c; ++j) {
        const Eigen::Index k = cols[static_cast<std::size_t>(j)];
        aug.col(j).head(rows) = m.A.col(k) / m.D(k);
        if (damping == Damping::kEuclidean) aug(rows + j, j) = std::sqrt(lambda_) * m.anorm / m.D(k);
        if (damping == Damping::kMarquardt) aug(rows + j, j) = std::sqrt(std::max(lambda_, 1e-8L));
      }
      VecL rhs = VecL::Zero(aug.rows());
      rhs.head(rows) = -R_;
      const VecL ds = aug.colPivHouseholderQr().solve(rhs);
      delta.setZero();
      for (Eigen::Index j = 0; j < c; ++j) {
        const Eigen::Index k = cols[static_cast<std::size_t>(j)];
        delta(k) = ds(j) / m.D(k);
      }
      bool changed = false;
      for (Eigen::Index j = 0; j < n_ - 1; ++j) {
        const double x = std::fabs(v_[static_cast<std::size_t>(free_[static_cast<std::size_t>(j)])]);
        const double spacing = std::nextafter(x, std::numeric_limits<double>::infinity()) - x;
        if (!frozen[static_cast<std::size_t>(j)] && delta(j) != 0 && std::fabs(delta(j)) < 2 * spacing) {
          frozen[static_cast<std::size_t>(j)] = true;
          changed = true;
        }
      }
      if (!changed) break;
    }
    return delta;
  }

  bool try_direction(const Linear& m, Damping damping, int& halvings) {
    const VecL delta = direction(m, damping);
    const L pred = m.gT.dot(delta);
    if (!delta.allFinite() || !(pred < 0)) return false;
    return line_search(m, delta, pred, halvings);
  }

  bool try_steepest(const Linear& m) {
    // Cauchy step length along -gT.
    const VecL Ag = m.A * m.gT;
    const L denom = Ag.squaredNorm();
    if (!(denom > 0)) return false;
    const VecL delta = -(m.gT.squaredNorm() / denom) * m.gT;
    int halvings = 0;
    return line_search(m, delta, m.gT.dot(delta), halvings);
  }

  /// Point reached from v along alpha * delta; empty when a held v_p would
  /// leave the sphere by more than the slack.
  std::optional<RealPoint> trial_point(const Linear& m, const VecL& delta, L alpha) const {
    const L vp = v_[static_cast<std::size_t>(p_)];
    const L r2 = static_cast<L>(r_) * static_cast<L>(r_);
    std::vector<L> w(static_cast<std::size_t>(n_));
    auto fill = [&](const VecL& d) {
      L rest = 0;
      for (Eigen::Index j = 0; j < n_ - 1; ++j) {
        const auto k = static_cast<std::size_t>(free_[static_cast<std::size_t>(j)]);
        w[k] = v_[k] + d(j);
        rest += w[k] * w[k];
      }
      return std::copysign(std::sqrt(std::max(L(0), r2 - rest)), vp);
    };
    VecL d = alpha * delta;
    L cp = fill(d);
    L wp = vp;
    if (std::fabs(cp - vp) > kSphereSlack * static_cast<L>(r_)) {
      if (!m.chart) return std::nullopt;
      L vd = 0;
      for (Eigen::Index j = 0; j < n_ - 1; ++j) vd += v_[static_cast<std::size_t>(free_[static_cast<std::size_t>(j)])] * d(j);
      const L q = (d.squaredNorm() + (vd / vp) * (vd / vp)) / (2 * vp);
      const VecL extra = m.bend * q;
      if (extra.allFinite() && extra.norm() <= 0.5L * d.norm()) {
        d += extra;
        cp = fill(d);
      }
      wp = cp;
    }
    w[static_cast<std::size_t>(p_)] = wp;
    RealPoint c(static_cast<std::size_t>(n_));
    for (std::size_t k = 0; k < c.size(); ++k) c[k] = static_cast<double>(w[k]);
    return c;
  }

  /// Armijo backtracking on the true objective; pred is the scaled derivative
  /// of F/2 along delta.
  bool line_search(const Linear& m, const VecL& delta, L pred, int& halvings) {
    L alpha = 1;
    for (halvings = 0; halvings < 60; ++halvings, alpha /= 2) {
      std::optional<RealPoint> c = trial_point(m, delta, alpha);
      // Held v_p is for small moves; larger ones go through the chart.
      if (!c || *c == v_) return false;
      std::vector<Quad> rc = obj_.residual(*c);
      const Quad Fc = sum_squares(rc);
      const Quad bound = F_ + Quad(2e-4L * alpha * pred * scale_ * scale_);
      if (finite_quad(Fc) && Fc < F_ && Fc <= bound) {
        next_v_ = std::move(*c);
        next_res_ = std::move(rc);
        next_F_ = Fc;
        return true;
      }
    }
    return false;
  }

  const Objective& obj_;
  double r_;
  const OptConfig& cfg_;

  RealPoint v_;
  std::vector<Quad> res_;
  Quad F_ = 0;
  Eigen::Index n_ = 0;
  L lambda_ = 1e-3L;

  Eigen::Index p_ = 0;
  std::vector<Eigen::Index> free_;
  L scale_ = 1;
  VecL R_;
  Linear chart_, local_;

  RealPoint next_v_;
  std::vector<Quad> next_res_;
  Quad next_F_ = 0;
};

Outcome minimize(const Objective& obj, RealPoint v, double r, const OptConfig& cfg) {
  return SphereDescent(obj, r, cfg).run(std::move(v));
}

template <class Fn>
void for_each_index(std::size_t count, int threads, Fn&& fn) {
  const std::size_t t = std::min<std::size_t>(static_cast<std::size_t>(threads), count);
  if (t <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(t);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < t; ++w)
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < count; i += t) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

double radical_inverse(std::uint64_t i, unsigned base) {
  double inv = 1.0 / base, f = inv, x = 0;
  while (i > 0) {
    x += static_cast<double>(i % base) * f;
    i /= base;
    f *= inv;
  }
  return x;
}

constexpr unsigned kPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53,
                                59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107, 109, 113, 127, 131};

// Even starts are uniform directions on the sphere. Odd starts spread the
// coordinate magnitudes over powers of r, the shape of points on curves
// escaping to infinity, where the small-gradient valleys live.
constexpr double kLogSpan = 3.0;

void require_radius(double r) {
  if (!(r > 0) || !std::isfinite(r)) throw DomainError("radius must be positive and finite");
}

void require_nonconstant(const Polynomial& g) {
  if (g.varcount() == 0) throw DimensionError("polynomial has no variables");
  if (g.is_constant()) throw DomainError("polynomial must be nonconstant");
}

std::vector<RealPoint> all_starts(std::size_t m, double r, const OptConfig& cfg,
                                  const std::optional<ComplexPoint>& warm) {
  std::vector<RealPoint> starts;
  for (const auto& p : start_points(m, r, cfg)) starts.push_back(to_real(p));
  if (warm) {
    if (warm->size() != m) throw DimensionError("warm start has wrong dimension");
    starts.push_back(scaled_to(to_real(*warm), r));
  }
  return starts;
}

std::vector<Outcome> run_starts(const Objective& obj, const std::vector<RealPoint>& starts, double r,
                                const OptConfig& cfg) {
  std::vector<Outcome> outcomes(starts.size());
  for_each_index(starts.size(), cfg.threads, [&](std::size_t i) { outcomes[i] = minimize(obj, starts[i], r, cfg); });
  return outcomes;
}

std::size_t best_index(const std::vector<Outcome>& outcomes) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < outcomes.size(); ++i)
    if (outcomes[i].F < outcomes[best].F) best = i;
  return best;
}

// Continuation in r: a multi-start at kLadderBase, then single descents up a
// geometric ladder, each started from a power-law extrapolation of the last
// two minimizers. Small-gradient valleys thin out like r^e, so random starts
// at large r rarely land in them while the ladder follows one.
constexpr double kFeasibleSlack = 1e-6;

constexpr double kLadderBase = 10.0;
constexpr double kLadderFirst = 1.05;
constexpr double kLadderRatio = 1.7782794100389228;  // 10^(1/4)

RealPoint extrapolate(const RealPoint& a, double ra, const RealPoint& b, double rb, double r) {
  const ComplexPoint ca = to_complex(a), cb = to_complex(b);
  ComplexPoint out(cb.size());
  const double span = std::log(rb / ra);
  for (std::size_t j = 0; j < cb.size(); ++j) {
    const double ma = std::abs(ca[j]), mb = std::abs(cb[j]);
    if (!(ma > 0) || !(mb > 0)) {
      out[j] = cb[j];
      continue;
    }
    const double e = std::clamp(std::log(mb / ma) / span, -2 * kLogSpan, 2.0);
    out[j] = cb[j] * std::pow(r / rb, e);
  }
  return scaled_to(to_real(out), r);
}

template <class Make>
std::optional<Outcome> ladder(const Make& make, std::size_t m, double r, const OptConfig& cfg) {
  if (!(r > kLadderBase * kLadderRatio)) return std::nullopt;
  double ra = kLadderBase;
  const auto base = run_starts(make(ra), all_starts(m, ra, cfg, std::nullopt), ra, cfg);
  RealPoint a = base[best_index(base)].v;
  double rb = ra * kLadderFirst;
  Outcome o = minimize(make(rb), scaled_to(a, rb), rb, cfg);
  RealPoint b = o.v;
  while (rb < r) {
    const double rn = std::min(rb * kLadderRatio, r);
    o = minimize(make(rn), extrapolate(a, ra, b, rb, rn), rn, cfg);
    a = std::move(b);
    ra = rb;
    b = o.v;
    rb = rn;
  }
  return o;
}

poly::GaussianRational exact_eval(const Polynomial& p, const std::vector<poly::GaussianRational>& x) {
  poly::GaussianRational sum(0);
  std::vector<std::vector<poly::GaussianRational>> powers(x.size());
  for (const auto& [e, c] : p.terms()) {
    poly::GaussianRational v = c;
    for (std::size_t j = 0; j < e.size(); ++j) {
      auto& pw = powers[j];
      if (pw.empty()) pw.push_back(poly::GaussianRational(1));
      while (pw.size() <= e[j]) pw.push_back(pw.back() * x[j]);
      if (e[j]) v *= pw[e[j]];
    }
    sum += v;
  }
  return sum;
}

double fit_line(const std::vector<double>& X, const std::vector<double>& Y, double& intercept, double& rms) {
  const auto n = static_cast<long double>(X.size());
  long double sx = 0, sy = 0;
  for (std::size_t k = 0; k < X.size(); ++k) {
    sx += X[k];
    sy += Y[k];
  }
  const long double mx = sx / n, my = sy / n;
  long double sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < X.size(); ++k) {
    sxx += (X[k] - mx) * (X[k] - mx);
    sxy += (X[k] - mx) * (Y[k] - my);
  }
  const long double slope = sxy / sxx;
  intercept = static_cast<double>(my - slope * mx);
  long double ss = 0;
  for (std::size_t k = 0; k < X.size(); ++k) {
    const long double e = Y[k] - (slope * X[k] + intercept);
    ss += e * e;
  }
  rms = static_cast<double>(std::sqrt(ss / n));
  return static_cast<double>(slope);
}

}  // namespace

std::vector<ComplexPoint> start_points(std::size_t m, double r, const OptConfig& cfg) {
  cfg.validate();
  require_radius(r);
  if (m == 0) throw DimensionError("dimension must be positive");
  const std::size_t dims = 2 * m;
  if (dims > std::size(kPrimes)) throw DimensionError("too many variables for the start sequence");
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> shift(dims);
  for (double& s : shift) s = unif(rng);

  const double log_base = std::log(std::max(r, std::numbers::e));
  std::vector<ComplexPoint> out;
  for (int k = 0; k < cfg.starts; ++k) {
    ComplexPoint p(m);
    for (std::size_t j = 0; j < m; ++j) {
      double u1 = radical_inverse(static_cast<std::uint64_t>(k) + 1, kPrimes[2 * j]) + shift[2 * j];
      double u2 = radical_inverse(static_cast<std::uint64_t>(k) + 1, kPrimes[2 * j + 1]) + shift[2 * j + 1];
      u1 -= std::floor(u1);
      u2 -= std::floor(u2);
      double rad;
      if (k % 2 == 0) {
        rad = std::sqrt(-2.0 * std::log1p(-u1 * (1 - 1e-16)));
      } else {
        // Curve-like: coordinate sizes log_r^{e}, e in (-kLogSpan, 1].
        rad = std::exp(log_base * (1.0 - (1.0 + kLogSpan) * u1));
      }
      p[j] = std::polar(rad, 2 * std::numbers::pi * u2);
    }
    RealPoint v = to_real(p);
    if (!(euclid(v) > 0)) v[0] = 1.0;
    out.push_back(to_complex(scaled_to(v, r)));
  }
  for (const auto& e : cfg.extra_seeds) {
    if (e.size() != m)
      throw DimensionError("extra seed has " + std::to_string(e.size()) + " coordinates, expected " + std::to_string(m));
    out.push_back(to_complex(scaled_to(to_real(e), r)));
  }
  return out;
}

double exact_grad_norm(const Polynomial& g, const ComplexPoint& x) {
  if (x.size() != g.varcount()) throw DimensionError("point dimension does not match polynomial");
  std::vector<poly::GaussianRational> X;
  for (const auto& c : x) X.push_back(poly::GaussianRational::from_double(c));
  mpq_class s = 0;
  for (std::size_t i = 0; i < g.varcount(); ++i) s += exact_eval(poly::partial(g, i), X).norm();
  return std::sqrt(s.get_d());
}

PhiSample phi_at(const Polynomial& g, double r, const OptConfig& cfg, const std::optional<ComplexPoint>& warm) {
  cfg.validate();
  require_radius(r);
  require_nonconstant(g);
  const Model model(g);
  const Objective obj(model, Kind::kPhi, r);
  const auto starts = all_starts(g.varcount(), r, cfg, warm);
  auto outcomes = run_starts(obj, starts, r, cfg);
  if (auto o = ladder([&](double rr) { return Objective(model, Kind::kPhi, rr); }, g.varcount(), r, cfg))
    outcomes.push_back(std::move(*o));
  PhiSample s;
  s.r = r;
  s.total_starts = static_cast<int>(outcomes.size());
  for (const auto& o : outcomes) s.converged_starts += o.converged ? 1 : 0;
  const Outcome& best = outcomes[best_index(outcomes)];
  s.argmin = to_complex(best.v);
  s.phi = exact_grad_norm(g, s.argmin);
  if (!std::isfinite(s.phi)) throw NumericError("non-finite gradient norm at " + describe(best.v));
  return s;
}

std::vector<double> geometric_grid(double r_min, double r_max, int count) {
  if (!(r_min > 0) || !(r_max > r_min) || !std::isfinite(r_max))
    throw DomainError("radius grid needs 0 < r_min < r_max");
  if (count < 2) throw DomainError("radius grid needs at least 2 points");
  std::vector<double> out;
  const double a = std::log(r_min), b = std::log(r_max);
  for (int k = 0; k < count; ++k) out.push_back(k == 0 ? r_min : k == count - 1 ? r_max : std::exp(a + (b - a) * k / (count - 1)));
  return out;
}

SlopeFit fit_slope(std::vector<PhiSample> samples) {
  SlopeFit fit;
  std::vector<double> X, Y;
  for (const auto& s : samples)
    if (s.converged_starts >= 1 && s.phi > 0 && s.r > 0) {
      X.push_back(std::log(s.r));
      Y.push_back(std::log(s.phi));
    }
  fit.used = X.size();
  fit.samples = std::move(samples);
  if (X.size() < 3)
    throw NumericError("only " + std::to_string(X.size()) + " radii converged; a slope fit needs at least 3");
  fit.slope = fit_line(X, Y, fit.intercept, fit.residual);
  return fit;
}

SlopeFit estimate_Linfty(const Polynomial& g, double r_min, double r_max, int count, const OptConfig& cfg) {
  if (count < 3) throw DomainError("count must be >= 3");
  const auto radii = geometric_grid(r_min, r_max, count);
  std::vector<PhiSample> samples;
  std::optional<ComplexPoint> warm;
  for (double r : radii) {
    samples.push_back(phi_at(g, r, cfg, warm));
    warm = samples.back().argmin;
  }
  return fit_slope(std::move(samples));
}

MalgrangeProbe malgrange_probe(const Polynomial& g, std::complex<double> t0, const std::vector<double>& radii,
                               double eps, const OptConfig& cfg) {
  cfg.validate();
  require_nonconstant(g);
  if (radii.empty()) throw DomainError("radii must be nonempty");
  if (!(eps > 0)) throw DomainError("eps must be positive");
  const Model model(g);
  MalgrangeProbe probe;
  probe.t0 = t0;
  probe.eps = eps;
  std::optional<ComplexPoint> warm;
  for (double r : radii) {
    require_radius(r);
    auto make = [&](double rr) {
      Objective obj(model, Kind::kMalgrange, rr);
      obj.set_target(t0, eps, cfg.mu);
      return obj;
    };
    auto outcomes = run_starts(make(r), all_starts(g.varcount(), r, cfg, warm), r, cfg);
    if (auto o = ladder(make, g.varcount(), r, cfg)) outcomes.push_back(std::move(*o));
    const Outcome& best = outcomes[best_index(outcomes)];
    MalgrangeRow row;
    row.r = r;
    row.argmin = to_complex(best.v);
    for (const auto& o : outcomes) row.converged_starts += o.converged ? 1 : 0;
    row.product = euclid(best.v) * exact_grad_norm(g, row.argmin);
    std::vector<poly::GaussianRational> X;
    for (const auto& c : row.argmin) X.push_back(poly::GaussianRational::from_double(c));
    const poly::GaussianRational gap = exact_eval(g, X) - poly::GaussianRational::from_double(t0);
    row.value_gap = std::sqrt(gap.norm().get_d());
    // The penalty optimum sits on |g - t0| = eps; allow its rounding.
    row.feasible = row.value_gap <= eps * (1 + kFeasibleSlack);
    probe.rows.push_back(std::move(row));
    warm = probe.rows.back().argmin;
  }
  std::vector<double> X, Y;
  bool monotone = true;
  for (std::size_t k = 0; k < probe.rows.size(); ++k) {
    const auto& row = probe.rows[k];
    if (row.feasible && row.product > 0) {
      X.push_back(std::log(row.r));
      Y.push_back(std::log(row.product));
    }
    if (k > 0 && !(row.product < probe.rows[k - 1].product)) monotone = false;
  }
  const bool all_feasible =
      std::all_of(probe.rows.begin(), probe.rows.end(), [](const MalgrangeRow& r) { return r.feasible; });
  if (X.size() >= 2) {
    double icpt = 0, rms = 0;
    probe.trend_slope = fit_line(X, Y, icpt, rms);
  }
  probe.decreasing = all_feasible && monotone && probe.rows.size() >= 2 && probe.trend_slope < -0.25;
  probe.verdict = probe.decreasing
                      ? "numeric evidence of failure (products decrease toward 0); see curve certificates for proof"
                      : "holds (evidence): products bounded away from 0; see curve certificates for proof";
  return probe;
}

MtameProbe mtame_probe(const Polynomial& g, const std::vector<double>& radii, const OptConfig& cfg) {
  cfg.validate();
  require_nonconstant(g);
  if (radii.empty()) throw DomainError("radii must be nonempty");
  const Model model(g);
  MtameProbe probe;
  for (double r : radii) {
    require_radius(r);
    const Objective obj(model, Kind::kMtame, r);
    const auto outcomes = run_starts(obj, all_starts(g.varcount(), r, cfg, std::nullopt), r, cfg);
    MtameRow row;
    row.r = r;
    row.best_residual = std::numeric_limits<double>::infinity();
    row.min_abs_g = std::numeric_limits<double>::infinity();
    for (const auto& o : outcomes) {
      PowerTable<Quad> t;
      t.fill(o.v, model.maxdeg);
      Quad G2 = 0;
      for (std::size_t i = 0; i < model.m; ++i) G2 += detail::norm2(model.d[i].eval(t));
      const long double gnorm = std::sqrt(to_ld(G2));
      const long double rel = std::sqrt(to_ld(o.F)) / std::max(1.0L, gnorm);
      row.best_residual = std::min(row.best_residual, static_cast<double>(rel));
      if (rel > cfg.grad_tol) continue;
      ++row.collected;
      const double absg = static_cast<double>(std::sqrt(to_ld(detail::norm2(model.g.eval(t)))));
      if (absg < row.min_abs_g) {
        row.min_abs_g = absg;
        row.argmin = to_complex(o.v);
      }
    }
    row.flagged = row.collected == 0;
    if (row.flagged) row.min_abs_g = 0;
    probe.rows.push_back(std::move(row));
  }
  probe.increasing = true;
  for (std::size_t k = 0; k < probe.rows.size(); ++k) {
    if (probe.rows[k].flagged) probe.increasing = false;
    if (k > 0 && !(probe.rows[k].min_abs_g > probe.rows[k - 1].min_abs_g)) probe.increasing = false;
  }
  probe.verdict = probe.increasing
                      ? "min |g| on numeric M(g) grows with r: evidence of M-tameness (not a proof)"
                      : "no increasing trend of min |g| on numeric M(g) (evidence only)";
  return probe;
}

}  // namespace loj::opt
