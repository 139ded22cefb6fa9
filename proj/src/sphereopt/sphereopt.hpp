#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "polyring/polynomial.hpp"

namespace loj::opt {

using poly::ComplexPoint;
using poly::Polynomial;

struct OptConfig {
  int starts = 64;
  int max_iters = 2000;
  double step_tol = 1e-12;
  double grad_tol = 1e-10;
  std::uint64_t seed = 0;
  std::vector<ComplexPoint> extra_seeds;
  double mu = 1e6;  // penalty weight of the Malgrange probe
  int threads = 1;

  /// Throws DomainError on non-positive counts or tolerances.
  void validate() const;
};

struct PhiSample {
  double r = 0;
  double phi = 0;  // ||grad g(argmin)||, recomputed exactly at the returned point
  ComplexPoint argmin;
  int converged_starts = 0;
  int total_starts = 0;
};

struct SlopeFit {
  double slope = 0;
  double intercept = 0;
  double residual = 0;  // RMS of the log-log fit
  std::vector<PhiSample> samples;
  std::size_t used = 0;  // samples entering the fit
};

/// Start points for one sphere: cfg.starts low-discrepancy directions
/// (Halton, randomly shifted by cfg.seed) scaled to radius r, then the
/// normalized extra seeds.
std::vector<ComplexPoint> start_points(std::size_t m, double r, const OptConfig& cfg);

/// Best found value of min ||grad g|| over the sphere of radius r (an upper
/// bound on phi(r)). `warm` is an additional start, rescaled onto the sphere.
PhiSample phi_at(const Polynomial& g, double r, const OptConfig& cfg,
                 const std::optional<ComplexPoint>& warm = std::nullopt);

/// ||grad g(x)|| evaluated in exact arithmetic at the binary value of x.
double exact_grad_norm(const Polynomial& g, const ComplexPoint& x);

std::vector<double> geometric_grid(double r_min, double r_max, int count);

/// Least-squares fit log phi = slope * log r + intercept over samples with
/// at least one converged start and phi > 0.
SlopeFit fit_slope(std::vector<PhiSample> samples);

SlopeFit estimate_Linfty(const Polynomial& g, double r_min, double r_max, int count, const OptConfig& cfg);

struct MalgrangeRow {
  double r = 0;
  double product = 0;    // ||x|| * ||grad g(x)|| at the best point
  double value_gap = 0;  // |g(x) - t0| there
  bool feasible = false; // value_gap <= eps, up to rounding
  ComplexPoint argmin;
  int converged_starts = 0;
};

struct MalgrangeProbe {
  std::complex<double> t0;
  double eps = 0;
  std::vector<MalgrangeRow> rows;
  double trend_slope = 0;  // log-log slope of feasible products against r
  bool decreasing = false;
  std::string verdict;
};

MalgrangeProbe malgrange_probe(const Polynomial& g, std::complex<double> t0, const std::vector<double>& radii,
                               double eps, const OptConfig& cfg);

struct MtameRow {
  double r = 0;
  int collected = 0;  // starts ending on numeric M(g)
  double min_abs_g = 0;
  double best_residual = 0;  // smallest relative residual seen
  ComplexPoint argmin;       // point attaining min |g|
  bool flagged = false;      // nothing collected at this radius
};

struct MtameProbe {
  std::vector<MtameRow> rows;
  bool increasing = false;
  std::string verdict;
};

MtameProbe mtame_probe(const Polynomial& g, const std::vector<double>& radii, const OptConfig& cfg);

}  // namespace loj::opt
