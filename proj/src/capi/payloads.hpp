#pragma once

#include <complex>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "curvelab/curves.hpp"
#include "polyring/family.hpp"
#include "sphereopt/sphereopt.hpp"

namespace loj::capi {

using nlohmann::json;

inline constexpr double kRootTolerance = 1e-12;  // |cubic(root)| for deflated roots
inline constexpr double kTraceTolerance = 1e-10; // relative, leading-coefficient pair

bool cubic_ok(const poly::CubicReport& c);

json complex_json(std::complex<double> z);
json point_json(const poly::ComplexPoint& x);

json family_json(int n, int q, bool checks);
json curve_json(const poly::Polynomial& g, const curve::Curve& p);
json trace_json(const curve::ContradictionTrace& t);
json sample_json(const opt::PhiSample& s);
json fit_json(const opt::SlopeFit& f);
json malgrange_json(const opt::MalgrangeProbe& p, double mu);
json mtame_json(const opt::MtameProbe& p);
json config_json(const opt::OptConfig& c);

/// Certificate matrix; `middle` replaces the -3 family coefficient.
json verify_json(int n_lo, int n_hi, int q_lo, int q_hi, std::optional<long> middle);

}  // namespace loj::capi
