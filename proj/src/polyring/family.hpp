#pragma once

#include <complex>
#include <string>
#include <vector>

#include "polyring/polynomial.hpp"

namespace loj::poly {

/// Coefficients of x, x^{2n+1}y^{2q}, x^{3n+1}y^{3q} and yz. The defaults give
/// the family member; other values exist for negative controls.
struct FamilyCoefficients {
  GaussianRational linear{1};
  GaussianRational middle{-3};
  GaussianRational top{2};
  GaussianRational yz{1};
};

/// f_{n,q}(x,y,z) = x - 3x^{2n+1}y^{2q} + 2x^{3n+1}y^{3q} + yz over (x,y,z).
Polynomial family(int n, int q);
Polynomial family(int n, int q, const FamilyCoefficients& coefficients);

/// f - [ y*df/dy + x*(1 + (6q-3)x^{2n}y^{2q} - (6q-2)x^{3n}y^{3q}) ].
/// Zero for every member of the family.
Polynomial euler_identity_residual(int n, int q);
Polynomial euler_identity_residual(const Polynomial& f, int n, int q);

/// Result of the coordinate-change check. The change is the composite
/// P = A o B of the triangular maps
///   B(x,y,z) = (x, y, z - 3x^{2n+1}y^{2q-1} + 2x^{3n+1}y^{3q-1})
///   A(x,y,Z) = (x + yZ, y, Z)
/// with explicit inverse Q = B^-1 o A^-1.
struct AutomorphismReport {
  bool z_substitution_ok = false;  // f == x + y*Z(x,y,z)
  bool first_component_ok = false; // f == P_1
  bool right_inverse_ok = false;   // P o Q == id
  bool left_inverse_ok = false;    // Q o P == id
  bool pulls_back_to_x = false;    // f o Q == X
  Polynomial in_z_coordinates;     // f o B^-1, expected x + y*z
  Polynomial residual;             // f - P_1
  PolyMap forward;                 // P
  PolyMap inverse;                 // Q

  bool ok() const {
    return z_substitution_ok && first_component_ok && right_inverse_ok && left_inverse_ok &&
           pulls_back_to_x;
  }
};

AutomorphismReport verify_automorphism(int n, int q);
AutomorphismReport verify_automorphism(const Polynomial& f, int n, int q);

enum class CubicKind { kEq4, kCounterpart };

/// 1 - (6n+3)T^2 + (6n+2)T^3 (kEq4, parameter n) or
/// 1 + (6q-3)T^2 - (6q-2)T^3 (kCounterpart, parameter q), deflated by (T - 1).
struct CubicReport {
  CubicKind kind = CubicKind::kEq4;
  int parameter = 0;
  Polynomial cubic{VarNames{"T"}};
  GaussianRational value_at_one;       // exact cubic(1)
  bool one_is_root = false;
  GaussianRational remainder;          // of the exact division by (T - 1)
  Polynomial quadratic{VarNames{"T"}}; // cubic / (T - 1)
  std::vector<std::complex<double>> quadratic_roots;
  double max_root_residual = 0;        // max |cubic(root)| over quadratic_roots
};

CubicReport cubic_root_check(CubicKind kind, int parameter);

const char* to_string(CubicKind kind);

}  // namespace loj::poly
