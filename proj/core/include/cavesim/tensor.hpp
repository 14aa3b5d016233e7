#pragma once

#include <array>

namespace cavesim {

/// Symmetric 2x2 tensor in packed (xx, yy, xy) storage.
struct SymTensor2 {
  double xx = 0.0;
  double yy = 0.0;
  double xy = 0.0;

  double trace() const { return xx + yy; }
  double det() const { return xx * yy - xy * xy; }

  /// Full double contraction a:b; off-diagonal entries counted twice.
  double ddot(const SymTensor2& o) const {
    return xx * o.xx + yy * o.yy + 2.0 * xy * o.xy;
  }
  /// Squared Frobenius norm.
  double norm2() const { return ddot(*this); }

  static SymTensor2 identity() { return {1.0, 1.0, 0.0}; }
};

inline SymTensor2 operator+(const SymTensor2& a, const SymTensor2& b) {
  return {a.xx + b.xx, a.yy + b.yy, a.xy + b.xy};
}
inline SymTensor2 operator-(const SymTensor2& a, const SymTensor2& b) {
  return {a.xx - b.xx, a.yy - b.yy, a.xy - b.xy};
}
inline SymTensor2 operator*(double s, const SymTensor2& a) {
  return {s * a.xx, s * a.yy, s * a.xy};
}

/// Symmetric 3x3 tensor in packed (xx, yy, zz, xy, yz, xz) storage.
struct SymTensor3 {
  double xx = 0.0;
  double yy = 0.0;
  double zz = 0.0;
  double xy = 0.0;
  double yz = 0.0;
  double xz = 0.0;

  double trace() const { return xx + yy + zz; }
  double det() const {
    return xx * (yy * zz - yz * yz) - xy * (xy * zz - yz * xz) +
           xz * (xy * yz - yy * xz);
  }
  double ddot(const SymTensor3& o) const {
    return xx * o.xx + yy * o.yy + zz * o.zz +
           2.0 * (xy * o.xy + yz * o.yz + xz * o.xz);
  }
  double norm2() const { return ddot(*this); }

  static SymTensor3 identity() { return {1.0, 1.0, 1.0, 0.0, 0.0, 0.0}; }
};

inline SymTensor3 operator+(const SymTensor3& a, const SymTensor3& b) {
  return {a.xx + b.xx, a.yy + b.yy, a.zz + b.zz,
          a.xy + b.xy, a.yz + b.yz, a.xz + b.xz};
}
inline SymTensor3 operator-(const SymTensor3& a, const SymTensor3& b) {
  return {a.xx - b.xx, a.yy - b.yy, a.zz - b.zz,
          a.xy - b.xy, a.yz - b.yz, a.xz - b.xz};
}
inline SymTensor3 operator*(double s, const SymTensor3& a) {
  return {s * a.xx, s * a.yy, s * a.zz, s * a.xy, s * a.yz, s * a.xz};
}

struct LameParameters {
  double lambda = 0.0;  // [Pa]
  double mu = 0.0;      // [Pa]
};

/// Lamé parameters from Young's modulus and Poisson ratio.
/// Throws std::invalid_argument for E <= 0, nu <= -1 or nu >= 0.5.
LameParameters lame_parameters(double youngs_modulus, double poisson_ratio);

struct SphDev2 {
  SymTensor2 spherical;
  SymTensor2 deviatoric;
};
struct SphDev3 {
  SymTensor3 spherical;
  SymTensor3 deviatoric;
};

/// Orthogonal spherical/deviatoric decomposition: eps = eps_s + eps_d with
/// eps_s = (tr eps / n) I and tr(eps_d) = 0.
SphDev2 sph_dev_split(const SymTensor2& t);
SphDev3 sph_dev_split(const SymTensor3& t);

/// Eigenvalues, sorted descending.
std::array<double, 2> principal_stresses(const SymTensor2& s);

/// Eigenvalues via Cardano's trigonometric formulas. The returned triple is
/// not sorted; it is exact as a set up to roundoff. A hydrostatic tensor
/// (deviator below roundoff) short-circuits to (m, m, m).
std::array<double, 3> principal_stresses(const SymTensor3& s);

/// Largest shear. 2D: half the eigenvalue gap, (l1 - l2)/2.
/// 3D: the Mohr-circle bound sqrt(3 p) = sqrt(sigma_d:sigma_d / 2).
double max_shear(const SymTensor2& s);
double max_shear(const SymTensor3& s);

/// sigma_d:sigma_d - c sigma_s:sigma_s with c = kappa in 2D and
/// c = (2/3) kappa in 3D. Positive means the shear-compression damage
/// condition holds.
double shear_compression_measure(const SymTensor2& s, double kappa);
double shear_compression_measure(const SymTensor3& s, double kappa);

}  // namespace cavesim
