#include "cavesim/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cavesim {

LameParameters lame_parameters(double youngs_modulus, double poisson_ratio) {
  if (!(youngs_modulus > 0.0)) {
    throw std::invalid_argument("lame_parameters: Young's modulus must be positive");
  }
  if (!(poisson_ratio > -1.0 && poisson_ratio < 0.5)) {
    throw std::invalid_argument("lame_parameters: Poisson ratio must lie in (-1, 0.5)");
  }
  const double mu = youngs_modulus / (2.0 * (1.0 + poisson_ratio));
  const double lambda = youngs_modulus * poisson_ratio /
                        ((1.0 + poisson_ratio) * (1.0 - 2.0 * poisson_ratio));
  return {lambda, mu};
}

SphDev2 sph_dev_split(const SymTensor2& t) {
  const double m = 0.5 * t.trace();
  const SymTensor2 sph{m, m, 0.0};
  return {sph, t - sph};
}

SphDev3 sph_dev_split(const SymTensor3& t) {
  const double m = t.trace() / 3.0;
  const SymTensor3 sph{m, m, m, 0.0, 0.0, 0.0};
  return {sph, t - sph};
}

std::array<double, 2> principal_stresses(const SymTensor2& s) {
  const double m = 0.5 * s.trace();
  // Equivalent to (tr +- sqrt(tr^2 - 4 det))/2; this form keeps the
  // discriminant nonnegative in floating point.
  const double half = 0.5 * (s.xx - s.yy);
  const double r = std::hypot(half, s.xy);
  return {m + r, m - r};
}

std::array<double, 3> principal_stresses(const SymTensor3& s) {
  const double m = s.trace() / 3.0;
  const SymTensor3 dev = s - m * SymTensor3::identity();
  const double p = dev.norm2() / 6.0;
  // Relative guard absorbs roundoff near hydrostatic states.
  if (p <= 1e-12 * s.norm2()) {
    return {m, m, m};
  }
  const double q = 0.5 * dev.det();
  const double radicand = std::max(p * p * p - q * q, 0.0);
  // Two-argument arctangent keeps the full angle in [0, pi] for q of either
  // sign; a plain atan would lose the branch for q < 0.
  const double theta = std::atan2(std::sqrt(radicand), q) / 3.0;
  const double r = 2.0 * std::sqrt(p);
  constexpr double third_pi = std::numbers::pi / 3.0;
  return {m + r * std::cos(theta),
          m - r * std::cos(theta - third_pi),
          m - r * std::cos(theta + third_pi)};
}

double max_shear(const SymTensor2& s) {
  const double half = 0.5 * (s.xx - s.yy);
  return std::hypot(half, s.xy);
}

double max_shear(const SymTensor3& s) {
  const double m = s.trace() / 3.0;
  const SymTensor3 dev = s - m * SymTensor3::identity();
  const double p = dev.norm2() / 6.0;
  return std::sqrt(3.0 * p);
}

double shear_compression_measure(const SymTensor2& s, double kappa) {
  const SphDev2 sd = sph_dev_split(s);
  return sd.deviatoric.ddot(sd.deviatoric) - kappa * sd.spherical.ddot(sd.spherical);
}

double shear_compression_measure(const SymTensor3& s, double kappa) {
  const SphDev3 sd = sph_dev_split(s);
  return sd.deviatoric.ddot(sd.deviatoric) -
         (2.0 / 3.0) * kappa * sd.spherical.ddot(sd.spherical);
}

}  // namespace cavesim
