#pragma once

#include <array>

#include "cavesim/material.hpp"
#include "cavesim/tensor.hpp"

namespace cavesim {

struct Degradation {
  double a = 0.0;   // stiffness multiplier
  double da = 0.0;  // d a / d alpha
};

/// Quadratic degradation a(alpha) = (1 - alpha)^2.
/// Throws std::invalid_argument for alpha outside [0, 1].
Degradation degradation(double alpha);

struct Dissipation {
  double w = 0.0;   // [N/m^3]
  double dw = 0.0;  // d w / d alpha
};

/// Quadratic local dissipation w(alpha) = w1 alpha^2.
Dissipation dissipation(double alpha, double w1);

/// Undamaged plane-strain Hooke stress A0 eps = 2 mu eps + lambda tr(eps) I.
SymTensor2 hooke_stress(const MaterialParams& mat, const SymTensor2& strain);

/// Stress law of the selected model at damage level alpha.
/// Isotropic and ShearCompression: a(alpha) A0 eps.
/// Shear: (2 mu + 2 lambda) eps_s + 2 a(alpha) mu eps_d (spherical response
/// untouched by damage).
SymTensor2 stress(DamageModel model, const SymTensor2& strain, double alpha,
                  const MaterialParams& mat);

/// Alpha-dependent bulk energy density of the functional minimized in the
/// damage step (local dissipation and gradient terms excluded). For the
/// ShearCompression model this is the criterion-generating potential and can
/// be negative under dominant compression.
double elastic_energy_density(DamageModel model, const SymTensor2& strain,
                              double alpha, const MaterialParams& mat);

/// Derivative of elastic_energy_density in alpha at fixed strain.
double damage_driving_derivative(DamageModel model, const SymTensor2& strain,
                                 double alpha, const MaterialParams& mat);

/// Splits elastic_energy_density into an alpha-independent offset and the
/// coefficient multiplying the model's degradation shape:
///   density(alpha) = offset + shape(alpha) * factor.
/// The split lets the damage subproblem reuse the strain-dependent parts
/// across many alpha evaluations.
struct EnergyCoefficients {
  double offset = 0.0;
  double factor = 0.0;
};
EnergyCoefficients energy_coefficients(DamageModel model,
                                       const SymTensor2& strain,
                                       const MaterialParams& mat);

/// Degradation shape entering the energy split: a(alpha) for Isotropic and
/// Shear, a(alpha)^2 for ShearCompression, with first and second derivatives.
struct DegradationShape {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};
DegradationShape degradation_shape(DamageModel model, double alpha);

/// 3x3 plane-strain stiffness in Voigt order (eps_xx, eps_yy, gamma_xy) for
/// the model's stress law at degradation multiplier a_eff.
using VoigtMatrix = std::array<std::array<double, 3>, 3>;
VoigtMatrix voigt_stiffness(DamageModel model, double a_eff,
                            const MaterialParams& mat);

}  // namespace cavesim
