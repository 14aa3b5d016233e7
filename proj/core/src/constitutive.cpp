#include "cavesim/constitutive.hpp"

#include <stdexcept>

namespace cavesim {

const char* to_string(DamageModel model) {
  switch (model) {
    case DamageModel::Isotropic: return "isotropic";
    case DamageModel::Shear: return "shear";
    case DamageModel::ShearCompression: return "shear-compression";
  }
  return "unknown";
}

namespace {

void check_alpha(double alpha, const char* where) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument(std::string(where) + ": alpha outside [0, 1]");
  }
}

}  // namespace

Degradation degradation(double alpha) {
  check_alpha(alpha, "degradation");
  const double r = 1.0 - alpha;
  return {r * r, -2.0 * r};
}

Dissipation dissipation(double alpha, double w1) {
  check_alpha(alpha, "dissipation");
  return {w1 * alpha * alpha, 2.0 * w1 * alpha};
}

SymTensor2 hooke_stress(const MaterialParams& mat, const SymTensor2& strain) {
  const double lt = mat.lambda * strain.trace();
  return {2.0 * mat.mu * strain.xx + lt, 2.0 * mat.mu * strain.yy + lt,
          2.0 * mat.mu * strain.xy};
}

SymTensor2 stress(DamageModel model, const SymTensor2& strain, double alpha,
                  const MaterialParams& mat) {
  const double a = degradation(alpha).a;
  if (model == DamageModel::Shear) {
    const SphDev2 sd = sph_dev_split(strain);
    return (2.0 * mat.mu + 2.0 * mat.lambda) * sd.spherical +
           (2.0 * a * mat.mu) * sd.deviatoric;
  }
  return a * hooke_stress(mat, strain);
}

DegradationShape degradation_shape(DamageModel model, double alpha) {
  check_alpha(alpha, "degradation_shape");
  const double r = 1.0 - alpha;
  if (model == DamageModel::ShearCompression) {
    // a^2 = (1 - alpha)^4
    return {r * r * r * r, -4.0 * r * r * r, 12.0 * r * r};
  }
  return {r * r, -2.0 * r, 2.0};
}

EnergyCoefficients energy_coefficients(DamageModel model,
                                       const SymTensor2& strain,
                                       const MaterialParams& mat) {
  switch (model) {
    case DamageModel::Isotropic:
      return {0.0, 0.5 * hooke_stress(mat, strain).ddot(strain)};
    case DamageModel::Shear: {
      const SphDev2 sd = sph_dev_split(strain);
      const double tr = strain.trace();
      return {(mat.lambda + mat.mu) * 0.5 * tr * tr,
              mat.mu * sd.deviatoric.ddot(sd.deviatoric)};
    }
    case DamageModel::ShearCompression: {
      const SphDev2 sd = sph_dev_split(hooke_stress(mat, strain));
      const double dev2 = sd.deviatoric.ddot(sd.deviatoric);
      const double sph2 = sd.spherical.ddot(sd.spherical);
      return {0.0, (dev2 - mat.kappa * sph2) / (2.0 * mat.youngs)};
    }
  }
  throw std::logic_error("energy_coefficients: bad model");
}

double elastic_energy_density(DamageModel model, const SymTensor2& strain,
                              double alpha, const MaterialParams& mat) {
  const EnergyCoefficients c = energy_coefficients(model, strain, mat);
  return c.offset + degradation_shape(model, alpha).value * c.factor;
}

double damage_driving_derivative(DamageModel model, const SymTensor2& strain,
                                 double alpha, const MaterialParams& mat) {
  const EnergyCoefficients c = energy_coefficients(model, strain, mat);
  return degradation_shape(model, alpha).d1 * c.factor;
}

VoigtMatrix voigt_stiffness(DamageModel model, double a_eff,
                            const MaterialParams& mat) {
  if (model == DamageModel::Shear) {
    const double m = mat.lambda + mat.mu;
    const double d = a_eff * mat.mu;
    return {{{m + d, m - d, 0.0}, {m - d, m + d, 0.0}, {0.0, 0.0, d}}};
  }
  const double c11 = a_eff * (mat.lambda + 2.0 * mat.mu);
  const double c12 = a_eff * mat.lambda;
  const double c33 = a_eff * mat.mu;
  return {{{c11, c12, 0.0}, {c12, c11, 0.0}, {0.0, 0.0, c33}}};
}

}  // namespace cavesim
