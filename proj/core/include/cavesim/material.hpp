#pragma once

#include <stdexcept>

#include "cavesim/tensor.hpp"
#include "cavesim/types.hpp"

namespace cavesim {

enum class DamageModel { Isotropic, Shear, ShearCompression };

const char* to_string(DamageModel model);

/// Material constants of the rock mass. Lamé parameters are derived from
/// (E, nu) on construction so the pair stays consistent.
struct MaterialParams {
  double youngs = 0.0;   // E [Pa]
  double poisson = 0.0;  // nu
  double lambda = 0.0;   // [Pa]
  double mu = 0.0;       // [Pa]
  double w1 = 0.0;       // energy dissipated by full damage [N/m^3]
  double ell = 0.0;      // internal length [m]
  double kappa = 0.0;    // shear/compression weight in the damage criterion
  double density = 0.0;  // [kg/m^3]
  Vec2 gravity{0.0, 0.0};

  static MaterialParams make(double youngs, double poisson, double w1,
                             double ell, double kappa, double density,
                             Vec2 gravity) {
    const LameParameters lame = lame_parameters(youngs, poisson);
    if (!(w1 > 0.0)) throw std::invalid_argument("MaterialParams: w1 must be positive");
    if (!(ell > 0.0)) throw std::invalid_argument("MaterialParams: ell must be positive");
    if (!(kappa >= 0.0)) throw std::invalid_argument("MaterialParams: kappa must be nonnegative");
    if (!(density > 0.0)) throw std::invalid_argument("MaterialParams: density must be positive");
    MaterialParams m;
    m.youngs = youngs;
    m.poisson = poisson;
    m.lambda = lame.lambda;
    m.mu = lame.mu;
    m.w1 = w1;
    m.ell = ell;
    m.kappa = kappa;
    m.density = density;
    m.gravity = gravity;
    return m;
  }
};

}  // namespace cavesim
