#pragma once

#include <stdexcept>
#include <string>

#include "cavesim/evolution.hpp"
#include "cavesim/material.hpp"
#include "cavesim/mesh.hpp"

namespace cavesim {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flat key = value run configuration. Defaults describe the reference
/// block-caving scenario: a 3000 x 1000 m rock mass under gravity with a
/// cavity growing 40 m per step. See README.md for the schema.
struct Config {
  DamageModel model = DamageModel::Isotropic;

  double youngs = 2.9e10;
  double poisson = 0.3;
  double density = 2.7e3;
  Vec2 gravity{0.0, -9.8};
  double w1 = 1.0e5;
  double ell = 75.0;
  double kappa = 1.0;

  Rect domain{-1500.0, 1500.0, -500.0, 500.0};
  CavitySpec cavity{};
  double h = 25.0;
  int steps = 15;

  SolverSettings solver{};
  std::string out_dir = "out";
  bool checkpoints = false;
  bool continue_on_failure = false;

  MaterialParams material() const {
    return MaterialParams::make(youngs, poisson, w1, ell, kappa, density, gravity);
  }

  /// Throws ConfigError naming the offending key; logs a warning when the
  /// mesh is too coarse to resolve the localization band (h > ell / 3).
  void validate() const;
};

Config load_config(const std::string& path);
Config parse_config(const std::string& text, const std::string& source_name);
std::string format_config(const Config& config);
void save_config(const Config& config, const std::string& path);

}  // namespace cavesim
