#pragma once

#include <optional>
#include <vector>

#include "cavesim/fem.hpp"
#include "cavesim/material.hpp"
#include "cavesim/mesh.hpp"
#include "cavesim/solver.hpp"

namespace cavesim {

/// Quasi-static state at one loading step.
struct State {
  int step = 0;
  Mesh mesh;
  NodalField u;           // length 2N
  NodalField alpha;       // length N
  NodalField alpha_prev;  // irreversibility lower bound, length N
};

struct SolverSettings {
  double am_tol = 1e-3;      // on ||alpha_p - alpha_{p-1}||_inf
  int am_max_iter = 200;
  double linear_tol = 1e-10;
  double kkt_tol = 1e-6;
  int kkt_max_iter = 1000;
  BcMode bc = BcMode::BottomClampedLateralRollers;
};

/// One alternate-minimization sweep: equilibrium energies bracket the
/// elasticity solve, functional values bracket the damage solve. Each pair is
/// non-increasing for the half-step's own minimized energy.
struct AmIterationRecord {
  double equilibrium_before = 0.0;
  double equilibrium_after = 0.0;
  double functional_before = 0.0;
  double functional_after = 0.0;
  double alpha_change_inf = 0.0;
  KktReport kkt;
};

struct AmResult {
  int iterations = 0;
  bool converged = false;
  std::vector<AmIterationRecord> trace;
};

/// Alternating elasticity / damage minimization at fixed loading until the
/// damage increment drops below am_tol. Custom constraints replace the
/// standard boundary conditions when provided (prescribed-displacement
/// patch tests).
AmResult alternate_minimization(
    State& state, DamageModel model, const MaterialParams& mat,
    const SolverSettings& settings,
    const std::optional<std::vector<DirichletConstraint>>& custom_constraints =
        std::nullopt);

struct StepOutcome {
  State state;
  AmResult am;
};

/// Advances one loading step: carves the cavity at step + 1, promotes the
/// damage field to the new irreversibility bound and re-runs alternate
/// minimization warm-started from the previous state.
StepOutcome advance_step(const State& state, DamageModel model,
                         const MaterialParams& mat, const CavitySpec& cavity,
                         const SolverSettings& settings);

/// Energy bookkeeping of a state: total = elastic + local dissipation
/// + gradient dissipation - external work.
struct EnergyBreakdown {
  double elastic = 0.0;
  double local_dissipation = 0.0;
  double gradient_dissipation = 0.0;
  double external_work = 0.0;
  double total = 0.0;
};

EnergyBreakdown energy_report(const State& state, DamageModel model,
                              const MaterialParams& mat);

// Damage-field statistics over the active region.
double max_active_alpha(const Mesh& mesh, const NodalField& alpha);
double integrated_damage(const Mesh& mesh, const NodalField& alpha);
double integrated_damage_in(const Mesh& mesh, const NodalField& alpha, const Rect& window);
double damaged_area_fraction(const Mesh& mesh, const NodalField& alpha, double threshold);

/// Element-average damage above which an element counts as damaged in the
/// damaged_area_fraction trace column.
inline constexpr double kDamagedAreaThreshold = 0.1;
/// Area-weighted centroid of the damage field; zero field gives (0, 0).
Vec2 damage_centroid(const Mesh& mesh, const NodalField& alpha);

struct StepSnapshot {
  State state;
  EnergyBreakdown energy;
  AmResult am;
  double max_alpha = 0.0;
  double damaged_area_fraction = 0.0;
  double equilibrium_residual_rel = 0.0;
};

struct Trajectory {
  std::vector<StepSnapshot> steps;
};

struct Config;  // io layer

/// Full quasi-static evolution t = 0..steps. Throws EvolutionError on an
/// unconverged step unless the config requests best-effort continuation.
Trajectory run_evolution(const Config& config);

class EvolutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cavesim
