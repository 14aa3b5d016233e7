#include "cavesim/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cavesim/config.hpp"
#include "cavesim/log.hpp"

namespace cavesim {

AmResult alternate_minimization(
    State& state, DamageModel model, const MaterialParams& mat,
    const SolverSettings& settings,
    const std::optional<std::vector<DirichletConstraint>>& custom_constraints) {
  const std::vector<DirichletConstraint> constraints =
      custom_constraints ? *custom_constraints
                         : boundary_constraints(state.mesh, settings.bc);
  const std::vector<FixedDof> fixed = dirichlet_dofs(state.mesh, constraints);

  AmResult result;
  double last_delta = std::numeric_limits<double>::infinity();
  for (int p = 1; p <= settings.am_max_iter + 1; ++p) {
    AmIterationRecord rec;

    // Equilibrium at frozen damage.
    const LinearSystem sys = assemble_elasticity(state.mesh, state.alpha, model, mat);
    const ReducedSystem red = apply_dirichlet(sys.matrix, sys.rhs, fixed);
    rec.equilibrium_before = red.quadratic_energy(red.restrict_to_free(state.u));
    const SpdSolveResult lin = solve_spd(red.matrix, red.rhs, settings.linear_tol);
    if (!lin.converged) {
      log_warn("elasticity solve: residual " + std::to_string(lin.relative_residual) +
               " above tolerance at sweep " + std::to_string(p));
    }
    rec.equilibrium_after = red.quadratic_energy(lin.x);
    state.u = red.expand(lin.x);

    const DamageFunctional functional(state.mesh, state.u, model, mat,
                                      state.alpha_prev);
    const BoxConstraints bounds = functional.irreversibility_bounds(state.alpha);
    MinimizeOptions opts;
    opts.tol = settings.kkt_tol;
    opts.max_iter = settings.kkt_max_iter;
    opts.scale = functional.kkt_scale();

    // Converged when the last damage increment is small and the damage field
    // is still first-order optimal at the refreshed equilibrium; the state
    // then satisfies both halves of the coupled problem at once.
    if (last_delta <= settings.am_tol) {
      NodalField grad(functional.size());
      functional.gradient(state.alpha, grad);
      const KktReport kkt =
          evaluate_kkt(bounds, state.alpha, grad, opts.scale, opts.tol);
      if (kkt.converged) {
        rec.functional_before = rec.functional_after = functional.value(state.alpha);
        rec.alpha_change_inf = 0.0;
        rec.kkt = kkt;
        result.trace.push_back(rec);
        result.converged = true;
        break;
      }
    }
    if (p > settings.am_max_iter) break;  // budget exhausted without certificate

    // Damage minimization at frozen displacement.
    rec.functional_before = functional.value(state.alpha);
    MinimizeResult min = minimize_box(functional, bounds, state.alpha, opts);
    rec.functional_after = min.objective;
    rec.kkt = min.report;
    rec.alpha_change_inf = (min.x - state.alpha).lpNorm<Eigen::Infinity>();
    state.alpha = std::move(min.x);
    last_delta = rec.alpha_change_inf;

    result.trace.push_back(rec);
    result.iterations = p;
    log_debug("sweep " + std::to_string(p) + ": |dalpha| " +
              std::to_string(rec.alpha_change_inf) + ", kkt interior " +
              std::to_string(rec.kkt.max_interior_gradient) + ", kkt bound " +
              std::to_string(rec.kkt.max_bound_violation) + ", kkt iters " +
              std::to_string(rec.kkt.iterations));
  }
  return result;
}

StepOutcome advance_step(const State& state, DamageModel model,
                         const MaterialParams& mat, const CavitySpec& cavity,
                         const SolverSettings& settings) {
  StepOutcome out;
  out.state = state;
  out.state.step = state.step + 1;
  out.state.mesh = carve_cavity(state.mesh, out.state.step, cavity);
  out.state.alpha_prev = state.alpha;
  out.am = alternate_minimization(out.state, model, mat, settings);
  return out;
}

EnergyBreakdown energy_report(const State& state, DamageModel model,
                              const MaterialParams& mat) {
  const DamageFunctional functional(state.mesh, state.u, model, mat,
                                    state.alpha_prev);
  const DamageFunctional::Parts parts = functional.parts(state.alpha);
  const LinearSystem sys = assemble_elasticity(state.mesh, state.alpha, model, mat);

  EnergyBreakdown e;
  e.elastic = parts.elastic;
  e.local_dissipation = parts.local_dissipation;
  e.gradient_dissipation = parts.gradient_dissipation;
  e.external_work = sys.rhs.dot(state.u);
  e.total = e.elastic + e.local_dissipation + e.gradient_dissipation - e.external_work;
  return e;
}

double max_active_alpha(const Mesh& mesh, const NodalField& alpha) {
  double m = 0.0;
  for (int n = 0; n < mesh.node_count(); ++n) {
    if (mesh.node_active[n]) m = std::max(m, alpha[n]);
  }
  return m;
}

namespace {

template <typename Accumulate>
void for_each_active_element(const Mesh& mesh, const NodalField& alpha,
                             Accumulate&& acc) {
  for (int t = 0; t < mesh.tri_count(); ++t) {
    if (!mesh.tri_active[t]) continue;
    const auto& tri = mesh.tris[t];
    const P1Geometry geom = p1_geometry(mesh, t);
    const double abar =
        std::clamp((alpha[tri[0]] + alpha[tri[1]] + alpha[tri[2]]) / 3.0, 0.0, 1.0);
    const Vec2 centroid = (1.0 / 3.0) * (mesh.nodes[tri[0]] + mesh.nodes[tri[1]] +
                                         mesh.nodes[tri[2]]);
    acc(geom.area, abar, centroid);
  }
}

}  // namespace

double integrated_damage(const Mesh& mesh, const NodalField& alpha) {
  double total = 0.0;
  for_each_active_element(mesh, alpha,
                          [&](double area, double abar, Vec2) { total += area * abar; });
  return total;
}

double integrated_damage_in(const Mesh& mesh, const NodalField& alpha,
                            const Rect& window) {
  double total = 0.0;
  for_each_active_element(mesh, alpha, [&](double area, double abar, Vec2 c) {
    if (window.contains_strict(c)) total += area * abar;
  });
  return total;
}

double damaged_area_fraction(const Mesh& mesh, const NodalField& alpha,
                             double threshold) {
  double damaged = 0.0;
  double total = 0.0;
  for_each_active_element(mesh, alpha, [&](double area, double abar, Vec2) {
    total += area;
    if (abar > threshold) damaged += area;
  });
  return total > 0.0 ? damaged / total : 0.0;
}

Vec2 damage_centroid(const Mesh& mesh, const NodalField& alpha) {
  double mass = 0.0;
  Vec2 moment{0.0, 0.0};
  for_each_active_element(mesh, alpha, [&](double area, double abar, Vec2 c) {
    mass += area * abar;
    moment = moment + (area * abar) * c;
  });
  return mass > 0.0 ? (1.0 / mass) * moment : Vec2{0.0, 0.0};
}

namespace {

StepSnapshot make_snapshot(State state, AmResult am, DamageModel model,
                           const MaterialParams& mat, const SolverSettings& settings) {
  StepSnapshot snap;
  snap.energy = energy_report(state, model, mat);
  snap.max_alpha = max_active_alpha(state.mesh, state.alpha);
  snap.damaged_area_fraction =
      damaged_area_fraction(state.mesh, state.alpha, kDamagedAreaThreshold);
  const std::vector<FixedDof> fixed =
      dirichlet_dofs(state.mesh, boundary_constraints(state.mesh, settings.bc));
  snap.equilibrium_residual_rel =
      equilibrium_residual(state.mesh, state.u, state.alpha, model, mat, fixed).relative;
  snap.am = std::move(am);
  snap.state = std::move(state);
  return snap;
}

}  // namespace

Trajectory run_evolution(const Config& config) {
  config.validate();
  const MaterialParams mat = config.material();
  const DamageModel model = config.model;

  State state;
  state.mesh = carve_cavity(build_mesh(config.domain, config.h), 0, config.cavity);
  state.step = 0;
  const int n = state.mesh.node_count();
  state.u = NodalField::Zero(2 * n);
  state.alpha = NodalField::Zero(n);
  state.alpha_prev = NodalField::Zero(n);

  Trajectory traj;
  AmResult am = alternate_minimization(state, model, mat, config.solver);
  if (!am.converged && !config.continue_on_failure) {
    throw EvolutionError("alternate minimization did not converge at step 0");
  }
  log_info("step 0: " + std::to_string(am.iterations) + " sweeps, max alpha " +
           std::to_string(max_active_alpha(state.mesh, state.alpha)));
  traj.steps.push_back(make_snapshot(state, std::move(am), model, mat, config.solver));

  for (int t = 1; t <= config.steps; ++t) {
    StepOutcome out = advance_step(traj.steps.back().state, model, mat,
                                   config.cavity, config.solver);
    if (!out.am.converged && !config.continue_on_failure) {
      throw EvolutionError("alternate minimization did not converge at step " +
                           std::to_string(t));
    }
    log_info("step " + std::to_string(t) + ": " + std::to_string(out.am.iterations) +
             " sweeps, max alpha " +
             std::to_string(max_active_alpha(out.state.mesh, out.state.alpha)));
    traj.steps.push_back(make_snapshot(std::move(out.state), std::move(out.am),
                                       model, mat, config.solver));
  }
  return traj;
}

}  // namespace cavesim
