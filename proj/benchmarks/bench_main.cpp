#include <benchmark/benchmark.h>

#include <random>

#include "cavesim/config.hpp"
#include "cavesim/evolution.hpp"
#include "cavesim/fem.hpp"
#include "cavesim/solver.hpp"
#include "cavesim/tensor.hpp"

namespace {

using namespace cavesim;

MaterialParams rock() {
  return MaterialParams::make(2.9e10, 0.3, 1e5, 75.0, 1.0, 2.7e3, {0.0, -9.8});
}

void BM_PrincipalStresses3d(benchmark::State& state) {
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> u(-1e7, 1e7);
  std::vector<SymTensor3> tensors(1024);
  for (auto& t : tensors) t = {u(rng), u(rng), u(rng), u(rng), u(rng), u(rng)};
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(principal_stresses(tensors[i++ & 1023]));
  }
}
BENCHMARK(BM_PrincipalStresses3d);

void BM_AssembleElasticity(benchmark::State& state) {
  const Mesh mesh = build_mesh({-1500.0, 1500.0, -500.0, 500.0}, 25.0);
  const MaterialParams mat = rock();
  const NodalField alpha = NodalField::Constant(mesh.node_count(), 0.2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        assemble_elasticity(mesh, alpha, DamageModel::Isotropic, mat));
  }
}
BENCHMARK(BM_AssembleElasticity)->Unit(benchmark::kMillisecond);

void BM_ElasticSolve(benchmark::State& state) {
  const Mesh mesh = build_mesh({-1500.0, 1500.0, -500.0, 500.0}, 25.0);
  const MaterialParams mat = rock();
  const NodalField alpha = NodalField::Constant(mesh.node_count(), 0.2);
  const LinearSystem sys = assemble_elasticity(mesh, alpha, DamageModel::Isotropic, mat);
  const std::vector<FixedDof> fixed = dirichlet_dofs(
      mesh, boundary_constraints(mesh, BcMode::BottomClampedLateralRollers));
  const ReducedSystem red = apply_dirichlet(sys.matrix, sys.rhs, fixed);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_spd(red.matrix, red.rhs, 1e-10));
  }
}
BENCHMARK(BM_ElasticSolve)->Unit(benchmark::kMillisecond);

void BM_DamageSubproblem(benchmark::State& state) {
  const Mesh mesh = build_mesh({-1500.0, 1500.0, -500.0, 500.0}, 25.0);
  const MaterialParams mat = rock();
  const int n = mesh.node_count();
  const NodalField alpha = NodalField::Zero(n);
  const LinearSystem sys = assemble_elasticity(mesh, alpha, DamageModel::Isotropic, mat);
  const std::vector<FixedDof> fixed = dirichlet_dofs(
      mesh, boundary_constraints(mesh, BcMode::BottomClampedLateralRollers));
  const ReducedSystem red = apply_dirichlet(sys.matrix, sys.rhs, fixed);
  const NodalField u = red.expand(solve_spd(red.matrix, red.rhs, 1e-10).x);
  const DamageFunctional f(mesh, u, DamageModel::Isotropic, mat, alpha);
  const BoxConstraints box = f.irreversibility_bounds(alpha);
  MinimizeOptions opts;
  opts.scale = f.kkt_scale();
  for (auto _ : state) {
    benchmark::DoNotOptimize(minimize_box(f, box, alpha, opts));
  }
}
BENCHMARK(BM_DamageSubproblem)->Unit(benchmark::kMillisecond);

void BM_EvolutionStep(benchmark::State& state) {
  Config cfg;
  cfg.domain = {-300.0, 300.0, -100.0, 100.0};
  cfg.h = 10.0;
  cfg.ell = 30.0;
  cfg.w1 = 1e4;
  cfg.cavity = CavitySpec{-100.0, 20.0, 10.0, 0.0};
  cfg.steps = 0;
  const MaterialParams mat = cfg.material();
  State s;
  s.mesh = carve_cavity(build_mesh(cfg.domain, cfg.h), 0, cfg.cavity);
  s.u = NodalField::Zero(2 * s.mesh.node_count());
  s.alpha = NodalField::Zero(s.mesh.node_count());
  s.alpha_prev = s.alpha;
  alternate_minimization(s, cfg.model, mat, cfg.solver);
  for (auto _ : state) {
    benchmark::DoNotOptimize(advance_step(s, cfg.model, mat, cfg.cavity, cfg.solver));
  }
}
BENCHMARK(BM_EvolutionStep)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
