#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <array>
#include <vector>

#include "cavesim/constitutive.hpp"
#include "cavesim/material.hpp"
#include "cavesim/mesh.hpp"
#include "cavesim/solver.hpp"

namespace cavesim {

/// Values per mesh node: scalar fields have length N, displacement fields
/// length 2N with (ux, uy) interleaved.
using NodalField = Eigen::VectorXd;

/// Multiplicative floor on the degradation used in stiffness assembly only;
/// keeps the elasticity matrix positive definite at full damage. The damage
/// functional itself is never floored.
inline constexpr double kResidualStiffness = 1e-6;

struct LinearSystem {
  SparseMatrix matrix;  // 2N x 2N, symmetric
  Eigen::VectorXd rhs;  // gravity body force
};

/// Stiffness of the model's stress law with element-averaged damage and
/// one-point quadrature (P1 constant strain), plus the consistent gravity
/// load rho g over active elements.
LinearSystem assemble_elasticity(const Mesh& mesh, const NodalField& alpha,
                                 DamageModel model, const MaterialParams& mat);

/// A single prescribed displacement component at a node.
struct DirichletConstraint {
  int node = -1;
  int comp = 0;  // 0 = x, 1 = y
  double value = 0.0;
};

/// A fixed scalar degree of freedom in an assembled system.
struct FixedDof {
  int dof = -1;
  double value = 0.0;
};

enum class BcMode {
  BottomClampedLateralRollers,  // u = 0 on the bottom, u_x = 0 on the sides
  BottomAndLateralClamped,
};

/// Constraints realizing the far-field conditions: bottom edge clamped,
/// lateral edges horizontal rollers (or clamped); top and cavity boundaries
/// are traction-free and carry no constraint.
std::vector<DirichletConstraint> boundary_constraints(const Mesh& mesh, BcMode mode);

/// Expands nodal constraints to fixed displacement dofs and appends zero pins
/// for every node outside the active region, so carved-out unknowns never
/// enter a solve. Throws on a constraint at an inactive node or two
/// constraints with conflicting values.
std::vector<FixedDof> dirichlet_dofs(const Mesh& mesh,
                                     const std::vector<DirichletConstraint>& constraints);

/// Symmetric elimination of fixed dofs from K x = b.
struct ReducedSystem {
  SparseMatrix matrix;
  Eigen::VectorXd rhs;
  std::vector<int> free_dofs;        // reduced index -> full dof
  Eigen::VectorXd fixed_values;      // full-size, zero at free dofs

  Eigen::VectorXd expand(const Eigen::VectorXd& reduced) const;
  Eigen::VectorXd restrict_to_free(const Eigen::VectorXd& full) const;
  /// 1/2 x'Kx - b'x of the reduced quadratic form.
  double quadratic_energy(const Eigen::VectorXd& reduced) const;
};

ReducedSystem apply_dirichlet(const SparseMatrix& K, const Eigen::VectorXd& b,
                              const std::vector<FixedDof>& fixed);

struct EquilibriumResidual {
  double absolute = 0.0;  // ||K(alpha) u - b|| over free dofs
  double relative = 0.0;  // absolute / ||b|| over free dofs
};

EquilibriumResidual equilibrium_residual(const Mesh& mesh, const NodalField& u,
                                         const NodalField& alpha, DamageModel model,
                                         const MaterialParams& mat,
                                         const std::vector<FixedDof>& fixed);

/// Discrete damage energy at frozen displacement:
///   sum_e area_e [ density(model, eps_e, abar_e) + w(abar_e) ]
///   + 1/2 w1 ell^2 integral |grad alpha|^2,
/// with element-averaged damage abar_e and the constant P1 gradient. Value,
/// gradient and Hessian products share the per-element strain data computed
/// once at construction.
class DamageFunctional : public BoxObjective {
 public:
  DamageFunctional(const Mesh& mesh, const NodalField& u, DamageModel model,
                   const MaterialParams& mat, const NodalField& alpha_prev);

  int size() const override { return node_count_; }
  double value(const Eigen::VectorXd& alpha) const override;
  void gradient(const Eigen::VectorXd& alpha, Eigen::VectorXd& grad) const override;
  void hessian_product(const Eigen::VectorXd& alpha, const Eigen::VectorXd& v,
                       Eigen::VectorXd& out) const override;
  void hessian_diagonal(const Eigen::VectorXd& alpha, Eigen::VectorXd& diag) const override;
  bool sparse_hessian(const Eigen::VectorXd& alpha, SparseMatrix& H) const override;

  struct Parts {
    double elastic = 0.0;
    double local_dissipation = 0.0;
    double gradient_dissipation = 0.0;
  };
  Parts parts(const Eigen::VectorXd& alpha) const;

  const NodalField& lower_bound() const { return alpha_prev_; }
  /// Bounds implementing irreversibility: alpha_prev <= alpha <= 1 on active
  /// nodes, pinned at the current value elsewhere.
  BoxConstraints irreversibility_bounds(const NodalField& alpha_current) const;
  /// Natural per-node gradient scale, w1 times the lumped nodal area.
  Eigen::VectorXd kkt_scale() const;

 private:
  struct ElementData {
    std::array<int, 3> nodes;
    double area = 0.0;
    double offset = 0.0;
    double factor = 0.0;
  };

  int node_count_ = 0;
  DamageModel model_;
  double w1_ = 0.0;
  NodalField alpha_prev_;
  std::vector<ElementData> elements_;
  std::vector<std::uint8_t> node_active_;
  SparseMatrix grad_matrix_;        // w1 ell^2 \int grad phi_i . grad phi_j
  Eigen::VectorXd lumped_area_;
};

}  // namespace cavesim
