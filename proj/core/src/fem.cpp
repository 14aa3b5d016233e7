#include "cavesim/fem.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

namespace cavesim {

namespace {

double element_average(const Eigen::VectorXd& alpha, const std::array<int, 3>& n) {
  const double mean = (alpha[n[0]] + alpha[n[1]] + alpha[n[2]]) / 3.0;
  return std::clamp(mean, 0.0, 1.0);
}

SymTensor2 element_strain(const NodalField& u, const std::array<int, 3>& n,
                          const std::array<Vec2, 3>& grad) {
  SymTensor2 eps;
  for (int k = 0; k < 3; ++k) {
    const double ux = u[2 * n[k]];
    const double uy = u[2 * n[k] + 1];
    eps.xx += grad[k].x * ux;
    eps.yy += grad[k].y * uy;
    eps.xy += 0.5 * (grad[k].y * ux + grad[k].x * uy);
  }
  return eps;
}

}  // namespace

LinearSystem assemble_elasticity(const Mesh& mesh, const NodalField& alpha,
                                 DamageModel model, const MaterialParams& mat) {
  const int n_nodes = mesh.node_count();
  if (alpha.size() != n_nodes) {
    throw std::invalid_argument("assemble_elasticity: alpha size mismatch");
  }
  LinearSystem sys;
  sys.rhs = Eigen::VectorXd::Zero(2 * n_nodes);

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(mesh.active_tri_count()) * 36);

  for (int t = 0; t < mesh.tri_count(); ++t) {
    if (!mesh.tri_active[t]) continue;
    const auto& tri = mesh.tris[t];
    const P1Geometry geom = p1_geometry(mesh, t);
    const double abar = element_average(alpha, tri);
    const double a_eff = std::max(degradation(abar).a, kResidualStiffness);
    const VoigtMatrix C = voigt_stiffness(model, a_eff, mat);

    // B rows: (eps_xx, eps_yy, gamma_xy) from the 6 nodal dofs.
    double B[3][6] = {};
    for (int k = 0; k < 3; ++k) {
      B[0][2 * k] = geom.grad[k].x;
      B[1][2 * k + 1] = geom.grad[k].y;
      B[2][2 * k] = geom.grad[k].y;
      B[2][2 * k + 1] = geom.grad[k].x;
    }
    double CB[3][6];
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 6; ++c) {
        CB[r][c] = C[r][0] * B[0][c] + C[r][1] * B[1][c] + C[r][2] * B[2][c];
      }
    }
    double Ke[6][6];
    for (int r = 0; r < 6; ++r) {
      for (int c = r; c < 6; ++c) {
        double v = 0.0;
        for (int m = 0; m < 3; ++m) v += B[m][r] * CB[m][c];
        v *= geom.area;
        Ke[r][c] = v;
        Ke[c][r] = v;  // exact symmetry by construction
      }
    }

    int dofs[6];
    for (int k = 0; k < 3; ++k) {
      dofs[2 * k] = 2 * tri[k];
      dofs[2 * k + 1] = 2 * tri[k] + 1;
    }
    for (int r = 0; r < 6; ++r) {
      for (int c = 0; c < 6; ++c) {
        triplets.emplace_back(dofs[r], dofs[c], Ke[r][c]);
      }
    }

    const double mass = mat.density * geom.area / 3.0;
    for (int k = 0; k < 3; ++k) {
      sys.rhs[2 * tri[k]] += mass * mat.gravity.x;
      sys.rhs[2 * tri[k] + 1] += mass * mat.gravity.y;
    }
  }

  sys.matrix.resize(2 * n_nodes, 2 * n_nodes);
  sys.matrix.setFromTriplets(triplets.begin(), triplets.end());
  return sys;
}

std::vector<DirichletConstraint> boundary_constraints(const Mesh& mesh, BcMode mode) {
  const double tol = 1e-9 * std::max(mesh.domain.width(), mesh.domain.height());
  std::vector<DirichletConstraint> out;
  for (int n = 0; n < mesh.node_count(); ++n) {
    const Vec2 p = mesh.nodes[n];
    const bool lateral = std::abs(p.x - mesh.domain.xmin) < tol ||
                         std::abs(p.x - mesh.domain.xmax) < tol;
    const bool bottom = std::abs(p.y - mesh.domain.ymin) < tol;
    if (bottom) {
      out.push_back({n, 0, 0.0});
      out.push_back({n, 1, 0.0});
    } else if (lateral) {
      out.push_back({n, 0, 0.0});
      if (mode == BcMode::BottomAndLateralClamped) out.push_back({n, 1, 0.0});
    }
  }
  return out;
}

std::vector<FixedDof> dirichlet_dofs(const Mesh& mesh,
                                     const std::vector<DirichletConstraint>& constraints) {
  std::map<int, double> fixed;
  for (const DirichletConstraint& c : constraints) {
    if (c.node < 0 || c.node >= mesh.node_count() || c.comp < 0 || c.comp > 1) {
      throw std::invalid_argument("dirichlet_dofs: constraint out of range");
    }
    if (!mesh.node_active[c.node]) {
      throw std::invalid_argument("dirichlet_dofs: constraint on inactive node " +
                                  std::to_string(c.node));
    }
    const int dof = 2 * c.node + c.comp;
    const auto [it, inserted] = fixed.emplace(dof, c.value);
    if (!inserted && it->second != c.value) {
      throw std::invalid_argument("dirichlet_dofs: conflicting values at dof " +
                                  std::to_string(dof));
    }
  }
  for (int n = 0; n < mesh.node_count(); ++n) {
    if (!mesh.node_active[n]) {
      fixed.emplace(2 * n, 0.0);
      fixed.emplace(2 * n + 1, 0.0);
    }
  }
  std::vector<FixedDof> out;
  out.reserve(fixed.size());
  for (const auto& [dof, value] : fixed) out.push_back({dof, value});
  return out;
}

Eigen::VectorXd ReducedSystem::expand(const Eigen::VectorXd& reduced) const {
  Eigen::VectorXd full = fixed_values;
  for (std::size_t i = 0; i < free_dofs.size(); ++i) {
    full[free_dofs[i]] = reduced[static_cast<Eigen::Index>(i)];
  }
  return full;
}

Eigen::VectorXd ReducedSystem::restrict_to_free(const Eigen::VectorXd& full) const {
  Eigen::VectorXd out(static_cast<Eigen::Index>(free_dofs.size()));
  for (std::size_t i = 0; i < free_dofs.size(); ++i) {
    out[static_cast<Eigen::Index>(i)] = full[free_dofs[i]];
  }
  return out;
}

double ReducedSystem::quadratic_energy(const Eigen::VectorXd& reduced) const {
  return 0.5 * reduced.dot(matrix * reduced) - rhs.dot(reduced);
}

ReducedSystem apply_dirichlet(const SparseMatrix& K, const Eigen::VectorXd& b,
                              const std::vector<FixedDof>& fixed) {
  const Eigen::Index n = K.rows();
  std::vector<int> full_to_free(n, 0);
  Eigen::VectorXd fixed_values = Eigen::VectorXd::Zero(n);
  for (const FixedDof& f : fixed) {
    if (f.dof < 0 || f.dof >= n) {
      throw std::invalid_argument("apply_dirichlet: dof out of range");
    }
    if (full_to_free[f.dof] == -1 && fixed_values[f.dof] != f.value) {
      throw std::invalid_argument("apply_dirichlet: conflicting values at dof " +
                                  std::to_string(f.dof));
    }
    full_to_free[f.dof] = -1;
    fixed_values[f.dof] = f.value;
  }

  ReducedSystem red;
  red.fixed_values = fixed_values;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (full_to_free[i] != -1) {
      full_to_free[i] = static_cast<int>(red.free_dofs.size());
      red.free_dofs.push_back(static_cast<int>(i));
    }
  }

  const Eigen::Index nf = static_cast<Eigen::Index>(red.free_dofs.size());
  red.rhs = red.restrict_to_free(b - K * fixed_values);

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(K.nonZeros()));
  for (int col = 0; col < K.outerSize(); ++col) {
    const int fc = full_to_free[col];
    if (fc == -1) continue;
    for (SparseMatrix::InnerIterator it(K, col); it; ++it) {
      const int fr = full_to_free[it.row()];
      if (fr == -1) continue;
      triplets.emplace_back(fr, fc, it.value());
    }
  }
  red.matrix.resize(nf, nf);
  red.matrix.setFromTriplets(triplets.begin(), triplets.end());
  return red;
}

EquilibriumResidual equilibrium_residual(const Mesh& mesh, const NodalField& u,
                                         const NodalField& alpha, DamageModel model,
                                         const MaterialParams& mat,
                                         const std::vector<FixedDof>& fixed) {
  const LinearSystem sys = assemble_elasticity(mesh, alpha, model, mat);
  Eigen::VectorXd r = sys.matrix * u - sys.rhs;
  Eigen::VectorXd b = sys.rhs;
  for (const FixedDof& f : fixed) {
    r[f.dof] = 0.0;
    b[f.dof] = 0.0;
  }
  EquilibriumResidual res;
  res.absolute = r.norm();
  const double bnorm = b.norm();
  res.relative = bnorm > 0.0 ? res.absolute / bnorm : res.absolute;
  return res;
}

DamageFunctional::DamageFunctional(const Mesh& mesh, const NodalField& u,
                                   DamageModel model, const MaterialParams& mat,
                                   const NodalField& alpha_prev)
    : node_count_(mesh.node_count()),
      model_(model),
      w1_(mat.w1),
      alpha_prev_(alpha_prev),
      node_active_(mesh.node_active) {
  if (u.size() != 2 * node_count_ || alpha_prev.size() != node_count_) {
    throw std::invalid_argument("DamageFunctional: field size mismatch");
  }
  lumped_area_ = Eigen::VectorXd::Zero(node_count_);
  std::vector<Eigen::Triplet<double>> triplets;
  const double grad_coeff = mat.w1 * mat.ell * mat.ell;

  elements_.reserve(static_cast<std::size_t>(mesh.active_tri_count()));
  for (int t = 0; t < mesh.tri_count(); ++t) {
    if (!mesh.tri_active[t]) continue;
    const auto& tri = mesh.tris[t];
    const P1Geometry geom = p1_geometry(mesh, t);
    const SymTensor2 eps = element_strain(u, tri, geom.grad);
    const EnergyCoefficients coeff = energy_coefficients(model, eps, mat);
    elements_.push_back({tri, geom.area, coeff.offset, coeff.factor});
    for (int i = 0; i < 3; ++i) {
      lumped_area_[tri[i]] += geom.area / 3.0;
      for (int j = 0; j < 3; ++j) {
        triplets.emplace_back(tri[i], tri[j],
                              grad_coeff * geom.area * dot(geom.grad[i], geom.grad[j]));
      }
    }
  }
  grad_matrix_.resize(node_count_, node_count_);
  grad_matrix_.setFromTriplets(triplets.begin(), triplets.end());
}

double DamageFunctional::value(const Eigen::VectorXd& alpha) const {
  double total = 0.5 * alpha.dot(grad_matrix_ * alpha);
  for (const ElementData& e : elements_) {
    const double abar = element_average(alpha, e.nodes);
    const DegradationShape s = degradation_shape(model_, abar);
    total += e.area * (e.offset + s.value * e.factor + w1_ * abar * abar);
  }
  return total;
}

void DamageFunctional::gradient(const Eigen::VectorXd& alpha, Eigen::VectorXd& grad) const {
  grad = grad_matrix_ * alpha;
  for (const ElementData& e : elements_) {
    const double abar = element_average(alpha, e.nodes);
    const DegradationShape s = degradation_shape(model_, abar);
    const double common = (s.d1 * e.factor + 2.0 * w1_ * abar) * e.area / 3.0;
    for (int k = 0; k < 3; ++k) grad[e.nodes[k]] += common;
  }
}

void DamageFunctional::hessian_product(const Eigen::VectorXd& alpha,
                                       const Eigen::VectorXd& v,
                                       Eigen::VectorXd& out) const {
  out = grad_matrix_ * v;
  for (const ElementData& e : elements_) {
    const double abar = element_average(alpha, e.nodes);
    const DegradationShape s = degradation_shape(model_, abar);
    const double vsum = v[e.nodes[0]] + v[e.nodes[1]] + v[e.nodes[2]];
    const double common = (s.d2 * e.factor + 2.0 * w1_) * e.area / 9.0 * vsum;
    for (int k = 0; k < 3; ++k) out[e.nodes[k]] += common;
  }
}

bool DamageFunctional::sparse_hessian(const Eigen::VectorXd& alpha,
                                      SparseMatrix& H) const {
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(elements_.size() * 9);
  for (const ElementData& e : elements_) {
    const double abar = element_average(alpha, e.nodes);
    const DegradationShape s = degradation_shape(model_, abar);
    const double common = (s.d2 * e.factor + 2.0 * w1_) * e.area / 9.0;
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        triplets.emplace_back(e.nodes[i], e.nodes[j], common);
      }
    }
  }
  H = grad_matrix_;
  SparseMatrix local(node_count_, node_count_);
  local.setFromTriplets(triplets.begin(), triplets.end());
  H += local;
  return true;
}

void DamageFunctional::hessian_diagonal(const Eigen::VectorXd& alpha,
                                        Eigen::VectorXd& diag) const {
  diag = grad_matrix_.diagonal();
  for (const ElementData& e : elements_) {
    const double abar = element_average(alpha, e.nodes);
    const DegradationShape s = degradation_shape(model_, abar);
    const double common = (s.d2 * e.factor + 2.0 * w1_) * e.area / 9.0;
    for (int k = 0; k < 3; ++k) diag[e.nodes[k]] += common;
  }
}

DamageFunctional::Parts DamageFunctional::parts(const Eigen::VectorXd& alpha) const {
  Parts p;
  p.gradient_dissipation = 0.5 * alpha.dot(grad_matrix_ * alpha);
  for (const ElementData& e : elements_) {
    const double abar = element_average(alpha, e.nodes);
    const DegradationShape s = degradation_shape(model_, abar);
    p.elastic += e.area * (e.offset + s.value * e.factor);
    p.local_dissipation += e.area * w1_ * abar * abar;
  }
  return p;
}

BoxConstraints DamageFunctional::irreversibility_bounds(const NodalField& alpha_current) const {
  BoxConstraints box;
  box.lower = alpha_prev_;
  box.upper = Eigen::VectorXd::Ones(node_count_);
  for (int n = 0; n < node_count_; ++n) {
    if (!node_active_[n]) {
      box.lower[n] = alpha_current[n];
      box.upper[n] = alpha_current[n];
    }
  }
  return box;
}

Eigen::VectorXd DamageFunctional::kkt_scale() const {
  Eigen::VectorXd scale(node_count_);
  for (int n = 0; n < node_count_; ++n) {
    scale[n] = node_active_[n] ? w1_ * lumped_area_[n] : 1.0;
  }
  return scale;
}

}  // namespace cavesim
