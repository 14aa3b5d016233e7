#include "cavesim/solver.hpp"

#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cavesim {

namespace {

double relative_residual(const SparseMatrix& K, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& b) {
  const double bnorm = b.norm();
  if (bnorm == 0.0) return (K * x).norm();
  return (K * x - b).norm() / bnorm;
}

}  // namespace

SpdSolveResult solve_spd(const SparseMatrix& K, const Eigen::VectorXd& b,
                         double tol) {
  if (K.rows() != K.cols() || K.rows() != b.size()) {
    throw std::invalid_argument("solve_spd: dimension mismatch");
  }
  const Eigen::Index n = K.rows();
  SpdSolveResult res;
  if (n == 0) {
    res.x.resize(0);
    res.converged = true;
    return res;
  }
  res.x = Eigen::VectorXd::Zero(n);
  if (b.norm() == 0.0) {
    res.converged = true;
    return res;
  }

  Eigen::SimplicialLDLT<SparseMatrix> ldlt(K);
  if (ldlt.info() == Eigen::Success) {
    res.x = ldlt.solve(b);
    res.relative_residual = relative_residual(K, res.x, b);
    if (res.relative_residual <= tol) {
      res.converged = true;
      return res;
    }
  }

  // Jacobi-preconditioned CG refinement from the best point so far.
  Eigen::VectorXd inv_diag(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double d = K.coeff(i, i);
    inv_diag[i] = d > 0.0 ? 1.0 / d : 1.0;
  }
  Eigen::VectorXd r = b - K * res.x;
  Eigen::VectorXd z = inv_diag.cwiseProduct(r);
  Eigen::VectorXd p = z;
  double rz = r.dot(z);
  const double bnorm = b.norm();
  const int max_iter = static_cast<int>(std::max<Eigen::Index>(1000, 4 * n));
  int it = 0;
  for (; it < max_iter; ++it) {
    if (r.norm() <= tol * bnorm) break;
    const Eigen::VectorXd Kp = K * p;
    const double pKp = p.dot(Kp);
    if (!(pKp > 0.0)) break;  // not SPD or stagnation
    const double a = rz / pKp;
    res.x += a * p;
    r -= a * Kp;
    z = inv_diag.cwiseProduct(r);
    const double rz_new = r.dot(z);
    p = z + (rz_new / rz) * p;
    rz = rz_new;
  }
  res.iterations = it;
  res.relative_residual = relative_residual(K, res.x, b);
  res.converged = res.relative_residual <= tol;
  return res;
}

KktReport evaluate_kkt(const BoxConstraints& box, const Eigen::VectorXd& x,
                       const Eigen::VectorXd& grad, const Eigen::VectorXd& scale,
                       double tol) {
  KktReport rep;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (!(box.upper[i] - box.lower[i] > 0.0)) continue;  // pinned variable
    const double gs = grad[i] / scale[i];
    if (x[i] <= box.lower[i]) {
      rep.max_bound_violation = std::max(rep.max_bound_violation, -gs);
    } else if (x[i] >= box.upper[i]) {
      rep.max_bound_violation = std::max(rep.max_bound_violation, gs);
    } else {
      rep.max_interior_gradient = std::max(rep.max_interior_gradient, std::abs(gs));
    }
  }
  rep.max_bound_violation = std::max(rep.max_bound_violation, 0.0);
  rep.converged = rep.max_interior_gradient <= tol && rep.max_bound_violation <= tol;
  return rep;
}

namespace {

Eigen::VectorXd clamp_to_box(const BoxConstraints& box, const Eigen::VectorXd& x) {
  return x.cwiseMax(box.lower).cwiseMin(box.upper);
}

/// Newton direction on the free set from the assembled sparse Hessian. When
/// the reduced Hessian is not positive definite, a growing diagonal shift is
/// added until the factorization succeeds (modified Newton); the direction
/// then interpolates between Newton and scaled steepest descent and stays a
/// descent direction.
Eigen::VectorXd newton_direction_sparse(const SparseMatrix& H,
                                        const Eigen::VectorXd& grad,
                                        const Eigen::Array<bool, Eigen::Dynamic, 1>& free) {
  const Eigen::Index n = grad.size();
  std::vector<int> full_to_free(n, -1);
  std::vector<int> free_dofs;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (free[i]) {
      full_to_free[i] = static_cast<int>(free_dofs.size());
      free_dofs.push_back(static_cast<int>(i));
    }
  }
  const Eigen::Index nf = static_cast<Eigen::Index>(free_dofs.size());
  if (nf == 0) return Eigen::VectorXd::Zero(n);

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(H.nonZeros()));
  for (int col = 0; col < H.outerSize(); ++col) {
    const int fc = full_to_free[col];
    if (fc == -1) continue;
    for (SparseMatrix::InnerIterator it(H, col); it; ++it) {
      const int fr = full_to_free[it.row()];
      if (fr != -1) triplets.emplace_back(fr, fc, it.value());
    }
  }
  SparseMatrix Hff(nf, nf);
  Hff.setFromTriplets(triplets.begin(), triplets.end());

  Eigen::VectorXd gf(nf);
  for (Eigen::Index i = 0; i < nf; ++i) gf[i] = grad[free_dofs[i]];

  SparseMatrix identity(nf, nf);
  identity.setIdentity();
  const double diag_scale = Hff.diagonal().cwiseAbs().maxCoeff();
  double shift = 0.0;
  for (int attempt = 0; attempt < 30; ++attempt) {
    const SparseMatrix shifted = shift > 0.0 ? SparseMatrix(Hff + shift * identity) : Hff;
    Eigen::SimplicialLDLT<SparseMatrix> ldlt(shifted);
    if (ldlt.info() == Eigen::Success && (ldlt.vectorD().array() > 0.0).all()) {
      const Eigen::VectorXd df = ldlt.solve(-gf);
      Eigen::VectorXd d = Eigen::VectorXd::Zero(n);
      for (Eigen::Index i = 0; i < nf; ++i) d[free_dofs[i]] = df[i];
      return d;
    }
    shift = shift > 0.0 ? 10.0 * shift : 1e-8 * std::max(diag_scale, 1e-300);
  }
  return Eigen::VectorXd();
}

/// Truncated Jacobi-preconditioned CG for H d = -g restricted to the free
/// set. Stops at negative curvature and returns the progress so far; a first
/// iteration hitting negative curvature yields d = 0.
Eigen::VectorXd newton_direction(const BoxObjective& f, const Eigen::VectorXd& x,
                                 const Eigen::VectorXd& grad,
                                 const Eigen::Array<bool, Eigen::Dynamic, 1>& free,
                                 const Eigen::VectorXd& diag) {
  const Eigen::Index n = x.size();
  Eigen::VectorXd d = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd r(n);
  for (Eigen::Index i = 0; i < n; ++i) r[i] = free[i] ? -grad[i] : 0.0;
  const double r0 = r.norm();
  if (r0 == 0.0) return d;

  Eigen::VectorXd precond(n);
  const double dmax = diag.maxCoeff();
  const double floor = std::max(1e-12 * std::max(dmax, 0.0), 1e-300);
  for (Eigen::Index i = 0; i < n; ++i) {
    precond[i] = 1.0 / std::max(diag[i], floor);
  }

  Eigen::VectorXd z = precond.cwiseProduct(r);
  Eigen::VectorXd p = z;
  Eigen::VectorXd Hp(n);
  double rz = r.dot(z);
  const int max_iter = static_cast<int>(std::min<Eigen::Index>(n, 500));
  for (int it = 0; it < max_iter; ++it) {
    f.hessian_product(x, p, Hp);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!free[i]) Hp[i] = 0.0;
    }
    const double pHp = p.dot(Hp);
    if (!(pHp > 0.0)) break;  // negative curvature: keep partial direction
    const double a = rz / pHp;
    d += a * p;
    r -= a * Hp;
    if (r.norm() <= 1e-10 * r0) break;
    z = precond.cwiseProduct(r);
    const double rz_new = r.dot(z);
    p = z + (rz_new / rz) * p;
    rz = rz_new;
  }
  return d;
}

}  // namespace

MinimizeResult minimize_box(const BoxObjective& objective,
                            const BoxConstraints& box,
                            const Eigen::VectorXd& start,
                            const MinimizeOptions& options) {
  const Eigen::Index n = objective.size();
  if (box.lower.size() != n || box.upper.size() != n || start.size() != n) {
    throw std::invalid_argument("minimize_box: dimension mismatch");
  }
  if (((box.upper - box.lower).array() < 0.0).any()) {
    throw std::invalid_argument("minimize_box: lower bound exceeds upper bound");
  }
  const Eigen::VectorXd scale =
      options.scale.size() == n ? options.scale : Eigen::VectorXd::Ones(n);
  if ((scale.array() <= 0.0).any()) {
    throw std::invalid_argument("minimize_box: scale must be positive");
  }

  MinimizeResult res;
  Eigen::VectorXd x = clamp_to_box(box, start);
  double fx = objective.value(x);
  Eigen::VectorXd g(n);
  objective.gradient(x, g);
  Eigen::VectorXd diag(n);
  res.objective_history.push_back(fx);

  constexpr double armijo = 1e-4;
  constexpr int max_backtracks = 40;
  double pg_step = 0.0;  // retained projected-gradient step length

  Eigen::Array<bool, Eigen::Dynamic, 1> free(n);
  int iter = 0;
  for (; iter < options.max_iter; ++iter) {
    KktReport kkt = evaluate_kkt(box, x, g, scale, options.tol);
    if (kkt.converged) {
      kkt.iterations = iter;
      res.x = std::move(x);
      res.report = kkt;
      res.objective = fx;
      return res;
    }

    for (Eigen::Index i = 0; i < n; ++i) {
      const bool pinned = !(box.upper[i] - box.lower[i] > 0.0);
      const bool at_lower = x[i] <= box.lower[i];
      const bool at_upper = x[i] >= box.upper[i];
      free[i] = !pinned && ((!at_lower && !at_upper) || (at_lower && g[i] < 0.0) ||
                            (at_upper && g[i] > 0.0));
    }
    objective.hessian_diagonal(x, diag);

    bool accepted = false;
    Eigen::VectorXd x_new;
    double f_new = fx;

    // Sufficient-decrease test with a floating-point noise floor: near the
    // minimizer the remaining improvement drops below eps * |f| and a strict
    // Armijo comparison would reject on roundoff alone.
    const auto acceptable = [&](double ft, double pred) {
      const double noise = 16.0 * std::numeric_limits<double>::epsilon() *
                           (std::abs(fx) + std::abs(ft));
      return ft - fx <= armijo * pred + noise;
    };

    // Newton step on the inactive set; exact when the objective can
    // assemble its Hessian, truncated CG otherwise.
    Eigen::VectorXd d;
    SparseMatrix H;
    if (objective.sparse_hessian(x, H)) {
      d = newton_direction_sparse(H, g, free);
      if (d.size() == 0) d = Eigen::VectorXd::Zero(n);  // safeguard fallback
    } else {
      d = newton_direction(objective, x, g, free, diag);
    }
    if (d.dot(g) < 0.0) {
      double s = 1.0;
      for (int bt = 0; bt < max_backtracks; ++bt) {
        Eigen::VectorXd xt = clamp_to_box(box, x + s * d);
        const double pred = g.dot(xt - x);
        if (pred < 0.0) {
          const double ft = objective.value(xt);
          if (acceptable(ft, pred)) {
            x_new = std::move(xt);
            f_new = ft;
            accepted = true;
            break;
          }
        }
        s *= 0.5;
      }
    }

    if (!accepted) {
      // Projected-gradient fallback with backtracking.
      double t = pg_step;
      if (!(t > 0.0)) {
        const double dmax = diag.maxCoeff();
        t = dmax > 0.0 ? 1.0 / dmax : 1.0;
      }
      for (int bt = 0; bt < max_backtracks; ++bt) {
        Eigen::VectorXd xt = clamp_to_box(box, x - t * g);
        const double pred = g.dot(xt - x);
        if (pred < 0.0) {
          const double ft = objective.value(xt);
          if (acceptable(ft, pred)) {
            x_new = std::move(xt);
            f_new = ft;
            accepted = true;
            pg_step = 2.0 * t;
            break;
          }
        }
        t *= 0.5;
      }
      if (!accepted) break;  // no descent possible at this scale
    }

    x = std::move(x_new);
    fx = f_new;
    objective.gradient(x, g);
    res.objective_history.push_back(fx);
  }

  KktReport kkt = evaluate_kkt(box, x, g, scale, options.tol);
  kkt.iterations = iter;
  res.x = std::move(x);
  res.report = kkt;
  res.objective = fx;
  return res;
}

}  // namespace cavesim
