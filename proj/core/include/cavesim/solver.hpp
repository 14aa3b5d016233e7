#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <vector>

namespace cavesim {

using SparseMatrix = Eigen::SparseMatrix<double>;

struct SpdSolveResult {
  Eigen::VectorXd x;
  double relative_residual = 0.0;
  int iterations = 0;  // refinement iterations; 0 for a pure direct solve
  bool converged = false;
};

/// Solves K x = b for symmetric positive definite K to the requested relative
/// residual. Sparse Cholesky first; if the factorization fails or falls short
/// of the tolerance, Jacobi-preconditioned conjugate gradients refine the
/// result. Non-convergence is reported with the achieved residual, never
/// thrown.
SpdSolveResult solve_spd(const SparseMatrix& K, const Eigen::VectorXd& b,
                         double tol);

/// Nodewise box alpha_lower <= x <= alpha_upper. Entries with
/// lower == upper are pinned and excluded from optimality checks.
struct BoxConstraints {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
};

/// First-order optimality certificate for the box-constrained minimizer.
/// Gradients are measured against a per-variable positive scale, so both
/// maxima are dimensionless and comparable with the tolerance.
struct KktReport {
  double max_interior_gradient = 0.0;
  double max_bound_violation = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Smooth objective over a box; the minimizer needs values, gradients and
/// Hessian products. hessian_diagonal is only a preconditioning hint.
/// Objectives that can assemble their sparse Hessian should override
/// sparse_hessian; the minimizer then takes exact Newton steps on the
/// inactive set instead of truncated matrix-free ones.
class BoxObjective {
 public:
  virtual ~BoxObjective() = default;
  virtual int size() const = 0;
  virtual double value(const Eigen::VectorXd& x) const = 0;
  virtual void gradient(const Eigen::VectorXd& x, Eigen::VectorXd& grad) const = 0;
  virtual void hessian_product(const Eigen::VectorXd& x, const Eigen::VectorXd& v,
                               Eigen::VectorXd& out) const = 0;
  virtual void hessian_diagonal(const Eigen::VectorXd& x, Eigen::VectorXd& diag) const {
    (void)x;
    diag = Eigen::VectorXd::Ones(size());
  }
  virtual bool sparse_hessian(const Eigen::VectorXd& x, SparseMatrix& H) const {
    (void)x;
    (void)H;
    return false;
  }
};

struct MinimizeOptions {
  double tol = 1e-6;        // on the scaled KKT residual
  int max_iter = 500;
  Eigen::VectorXd scale;    // per-variable gradient scale; empty means ones
};

struct MinimizeResult {
  Eigen::VectorXd x;
  KktReport report;
  double objective = 0.0;
  std::vector<double> objective_history;  // accepted iterates, non-increasing
};

/// Projected gradient descent with backtracking, accelerated by Newton steps
/// on the inactive set (truncated preconditioned CG on the reduced Hessian,
/// aborted on negative curvature). Iterates stay inside the box exactly and
/// the objective never increases. Returns the best iterate with
/// converged = false when the KKT tolerance is not reached.
MinimizeResult minimize_box(const BoxObjective& objective,
                            const BoxConstraints& box,
                            const Eigen::VectorXd& start,
                            const MinimizeOptions& options = {});

/// Scaled KKT residuals of a feasible point: interior gradient magnitude and
/// violation of the sign conditions at active bounds.
KktReport evaluate_kkt(const BoxConstraints& box, const Eigen::VectorXd& x,
                       const Eigen::VectorXd& grad, const Eigen::VectorXd& scale,
                       double tol);

}  // namespace cavesim
