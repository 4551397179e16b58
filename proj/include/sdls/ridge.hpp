#pragma once

#include <Eigen/Dense>

#include <optional>

#include "sdls/errors.hpp"

namespace sdls {

/// Linear equality constraints E x = d.
struct EqualityConstraints {
  Eigen::MatrixXd E;
  Eigen::VectorXd d;
};

/// Data of the regularized least-squares problem
///   min_x (1/N) ||A x - b||^2 + rho ||x||^2   [s.t. E x = d].
/// The feasible set is either the whole space or an affine subspace; general
/// convex constraint sets are not supported.
class DesignSystem {
 public:
  DesignSystem(Eigen::MatrixXd A, Eigen::VectorXd b, double rho,
               std::optional<EqualityConstraints> eq = std::nullopt);

  const Eigen::MatrixXd& A() const { return A_; }
  const Eigen::VectorXd& b() const { return b_; }
  double rho() const { return rho_; }
  Eigen::Index samples() const { return A_.rows(); }
  Eigen::Index dim() const { return A_.cols(); }
  const std::optional<EqualityConstraints>& constraints() const { return eq_; }

  /// Hessian (2/N) A^T A + 2 rho I of the cost.
  Eigen::MatrixXd hessian() const;
  /// (2/N) A^T b, so that the gradient is hessian() * x - linear_term().
  Eigen::VectorXd linear_term() const;
  /// Optimality residual bound 1e-8 * (1 + ||A^T b||).
  double residual_tolerance() const;

 private:
  Eigen::MatrixXd A_;
  Eigen::VectorXd b_;
  double rho_;
  std::optional<EqualityConstraints> eq_;
};

struct LsSolution {
  Eigen::VectorXd x;
  double objective = 0.0;
  /// Norm of the stationarity (and, if constrained, feasibility) residual.
  double residual_norm = 0.0;
  int iterations = 0;
};

/// Solves  min 1/2 x^T P x - q^T x  s.t. E x = d, where P is positive
/// definite on the null space of E. The factorization is computed once and
/// reused for every right-hand side. Constraints go through the Schur
/// complement of the KKT system (after the shift P + s E^T E), followed by one
/// step of iterative refinement.
class KktSolver {
 public:
  /// Throws InputError if E is row-rank deficient and NumericalError if P is
  /// not numerically positive definite.
  KktSolver(Eigen::MatrixXd P, std::optional<EqualityConstraints> eq);

  struct Result {
    Eigen::VectorXd x;
    Eigen::VectorXd multipliers;  // empty when unconstrained
    double residual = 0.0;
  };

  Result solve(const Eigen::VectorXd& q) const;

 private:
  Eigen::VectorXd solve_once(const Eigen::VectorXd& r1, const Eigen::VectorXd& r2,
                             Eigen::VectorXd& multipliers) const;

  Eigen::MatrixXd P_;
  Eigen::LLT<Eigen::MatrixXd> p_chol_;
  std::optional<EqualityConstraints> eq_;
  double shift_ = 0.0;
  Eigen::MatrixXd p_inv_et_;  // (P + shift E^T E)^-1 E^T
  Eigen::LLT<Eigen::MatrixXd> schur_chol_;
};

/// (1/N) ||A x - b||^2 + rho ||x||^2.
double objective_value(const DesignSystem& sys, const Eigen::VectorXd& x);

/// Direct solve of the regularized normal equations (KKT system when
/// constrained). Throws NumericalError if the residual exceeds
/// sys.residual_tolerance().
LsSolution solve_ridge(const DesignSystem& sys);

/// Thrown by the iterative solver when max_iter is reached.
class IterationLimitError : public NumericalError {
 public:
  IterationLimitError(const std::string& what, double residual, Eigen::VectorXd best)
      : NumericalError(what, residual), best_(std::move(best)) {}
  const Eigen::VectorXd& best_iterate() const { return best_; }

 private:
  Eigen::VectorXd best_;
};

/// Conjugate gradients on the regularized normal equations, matrix-free in A.
/// Unconstrained systems only. Stops once ||grad|| <= tol.
LsSolution solve_ridge_iterative(const DesignSystem& sys, double tol, int max_iter);

}  // namespace sdls
