#include "sdls/ridge.hpp"

#include <cmath>
#include <sstream>

namespace sdls {

DesignSystem::DesignSystem(Eigen::MatrixXd A, Eigen::VectorXd b, double rho,
                           std::optional<EqualityConstraints> eq)
    : A_(std::move(A)), b_(std::move(b)), rho_(rho), eq_(std::move(eq)) {
  if (!(rho_ > 0.0) || !std::isfinite(rho_)) throw InputError("DesignSystem: rho must be > 0");
  if (A_.rows() < 1 || A_.cols() < 1) throw InputError("DesignSystem: A must be nonempty");
  if (b_.size() != A_.rows()) throw InputError("DesignSystem: length(b) != rows(A)");
  if (!A_.allFinite() || !b_.allFinite()) throw InputError("DesignSystem: non-finite data");
  if (eq_) {
    if (eq_->E.cols() != A_.cols() || eq_->E.rows() != eq_->d.size()) {
      throw InputError("DesignSystem: constraint dimensions do not match");
    }
    if (!eq_->E.allFinite() || !eq_->d.allFinite()) {
      throw InputError("DesignSystem: non-finite constraint data");
    }
  }
}

Eigen::MatrixXd DesignSystem::hessian() const {
  const double n = static_cast<double>(samples());
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim(), dim());
  h.selfadjointView<Eigen::Lower>().rankUpdate(A_.transpose(), 2.0 / n);
  h.triangularView<Eigen::StrictlyUpper>() = h.transpose();
  h.diagonal().array() += 2.0 * rho_;
  return h;
}

Eigen::VectorXd DesignSystem::linear_term() const {
  return (2.0 / static_cast<double>(samples())) * (A_.transpose() * b_);
}

double DesignSystem::residual_tolerance() const {
  return 1e-8 * (1.0 + (A_.transpose() * b_).norm());
}

KktSolver::KktSolver(Eigen::MatrixXd P, std::optional<EqualityConstraints> eq)
    : P_(std::move(P)), eq_(std::move(eq)) {
  if (P_.rows() != P_.cols()) throw InputError("KktSolver: P must be square");
  if (eq_ && eq_->E.rows() == 0) eq_.reset();
  if (!eq_) {
    p_chol_.compute(P_);
    if (p_chol_.info() != Eigen::Success) {
      throw NumericalError("KktSolver: Hessian is not positive definite", 0.0);
    }
    return;
  }
  const Eigen::MatrixXd& e = eq_->E;
  if (e.cols() != P_.rows() || e.rows() != eq_->d.size()) {
    throw InputError("KktSolver: constraint dimensions do not match");
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(e);
  if (qr.rank() < e.rows()) {
    std::ostringstream os;
    os << "KktSolver: constraint matrix has rank " << qr.rank() << " < " << e.rows() << " rows";
    throw InputError(os.str());
  }
  // Augmented shift: same optimum and multipliers on E x = d.
  shift_ = P_.diagonal().cwiseAbs().mean() / std::max(1.0, e.rowwise().squaredNorm().maxCoeff());
  if (!(shift_ > 0.0)) shift_ = 1.0;
  Eigen::MatrixXd aug = P_;
  aug.noalias() += shift_ * (e.transpose() * e);
  p_chol_.compute(aug);
  if (p_chol_.info() != Eigen::Success) {
    throw NumericalError("KktSolver: Hessian is not positive definite on the constraint set", 0.0);
  }
  p_inv_et_ = p_chol_.solve(e.transpose());
  Eigen::MatrixXd schur = e * p_inv_et_;
  schur = 0.5 * (schur + schur.transpose()).eval();
  schur_chol_.compute(schur);
  if (schur_chol_.info() != Eigen::Success) {
    throw NumericalError("KktSolver: Schur complement factorization failed", 0.0);
  }
}

// Solves [P E^T; E 0] [x; lam] = [r1; r2] through the shifted block P + shift E^T E.
Eigen::VectorXd KktSolver::solve_once(const Eigen::VectorXd& r1, const Eigen::VectorXd& r2,
                                      Eigen::VectorXd& multipliers) const {
  if (!eq_) {
    multipliers.resize(0);
    return p_chol_.solve(r1);
  }
  Eigen::VectorXd x = p_chol_.solve(r1 + shift_ * (eq_->E.transpose() * r2));
  multipliers = schur_chol_.solve(eq_->E * x - r2);
  x.noalias() -= p_inv_et_ * multipliers;
  return x;
}

KktSolver::Result KktSolver::solve(const Eigen::VectorXd& q) const {
  if (q.size() != P_.rows()) throw InputError("KktSolver::solve: dimension mismatch");
  const Eigen::VectorXd d = eq_ ? eq_->d : Eigen::VectorXd();

  Result out;
  out.x = solve_once(q, d, out.multipliers);

  auto residuals = [&](const Eigen::VectorXd& x, const Eigen::VectorXd& lam,
                       Eigen::VectorXd& r1, Eigen::VectorXd& r2) {
    r1 = q - P_ * x;
    if (eq_) {
      r1.noalias() -= eq_->E.transpose() * lam;
      r2 = d - eq_->E * x;
    } else {
      r2.resize(0);
    }
  };

  Eigen::VectorXd r1, r2;
  residuals(out.x, out.multipliers, r1, r2);
  Eigen::VectorXd dlam;
  out.x += solve_once(r1, r2, dlam);
  if (eq_) out.multipliers += dlam;
  residuals(out.x, out.multipliers, r1, r2);
  out.residual = std::sqrt(r1.squaredNorm() + r2.squaredNorm());
  return out;
}

double objective_value(const DesignSystem& sys, const Eigen::VectorXd& x) {
  if (x.size() != sys.dim()) throw InputError("objective_value: length(x) != p");
  const double n = static_cast<double>(sys.samples());
  return (sys.A() * x - sys.b()).squaredNorm() / n + sys.rho() * x.squaredNorm();
}

LsSolution solve_ridge(const DesignSystem& sys) {
  const KktSolver kkt(sys.hessian(), sys.constraints());
  auto res = kkt.solve(sys.linear_term());
  const double tol = sys.residual_tolerance();
  if (!(res.residual <= tol)) {
    std::ostringstream os;
    os << "solve_ridge: optimality residual " << res.residual << " exceeds " << tol;
    throw NumericalError(os.str(), res.residual);
  }
  LsSolution out;
  out.objective = objective_value(sys, res.x);
  out.x = std::move(res.x);
  out.residual_norm = res.residual;
  out.iterations = 1;
  return out;
}

LsSolution solve_ridge_iterative(const DesignSystem& sys, double tol, int max_iter) {
  if (sys.constraints()) {
    throw InputError("solve_ridge_iterative: equality constraints are not supported");
  }
  if (!(tol >= 0.0) || max_iter < 1) {
    throw InputError("solve_ridge_iterative: need tol >= 0 and max_iter >= 1");
  }
  const double scale = 2.0 / static_cast<double>(sys.samples());
  const double shift = 2.0 * sys.rho();
  auto apply = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
    return scale * (sys.A().transpose() * (sys.A() * v)) + shift * v;
  };

  Eigen::VectorXd x = Eigen::VectorXd::Zero(sys.dim());
  Eigen::VectorXd r = sys.linear_term();
  Eigen::VectorXd p = r;
  double rr = r.squaredNorm();
  Eigen::VectorXd best = x;
  double best_res = std::sqrt(rr);

  int k = 0;
  for (; k < max_iter; ++k) {
    if (std::sqrt(rr) <= tol) {
      return {x, objective_value(sys, x), std::sqrt(rr), k};
    }
    const Eigen::VectorXd ap = apply(p);
    const double alpha = rr / p.dot(ap);
    x += alpha * p;
    r = sys.linear_term() - apply(x);
    const double rr_new = r.squaredNorm();
    if (std::sqrt(rr_new) < best_res) {
      best_res = std::sqrt(rr_new);
      best = x;
    }
    p = r + (rr_new / rr) * p;
    rr = rr_new;
    if (rr == 0.0) {
      ++k;
      break;
    }
  }
  if (std::sqrt(rr) <= tol) {
    return {x, objective_value(sys, x), std::sqrt(rr), k};
  }
  std::ostringstream os;
  os << "solve_ridge_iterative: no convergence in " << max_iter << " iterations (residual "
     << best_res << ")";
  throw IterationLimitError(os.str(), best_res, std::move(best));
}

}  // namespace sdls
