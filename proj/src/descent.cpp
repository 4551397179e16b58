#include "sdls/descent.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sdls/csv.hpp"

namespace sdls {

double contraction_factor(const SymMat& Qhat, double gamma) {
  const auto [lo, hi] = lambda_extremes(Qhat);
  return std::max(std::abs(1.0 - gamma * lo), std::abs(1.0 - gamma * hi));
}

DescentTrace run_descent(const SymMat& Qhat, const Eigen::VectorXd& chat,
                         const Eigen::VectorXd& target_xstar, const DescentConfig& cfg) {
  const Eigen::Index n = Qhat.dim();
  if (chat.size() != n || target_xstar.size() != n || cfg.x0.size() != n) {
    throw InputError("run_descent: dimension mismatch");
  }
  if (!(cfg.gamma > 0.0)) throw InputError("run_descent: gamma must be > 0");
  if (cfg.max_iter < 0) throw InputError("run_descent: max_iter must be >= 0");

  DescentTrace trace;
  trace.contraction_factor = contraction_factor(Qhat, cfg.gamma);
  const long stride = std::max<long>(1, (cfg.max_iter + 999) / 1000);

  auto record = [&](long k, const Eigen::VectorXd& x, double step) {
    trace.steps.push_back(k);
    trace.iterates.push_back(x);
    trace.errors_to_target.push_back((x - target_xstar).norm());
    trace.step_norms.push_back(step);
  };

  const Eigen::MatrixXd& q = Qhat.matrix();
  Eigen::VectorXd x = cfg.x0;
  Eigen::VectorXd next(n);
  record(0, x, 0.0);
  long k = 0;
  double step = 0.0;
  while (k < cfg.max_iter) {
    next.noalias() = x - cfg.gamma * (q * x + chat);
    step = (next - x).norm();
    const double xnorm = x.norm();
    x.swap(next);
    ++k;
    const bool done = step <= 1e-12 * (1.0 + xnorm);
    const double norm = x.norm();
    if (!std::isfinite(norm) || norm > cfg.divergence_guard) {
      record(k, x, step);
      trace.iterations = k;
      trace.final_error = trace.errors_to_target.back();
      std::ostringstream os;
      os << "run_descent: iterate norm " << norm << " exceeded guard " << cfg.divergence_guard
         << " at step " << k;
      throw DivergenceError(os.str(), norm, std::move(trace));
    }
    if (done || k <= 1000 || k % stride == 0 || k == cfg.max_iter) record(k, x, step);
    if (done) {
      trace.converged = true;
      break;
    }
  }
  trace.iterations = k;
  trace.final_error = (x - target_xstar).norm();
  return trace;
}

double step_size_bound(double L, double epsilon) {
  if (!(L + epsilon > 0.0)) throw InputError("step_size_bound: need L + epsilon > 0");
  return 2.0 / (L + epsilon);
}

double error_ball_bound(const SymMat& Q, const SymMat& Qhat, const Eigen::VectorXd& c,
                        const Eigen::VectorXd& chat, const Eigen::VectorXd& xstar, double gamma) {
  if (Q.dim() != Qhat.dim() || c.size() != Q.dim() || chat.size() != Q.dim() ||
      xstar.size() != Q.dim()) {
    throw InputError("error_ball_bound: dimension mismatch");
  }
  if (!(gamma > 0.0)) throw InputError("error_ball_bound: gamma must be > 0");
  const double q = contraction_factor(Qhat, gamma);
  if (!(q < 1.0)) {
    std::ostringstream os;
    os << "error_ball_bound: contraction factor " << q << " >= 1";
    throw InputError(os.str());
  }
  const auto [lo, hi] = lambda_extremes(Q - Qhat);
  const double dq = std::max(std::abs(lo), std::abs(hi));
  return gamma * (dq * xstar.norm() + (c - chat).norm()) / (1.0 - q);
}

std::string to_csv(const DescentTrace& trace) {
  std::ostringstream os;
  os << "k,error,step_norm\n";
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    os << trace.steps[i] << ',' << csv::format(trace.errors_to_target[i]) << ','
       << csv::format(trace.step_norms[i]) << '\n';
  }
  return os.str();
}

}  // namespace sdls
