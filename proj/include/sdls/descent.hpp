#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "sdls/errors.hpp"
#include "sdls/spectral.hpp"

namespace sdls {

struct DescentConfig {
  double gamma = 0.1;
  long max_iter = 10000;
  Eigen::VectorXd x0;
  double divergence_guard = 1e12;
};

struct DescentTrace {
  std::vector<long> steps;  // iteration index k of each stored checkpoint
  std::vector<Eigen::VectorXd> iterates;
  std::vector<double> errors_to_target;  // ||x_k - x*||
  std::vector<double> step_norms;        // ||x_k - x_{k-1}||, 0 for k = 0
  double contraction_factor = 0.0;       // ||I - gamma Qhat||_2
  double final_error = 0.0;
  long iterations = 0;
  bool converged = false;
};

class DivergenceError : public NumericalError {
 public:
  DivergenceError(const std::string& what, double norm, DescentTrace trace)
      : NumericalError(what, norm), trace_(std::move(trace)) {}
  const DescentTrace& trace() const { return trace_; }

 private:
  DescentTrace trace_;
};

/// x_{k+1} = x_k - gamma (Qhat x_k + chat), started at cfg.x0.
/// Stops after max_iter steps or once ||x_{k+1} - x_k|| <= 1e-12 (1 + ||x_k||).
/// Throws DivergenceError when ||x_k|| exceeds cfg.divergence_guard.
/// The first 1000 iterates are stored; beyond that every
/// ceil(max_iter / 1000)-th one (plus the last).
DescentTrace run_descent(const SymMat& Qhat, const Eigen::VectorXd& chat,
                         const Eigen::VectorXd& target_xstar, const DescentConfig& cfg);

/// 2 / (L + epsilon), the step size ceiling. The contraction argument also
/// needs m - epsilon > 0, i.e. lambda_min(Qhat) > 0, which the caller must
/// establish separately. Throws InputError if L + epsilon <= 0.
double step_size_bound(double L, double epsilon);

/// gamma (||Q - Qhat||_2 ||x*|| + ||c - chat||) / (1 - ||I - gamma Qhat||_2),
/// the limit of the error recursion. Throws InputError when the contraction
/// factor is >= 1.
double error_ball_bound(const SymMat& Q, const SymMat& Qhat, const Eigen::VectorXd& c,
                        const Eigen::VectorXd& chat, const Eigen::VectorXd& xstar, double gamma);

/// CSV with header k,error,step_norm, one line per stored checkpoint.
std::string to_csv(const DescentTrace& trace);

/// ||I - gamma Qhat||_2.
double contraction_factor(const SymMat& Qhat, double gamma);

}  // namespace sdls
