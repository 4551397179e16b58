#pragma once

#include <Eigen/Dense>

#include <chrono>
#include <vector>

#include "sdls/lmi.hpp"
#include "sdls/ridge.hpp"
#include "sdls/spectral.hpp"

namespace sdls {

/// Full problem: the ridge cost of `sys` subject to Lambda(map(x)) in `box`.
struct SdlsProblem {
  DesignSystem sys;
  LmiMap map;
  SpectralBox box;

  /// Throws InputError if map.n() != sys.dim().
  SdlsProblem(DesignSystem s, LmiMap m, SpectralBox b);
};

struct AdmmConfig {
  double penalty = 1.0;
  double tol_primal = 1e-7;
  double tol_dual = 1e-7;
  int max_iter = 5000;

  void validate() const;
};

struct AdmmResult {
  Eigen::VectorXd x;
  SymMat Z;
  int iterations = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double objective = 0.0;
  std::chrono::duration<double> wall_time{0.0};
};

class AdmmNonConvergence : public NumericalError {
 public:
  AdmmNonConvergence(const std::string& what, AdmmResult partial)
      : NumericalError(what, partial.primal_residual), partial_(std::move(partial)) {}
  const AdmmResult& partial() const { return partial_; }

 private:
  AdmmResult partial_;
};

/// Scaled-form ADMM on the splitting F(x) = Z, Lambda(Z) in box:
///   x <- argmin cost(x) + penalty/2 ||F(x) - Z + U||_F^2   (linear KKT solve)
///   Z <- project_spectral_box(F(x) + U)
///   U <- U + F(x) - Z
/// Starts from the relaxed (unconstrained-spectrum) optimum with U = 0.
/// `penalty` is relative: the working value is penalty * tr(P) / tr(G^T G),
/// with P the cost Hessian and G the vectorized LMI basis, so the default of 1
/// balances both terms whatever the data scale. Stops when
/// ||F(x) - Z||_F <= tol_primal and (working penalty) ||dZ||_F <= tol_dual.
/// An empty feasible set or an infeasible interplay between the box and the
/// equality constraints shows up as AdmmNonConvergence.
AdmmResult solve_admm(const SdlsProblem& prob, const AdmmConfig& cfg);

struct TimingRecord {
  std::vector<double> relaxed_ms;
  std::vector<double> sdls_ms;
  double relaxed_median_ms = 0.0;
  double sdls_median_ms = 0.0;
  int admm_iterations = 0;
};

/// Wall-clock comparison of solve_ridge and solve_admm on the same data,
/// `repetitions` runs each, medians reported.
TimingRecord time_solvers(const SdlsProblem& prob, const AdmmConfig& cfg, int repetitions);

double median(std::vector<double> values);

}  // namespace sdls
