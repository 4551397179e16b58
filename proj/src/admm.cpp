#include "sdls/admm.hpp"

#include <algorithm>
#include <sstream>

namespace sdls {

SdlsProblem::SdlsProblem(DesignSystem s, LmiMap m, SpectralBox b)
    : sys(std::move(s)), map(std::move(m)), box(b) {
  if (map.n() != sys.dim()) throw InputError("SdlsProblem: map.n() != sys.dim()");
}

void AdmmConfig::validate() const {
  if (!(penalty > 0.0) || !(tol_primal > 0.0) || !(tol_dual > 0.0) || max_iter < 1) {
    throw InputError("AdmmConfig: penalty, tolerances and max_iter must be positive");
  }
}

AdmmResult solve_admm(const SdlsProblem& prob, const AdmmConfig& cfg) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();

  const Eigen::MatrixXd g = prob.map.vectorized_basis();
  const Eigen::Index ell = prob.map.ell();
  const Eigen::VectorXd f0 = prob.map.offset().matrix().reshaped();
  const Eigen::VectorXd q0 = prob.sys.linear_term();
  Eigen::MatrixXd hess = prob.sys.hessian();

  AdmmResult res;
  res.x = KktSolver(hess, prob.sys.constraints()).solve(q0).x;

  const Eigen::MatrixXd gtg = g.transpose() * g;
  const double pen = cfg.penalty * hess.trace() / std::max(gtg.trace(), 1e-300);
  hess.noalias() += pen * gtg;
  const KktSolver kkt(std::move(hess), prob.sys.constraints());

  res.Z = project_spectral_box(prob.map.evaluate(res.x), prob.box);
  Eigen::MatrixXd u = Eigen::MatrixXd::Zero(ell, ell);

  for (int k = 1; k <= cfg.max_iter; ++k) {
    const Eigen::VectorXd target = (res.Z.matrix() - u).reshaped() - f0;
    res.x = kkt.solve(q0 + pen * (g.transpose() * target)).x;

    const SymMat fx = prob.map.evaluate(res.x);
    SymMat z_new = project_spectral_box(SymMat::symmetrize(fx.matrix() + u), prob.box);
    u += fx.matrix() - z_new.matrix();

    res.primal_residual = (fx - z_new).frobenius_norm();
    res.dual_residual = pen * (z_new - res.Z).frobenius_norm();
    res.Z = std::move(z_new);
    res.iterations = k;
    if (res.primal_residual <= cfg.tol_primal && res.dual_residual <= cfg.tol_dual) {
      res.objective = objective_value(prob.sys, res.x);
      res.wall_time = std::chrono::steady_clock::now() - start;
      return res;
    }
  }

  res.objective = objective_value(prob.sys, res.x);
  res.wall_time = std::chrono::steady_clock::now() - start;
  std::ostringstream os;
  os << "solve_admm: no convergence in " << cfg.max_iter << " iterations (primal "
     << res.primal_residual << ", dual " << res.dual_residual << ")";
  throw AdmmNonConvergence(os.str(), std::move(res));
}

double median(std::vector<double> values) {
  if (values.empty()) throw InputError("median: empty input");
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

TimingRecord time_solvers(const SdlsProblem& prob, const AdmmConfig& cfg, int repetitions) {
  if (repetitions < 1) throw InputError("time_solvers: repetitions must be >= 1");
  using Ms = std::chrono::duration<double, std::milli>;
  TimingRecord rec;
  (void)solve_ridge(prob.sys);
  (void)solve_admm(prob, cfg);
  for (int r = 0; r < repetitions; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto relaxed = solve_ridge(prob.sys);
    const auto t1 = std::chrono::steady_clock::now();
    const auto full = solve_admm(prob, cfg);
    const auto t2 = std::chrono::steady_clock::now();
    rec.relaxed_ms.push_back(Ms(t1 - t0).count());
    rec.sdls_ms.push_back(Ms(t2 - t1).count());
    rec.admm_iterations = full.iterations;
    (void)relaxed;
  }
  rec.relaxed_median_ms = median(rec.relaxed_ms);
  rec.sdls_median_ms = median(rec.sdls_ms);
  return rec;
}

}  // namespace sdls
