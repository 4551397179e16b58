#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "sdls/errors.hpp"
#include "sdls/ridge.hpp"

using sdls::DesignSystem;

namespace {

Eigen::MatrixXd gaussian(std::mt19937_64& rng, int r, int c) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = g(rng);
  return m;
}

Eigen::VectorXd gradient(const DesignSystem& sys, const Eigen::VectorXd& x) {
  return (2.0 / sys.samples()) * sys.A().transpose() * (sys.A() * x - sys.b()) + 2 * sys.rho() * x;
}

}  // namespace

TEST(DesignSystem, Validates) {
  EXPECT_THROW(DesignSystem(Eigen::MatrixXd::Ones(2, 2), Eigen::VectorXd::Ones(2), 0.0),
               sdls::InputError);
  EXPECT_THROW(DesignSystem(Eigen::MatrixXd::Ones(2, 2), Eigen::VectorXd::Ones(3), 1.0),
               sdls::InputError);
}

TEST(SolveRidge, ScalarCalculus) {
  const DesignSystem sys(Eigen::MatrixXd::Ones(1, 1), Eigen::VectorXd::Constant(1, 2.0), 1.0);
  const auto sol = sdls::solve_ridge(sys);
  EXPECT_NEAR(sol.x(0), 1.0, 1e-15);
  EXPECT_NEAR(sol.objective, 2.0, 1e-15);
}

TEST(SolveRidge, ZeroRhsGivesZero) {
  std::mt19937_64 rng(1);
  const DesignSystem sys(gaussian(rng, 6, 4), Eigen::VectorXd::Zero(6), 0.3);
  EXPECT_EQ(sdls::solve_ridge(sys).x.norm(), 0.0);
}

TEST(SolveRidge, MatchesExplicitInverse) {
  std::mt19937_64 rng(2);
  const DesignSystem sys(gaussian(rng, 5, 3), gaussian(rng, 5, 1).col(0), 0.7);
  const auto sol = sdls::solve_ridge(sys);
  const Eigen::VectorXd ref = oracle::ridge_by_inverse(sys);
  EXPECT_LE((sol.x - ref).norm(), 1e-8 * (1 + ref.norm()));
}

TEST(SolveRidge, ConstrainedMatchesKktInverseAndIsFeasible) {
  std::mt19937_64 rng(3);
  sdls::EqualityConstraints eq{gaussian(rng, 2, 6), gaussian(rng, 2, 1).col(0)};
  const DesignSystem sys(gaussian(rng, 9, 6), gaussian(rng, 9, 1).col(0), 0.2, eq);
  const auto sol = sdls::solve_ridge(sys);
  EXPECT_LE((sol.x - oracle::ridge_by_inverse(sys)).norm(), 1e-8);
  EXPECT_LE((eq.E * sol.x - eq.d).norm(), 1e-10);
  // Gradient lies in the row space of E.
  const Eigen::VectorXd g = gradient(sys, sol.x);
  const Eigen::VectorXd lam = eq.E.transpose().colPivHouseholderQr().solve(-g);
  EXPECT_LE((g + eq.E.transpose() * lam).norm(), sys.residual_tolerance());
}

TEST(SolveRidge, RankDeficientConstraintsRejected) {
  std::mt19937_64 rng(4);
  Eigen::MatrixXd e(2, 3);
  e << 1, 2, 3, 2, 4, 6;
  const DesignSystem sys(gaussian(rng, 5, 3), gaussian(rng, 5, 1).col(0), 1.0,
                         sdls::EqualityConstraints{e, Eigen::Vector2d(0, 0)});
  EXPECT_THROW(sdls::solve_ridge(sys), sdls::InputError);
}

TEST(SolveRidge, OptimalityResidualAndDeterminism) {
  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 20; ++rep) {
    const int n = 1 + rep * 3, p = 1 + rep % 9;
    const DesignSystem sys(gaussian(rng, n, p), gaussian(rng, n, 1).col(0), 0.01 + 0.1 * rep);
    const auto a = sdls::solve_ridge(sys);
    const auto b = sdls::solve_ridge(sys);
    EXPECT_LE(gradient(sys, a.x).norm(), sys.residual_tolerance());
    EXPECT_LE(a.residual_norm, sys.residual_tolerance());
    EXPECT_LE((a.x - b.x).norm(), 1e-12);
  }
}

TEST(ObjectiveValue, Examples) {
  std::mt19937_64 rng(6);
  const DesignSystem sys(gaussian(rng, 4, 3), gaussian(rng, 4, 1).col(0), 0.5);
  EXPECT_NEAR(sdls::objective_value(sys, Eigen::VectorXd::Zero(3)), sys.b().squaredNorm() / 4,
              1e-15);

  const int p = 4;
  const DesignSystem id(Eigen::MatrixXd::Identity(p, p), Eigen::VectorXd::Zero(p), 1.0);
  EXPECT_NEAR(sdls::objective_value(id, Eigen::VectorXd::Unit(p, 0)), 1.0 / p + 1.0, 1e-15);
  EXPECT_THROW(sdls::objective_value(id, Eigen::VectorXd::Zero(3)), sdls::InputError);
}

TEST(ObjectiveValue, OptimumBeatsRandomPerturbations) {
  std::mt19937_64 rng(7);
  const DesignSystem sys(gaussian(rng, 12, 5), gaussian(rng, 12, 1).col(0), 0.3);
  const auto sol = sdls::solve_ridge(sys);
  EXPECT_NEAR(sol.objective, oracle::objective_loops(sys, sol.x), 1e-12);
  std::normal_distribution<double> g(0.0, 0.1);
  for (int k = 0; k < 100; ++k) {
    Eigen::VectorXd probe = sol.x;
    for (Eigen::Index j = 0; j < probe.size(); ++j) probe(j) += g(rng);
    EXPECT_LE(sol.objective, oracle::objective_loops(sys, probe));
  }
}

TEST(SolveRidgeIterative, IdentityConvergesInOneStep) {
  std::mt19937_64 rng(8);
  const DesignSystem sys(Eigen::MatrixXd::Identity(6, 6), gaussian(rng, 6, 1).col(0), 0.4);
  const auto sol = sdls::solve_ridge_iterative(sys, 1e-12, 50);
  EXPECT_LE(sol.iterations, 1);
  EXPECT_LE((sol.x - sdls::solve_ridge(sys).x).norm(), 1e-12);
}

TEST(SolveRidgeIterative, AgreesWithDirectSolve) {
  std::mt19937_64 rng(2);
  const DesignSystem sys(gaussian(rng, 5, 3), gaussian(rng, 5, 1).col(0), 0.7);
  const auto it = sdls::solve_ridge_iterative(sys, 1e-12, 100);
  EXPECT_LE((it.x - sdls::solve_ridge(sys).x).norm(), 1e-8);
  EXPECT_LE(it.residual_norm, 1e-12);
}

TEST(SolveRidgeIterative, UnreachableToleranceReportsBestIterate) {
  std::mt19937_64 rng(9);
  const DesignSystem sys(gaussian(rng, 30, 10), gaussian(rng, 30, 1).col(0), 0.1);
  try {
    sdls::solve_ridge_iterative(sys, 0.0, 3);
    FAIL() << "expected IterationLimitError";
  } catch (const sdls::IterationLimitError& e) {
    EXPECT_TRUE(std::isfinite(e.residual()));
    EXPECT_GT(e.residual(), 0.0);
    EXPECT_EQ(e.best_iterate().size(), 10);
  }
}

TEST(SolveRidgeIterative, RejectsConstraints) {
  const DesignSystem sys(Eigen::MatrixXd::Identity(2, 2), Eigen::VectorXd::Ones(2), 1.0,
                         sdls::EqualityConstraints{Eigen::MatrixXd::Ones(1, 2),
                                                   Eigen::VectorXd::Zero(1)});
  EXPECT_THROW(sdls::solve_ridge_iterative(sys, 1e-8, 10), sdls::InputError);
}
