#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "sdls/errors.hpp"
#include "sdls/lmi.hpp"
#include "sdls/quadfit.hpp"

using sdls::LmiMap;
using sdls::SymMat;

namespace {

SymMat random_sym(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = g(rng);
  return SymMat::symmetrize(m);
}

LmiMap random_map(std::mt19937_64& rng, int ell, int n) {
  std::vector<SymMat> basis;
  for (int k = 0; k < n; ++k) basis.push_back(random_sym(rng, ell));
  return LmiMap(random_sym(rng, ell), std::move(basis));
}

Eigen::VectorXd random_vec(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g;
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = g(rng);
  return v;
}

}  // namespace

TEST(LmiMap, RejectsEmptyBasisAndMismatchedDims) {
  EXPECT_THROW(LmiMap(SymMat::zero(2), {}), sdls::InputError);
  EXPECT_THROW(LmiMap(SymMat::zero(2), {SymMat::identity(3)}), sdls::InputError);
}

TEST(LmiMap, EvaluateExamples) {
  std::mt19937_64 rng(1);
  const LmiMap map = random_map(rng, 3, 4);
  EXPECT_EQ(map.evaluate(Eigen::VectorXd::Zero(4)).matrix(), map.offset().matrix());

  const LmiMap scalar(SymMat::zero(2), {SymMat::identity(2)});
  EXPECT_EQ(scalar.evaluate(Eigen::VectorXd::Constant(1, 2.0)).matrix(),
            (2.0 * SymMat::identity(2)).matrix());
  EXPECT_THROW(scalar.evaluate(Eigen::VectorXd::Zero(2)), sdls::InputError);
}

TEST(LmiMap, QuadfitPackEvaluateRoundTrip) {
  Eigen::Matrix2d q;
  q << 1, 2, 2, 3;
  const SymMat qs{Eigen::MatrixXd(q)};
  for (auto param : {sdls::Parameterization::vec, sdls::Parameterization::vech}) {
    const auto xi = sdls::pack(qs, Eigen::Vector2d(7, -8), 9.0, param);
    EXPECT_EQ(sdls::quadfit_lmi(2, param).evaluate(xi).matrix(), Eigen::MatrixXd(q));
  }
}

TEST(LmiMap, EvaluateIsExactlySymmetric) {
  std::mt19937_64 rng(2);
  const LmiMap map = random_map(rng, 5, 7);
  const SymMat f = map.evaluate(random_vec(rng, 7));
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) EXPECT_EQ(f(i, j), f(j, i));
}

TEST(LmiMap, LinearPartIsLinear) {
  std::mt19937_64 rng(3);
  for (int rep = 0; rep < 20; ++rep) {
    const LmiMap map = random_map(rng, 4, 3);
    const Eigen::VectorXd x = random_vec(rng, 3), y = random_vec(rng, 3);
    const SymMat lhs = map.evaluate(x + y) - map.offset();
    const SymMat rhs = (map.evaluate(x) - map.offset()) + (map.evaluate(y) - map.offset());
    EXPECT_LE((lhs - rhs).frobenius_norm(), 1e-12 * (1 + lhs.frobenius_norm()));
  }
}

TEST(HLambdaMax, Examples) {
  EXPECT_NEAR(sdls::h_lambda_max(LmiMap(SymMat::zero(3), {SymMat::identity(3)})), 1.0, 1e-14);
  EXPECT_NEAR(sdls::h_lambda_max(LmiMap(SymMat::zero(3), {2.0 * SymMat::identity(3)})), 4.0,
              1e-13);
}

TEST(HLambdaMax, MatchesExplicitStackedMatrix) {
  std::mt19937_64 rng(4);
  for (int rep = 0; rep < 10; ++rep) {
    const LmiMap map = random_map(rng, 2 + rep % 4, 1 + rep % 5);
    const double h = sdls::h_lambda_max(map);
    EXPECT_NEAR(h, oracle::h_explicit(map), 1e-10 * (1 + h));
  }
}

TEST(HLambdaMax, QuadfitConstantsPerParameterization) {
  // Half-vectorization with basis E_ij + E_ji reproduces lambda_max(H) = n;
  // the symmetrized full-vec basis gives (n + 1) / 2.
  for (int n : {1, 2, 3, 5, 8}) {
    const auto vech = sdls::quadfit_lmi(n, sdls::Parameterization::vech);
    const auto vec = sdls::quadfit_lmi(n, sdls::Parameterization::vec);
    EXPECT_NEAR(sdls::h_lambda_max(vech), n, 1e-12);
    EXPECT_NEAR(sdls::h_lambda_max(vec), 0.5 * (n + 1), 1e-12);
    EXPECT_NEAR(oracle::h_explicit(vech), n, 1e-10);
    EXPECT_NEAR(oracle::h_explicit(vec), 0.5 * (n + 1), 1e-10);
  }
  EXPECT_NEAR(sdls::h_lambda_max(sdls::quadfit_lmi(3, sdls::Parameterization::vech)), 3.0, 1e-12);
}

TEST(HLambdaMax, InvariantToOffsetAndQuadraticInScale) {
  std::mt19937_64 rng(5);
  const LmiMap map = random_map(rng, 3, 4);
  const LmiMap shifted(random_sym(rng, 3), map.basis());
  EXPECT_NEAR(sdls::h_lambda_max(map), sdls::h_lambda_max(shifted), 1e-12);
  std::vector<SymMat> scaled;
  for (const auto& f : map.basis()) scaled.push_back(2.5 * f);
  EXPECT_NEAR(sdls::h_lambda_max(LmiMap(map.offset(), scaled)),
              6.25 * sdls::h_lambda_max(map), 1e-10);
}

TEST(HLambdaMax, BoundsSquaredDifference) {
  // lambda_max((F(x) - F(x'))^2) <= lambda_max(H) ||x - x'||^2.
  std::mt19937_64 rng(6);
  for (int rep = 0; rep < 100; ++rep) {
    const LmiMap map = random_map(rng, 1 + rep % 6, 1 + rep % 7);
    const Eigen::VectorXd x = random_vec(rng, map.n()), y = random_vec(rng, map.n());
    const Eigen::MatrixXd d = (map.evaluate(x) - map.evaluate(y)).matrix();
    const double lhs = sdls::lambda_extremes(SymMat::symmetrize(d * d)).second;
    EXPECT_LE(lhs, sdls::h_lambda_max(map) * (x - y).squaredNorm() * (1 + 1e-12) + 1e-14);
  }
}
