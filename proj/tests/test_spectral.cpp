#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "sdls/errors.hpp"
#include "sdls/spectral.hpp"

using sdls::SpectralBox;
using sdls::SymMat;

namespace {

SymMat random_sym(std::mt19937_64& rng, int n, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = g(rng);
  return SymMat::symmetrize(m);
}

SymMat mat2(double a, double b, double c) {
  Eigen::Matrix2d m;
  m << a, b, b, c;
  return SymMat(Eigen::MatrixXd(m));
}

}  // namespace

TEST(SymMat, SymmetrizesOnIngestExactly) {
  Eigen::MatrixXd m(3, 3);
  m << 1, 2, 3, 2.5, 4, 5, 3, 5.1, 6;
  const SymMat s = SymMat::symmetrize(m);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) EXPECT_EQ(s(i, j), s(j, i));
  EXPECT_DOUBLE_EQ(s(0, 1), 2.25);
  EXPECT_NEAR(s.ingest_asymmetry(), 0.5, 1e-15);
}

TEST(SymMat, RejectsNonFiniteAndNonSquare) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(2, 2);
  m(0, 1) = std::nan("");
  EXPECT_THROW(SymMat{m}, sdls::InputError);
  EXPECT_THROW(SymMat{Eigen::MatrixXd(2, 3)}, sdls::InputError);
}

TEST(SpectralBox, RejectsInvertedBounds) {
  EXPECT_THROW(SpectralBox(1.0, 0.0), sdls::InputError);
  EXPECT_NO_THROW(SpectralBox(1.0, 1.0));
}

TEST(EigSym, Identity) {
  const auto ed = sdls::eig_sym(SymMat::identity(3));
  EXPECT_TRUE(ed.eigenvalues.isApprox(Eigen::Vector3d::Ones()));
  EXPECT_LE((ed.eigenvectors.transpose() * ed.eigenvectors - Eigen::Matrix3d::Identity()).norm(),
            1e-12);
}

TEST(EigSym, DiagonalSortedAscending) {
  const auto ed = sdls::eig_sym(SymMat::diagonal(Eigen::Vector2d(3, -1)));
  EXPECT_DOUBLE_EQ(ed.eigenvalues(0), -1.0);
  EXPECT_DOUBLE_EQ(ed.eigenvalues(1), 3.0);
}

TEST(EigSym, TwoByTwoMatchesCharacteristicPolynomial) {
  const auto ed = sdls::eig_sym(mat2(2, 1, 2));
  const auto [l1, l2] = oracle::eig2(2, 1, 2);
  EXPECT_NEAR(ed.eigenvalues(0), l1, 1e-14);
  EXPECT_NEAR(ed.eigenvalues(1), l2, 1e-14);
  EXPECT_NEAR(l1, 1.0, 1e-15);
  EXPECT_NEAR(l2, 3.0, 1e-15);
  // Eigenvectors up to sign.
  const Eigen::Vector2d v1 = Eigen::Vector2d(1, -1) / std::sqrt(2.0);
  const Eigen::Vector2d v2 = Eigen::Vector2d(1, 1) / std::sqrt(2.0);
  EXPECT_NEAR(std::abs(ed.eigenvectors.col(0).dot(v1)), 1.0, 1e-14);
  EXPECT_NEAR(std::abs(ed.eigenvectors.col(1).dot(v2)), 1.0, 1e-14);
}

TEST(EigSym, ReconstructionResidualsUpToFifty) {
  std::mt19937_64 rng(7);
  for (int n : {1, 2, 5, 10, 25, 50}) {
    for (int rep = 0; rep < 5; ++rep) {
      const SymMat m = random_sym(rng, n, 3.0);
      const auto ed = sdls::eig_sym(m);
      const Eigen::MatrixXd& v = ed.eigenvectors;
      const double scale = 1.0 + m.frobenius_norm();
      EXPECT_LE((v * ed.eigenvalues.asDiagonal() * v.transpose() - m.matrix()).norm(),
                1e-10 * scale);
      EXPECT_LE((v.transpose() * v - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff(),
                1e-10 * scale);
      for (int k = 1; k < n; ++k) EXPECT_LE(ed.eigenvalues(k - 1), ed.eigenvalues(k));
    }
  }
}

TEST(LambdaExtremes, Examples) {
  auto [lo, hi] = sdls::lambda_extremes(SymMat::identity(2));
  EXPECT_DOUBLE_EQ(lo, 1.0);
  EXPECT_DOUBLE_EQ(hi, 1.0);
  std::tie(lo, hi) = sdls::lambda_extremes(SymMat::diagonal(Eigen::Vector3d(-2, 0, 5)));
  EXPECT_DOUBLE_EQ(lo, -2.0);
  EXPECT_DOUBLE_EQ(hi, 5.0);
  std::tie(lo, hi) = sdls::lambda_extremes(mat2(2, 1, 2));
  EXPECT_NEAR(lo, 1.0, 1e-14);
  EXPECT_NEAR(hi, 3.0, 1e-14);
}

TEST(ProjectSpectralBox, DiagonalClipping) {
  const SymMat p =
      sdls::project_spectral_box(SymMat::diagonal(Eigen::Vector2d(3, -1)), SpectralBox(0, 1));
  EXPECT_TRUE(p.matrix().isApprox(Eigen::Vector2d(1, 0).asDiagonal().toDenseMatrix(), 1e-14));
}

TEST(ProjectSpectralBox, InteriorPointUnchanged) {
  std::mt19937_64 rng(3);
  const SymMat m = random_sym(rng, 6);
  const auto [lo, hi] = sdls::lambda_extremes(m);
  const SymMat p = sdls::project_spectral_box(m, SpectralBox(lo - 0.1, hi + 0.1));
  EXPECT_LE((p - m).frobenius_norm(), 1e-10 * (1 + m.frobenius_norm()));
}

TEST(ProjectSpectralBox, TwoByTwoBothEigenvaluesClipToOne) {
  const SymMat p = sdls::project_spectral_box(mat2(2, 1, 2), SpectralBox(0, 1));
  EXPECT_LE((p.matrix() - Eigen::Matrix2d::Identity()).norm(), 1e-14);
}

TEST(ProjectSpectralBox, IdempotentAndNonexpansive) {
  std::mt19937_64 rng(11);
  const SpectralBox box(-0.5, 0.7);
  for (int rep = 0; rep < 50; ++rep) {
    const int n = 1 + rep % 8;
    const SymMat a = random_sym(rng, n), b = random_sym(rng, n);
    const SymMat pa = sdls::project_spectral_box(a, box);
    const SymMat pb = sdls::project_spectral_box(b, box);
    EXPECT_LE((sdls::project_spectral_box(pa, box) - pa).frobenius_norm(),
              1e-10 * (1 + pa.frobenius_norm()));
    EXPECT_LE((pa - pb).frobenius_norm(), (a - b).frobenius_norm() + 1e-12);
    EXPECT_TRUE(sdls::spectrum_in_box(pa, box, 1e-12));
  }
}

TEST(ProjectSpectralBox, BeatsBruteForceGridOnTwoByTwo) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int rep = 0; rep < 5; ++rep) {
    const SymMat m = mat2(u(rng), u(rng), u(rng));
    const double lo = -1.0 + 0.2 * rep, hi = lo + 1.5;
    const double d_proj =
        (sdls::project_spectral_box(m, SpectralBox(lo, hi)) - m).frobenius_norm();
    const double d_grid = oracle::nearest_in_box_2x2(m.matrix(), lo, hi);
    EXPECT_LE(d_proj, d_grid + 1e-12);
    EXPECT_NEAR(d_proj, d_grid, 1e-3);
  }
}

TEST(SpectrumInBox, Examples) {
  EXPECT_TRUE(sdls::spectrum_in_box(SymMat::identity(2), SpectralBox(0, 2), 0.0));
  EXPECT_FALSE(sdls::spectrum_in_box(SymMat::diagonal(Eigen::VectorXd::Constant(1, 3.0)),
                                     SpectralBox(0, 1), 0.0));
  EXPECT_TRUE(sdls::spectrum_in_box(SymMat::diagonal(Eigen::VectorXd::Constant(1, 1.05)),
                                    SpectralBox(0, 1), 0.1));
  EXPECT_THROW(sdls::spectrum_in_box(SymMat::identity(1), SpectralBox(0, 1), -1.0),
               sdls::InputError);
}
