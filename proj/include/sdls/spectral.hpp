#pragma once

#include <Eigen/Dense>

#include <utility>

namespace sdls {

/// Relative tolerance used for eigendecomposition reconstruction checks.
inline constexpr double kReconstructionTol = 1e-10;

/// Dense real symmetric matrix. Symmetry holds bit-for-bit: any input is
/// replaced by (M + M^T) / 2 on construction.
class SymMat {
 public:
  SymMat() = default;
  explicit SymMat(Eigen::Index dim);
  /// Symmetrizes `m`. Prints a warning to stderr when the asymmetry exceeds
  /// 1e-12 * max|m_ij|. Throws InputError on non-square or non-finite input.
  explicit SymMat(const Eigen::MatrixXd& m);

  /// Same symmetrization as the constructor but silent; for callers that
  /// expect asymmetric input and report it themselves.
  static SymMat symmetrize(const Eigen::MatrixXd& m);
  static SymMat identity(Eigen::Index dim);
  static SymMat zero(Eigen::Index dim) { return SymMat(dim); }
  static SymMat diagonal(const Eigen::VectorXd& d);

  Eigen::Index dim() const { return m_.rows(); }
  double operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }
  const Eigen::MatrixXd& matrix() const { return m_; }

  /// Max |m_ij - m_ji| of the matrix handed to the constructor.
  double ingest_asymmetry() const { return ingest_asymmetry_; }

  SymMat& operator+=(const SymMat& other);
  SymMat& operator-=(const SymMat& other);
  SymMat& operator*=(double s);
  friend SymMat operator+(SymMat a, const SymMat& b) { return a += b; }
  friend SymMat operator-(SymMat a, const SymMat& b) { return a -= b; }
  friend SymMat operator*(double s, SymMat a) { return a *= s; }

  double frobenius_norm() const { return m_.norm(); }

 private:
  Eigen::MatrixXd m_;
  double ingest_asymmetry_ = 0.0;
};

/// Closed interval [m, L] that the spectrum is constrained to.
struct SpectralBox {
  double lower = 0.0;
  double upper = 0.0;

  SpectralBox() = default;
  /// Throws InputError unless lower <= upper and both are not NaN.
  SpectralBox(double lower_bound, double upper_bound);

  double clamp(double v) const { return v < lower ? lower : (v > upper ? upper : v); }
};

struct EigenDecomposition {
  Eigen::VectorXd eigenvalues;   // ascending
  Eigen::MatrixXd eigenvectors;  // column k pairs with eigenvalues(k)
};

/// Symmetric eigendecomposition with residual verification.
/// Throws NumericalError if the solver fails or the reconstruction or
/// orthogonality residual exceeds kReconstructionTol * (1 + ||M||_F).
EigenDecomposition eig_sym(const SymMat& m);

/// Returns (lambda_min, lambda_max).
std::pair<double, double> lambda_extremes(const SymMat& m);

/// Frobenius-nearest matrix whose spectrum lies in `box` (eigenvalue clipping).
SymMat project_spectral_box(const SymMat& m, const SpectralBox& box);

/// True iff lambda_min >= lower - tol and lambda_max <= upper + tol.
bool spectrum_in_box(const SymMat& m, const SpectralBox& box, double tol);

}  // namespace sdls
