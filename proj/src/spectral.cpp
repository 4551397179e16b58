#include "sdls/spectral.hpp"

#include <cmath>
#include <iostream>
#include <sstream>

#include "sdls/errors.hpp"

namespace sdls {

namespace {

Eigen::MatrixXd average_with_transpose(const Eigen::MatrixXd& m, double& asymmetry) {
  if (m.rows() != m.cols()) {
    throw InputError("SymMat: matrix must be square");
  }
  if (!m.allFinite()) {
    throw InputError("SymMat: non-finite entry");
  }
  asymmetry = m.size() == 0 ? 0.0 : (m - m.transpose()).cwiseAbs().maxCoeff();
  Eigen::MatrixXd out(m.rows(), m.cols());
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      out(i, j) = 0.5 * (m(i, j) + m(j, i));
    }
  }
  return out;
}

}  // namespace

SymMat::SymMat(Eigen::Index dim) : m_(Eigen::MatrixXd::Zero(dim, dim)) {
  if (dim < 0) throw InputError("SymMat: negative dimension");
}

SymMat::SymMat(const Eigen::MatrixXd& m) {
  m_ = average_with_transpose(m, ingest_asymmetry_);
  const double scale = m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
  if (ingest_asymmetry_ > 1e-12 * scale) {
    std::cerr << "warning: symmetrizing matrix with asymmetry " << ingest_asymmetry_
              << " (max entry " << scale << ")\n";
  }
}

SymMat SymMat::symmetrize(const Eigen::MatrixXd& m) {
  SymMat out;
  out.m_ = average_with_transpose(m, out.ingest_asymmetry_);
  return out;
}

SymMat SymMat::identity(Eigen::Index dim) {
  SymMat out(dim);
  out.m_.setIdentity();
  return out;
}

SymMat SymMat::diagonal(const Eigen::VectorXd& d) {
  if (!d.allFinite()) throw InputError("SymMat: non-finite entry");
  SymMat out(d.size());
  out.m_.diagonal() = d;
  return out;
}

SymMat& SymMat::operator+=(const SymMat& other) {
  if (other.dim() != dim()) throw InputError("SymMat: dimension mismatch");
  m_ += other.m_;
  return *this;
}

SymMat& SymMat::operator-=(const SymMat& other) {
  if (other.dim() != dim()) throw InputError("SymMat: dimension mismatch");
  m_ -= other.m_;
  return *this;
}

SymMat& SymMat::operator*=(double s) {
  if (!std::isfinite(s)) throw InputError("SymMat: non-finite scale");
  m_ *= s;
  return *this;
}

SpectralBox::SpectralBox(double lower_bound, double upper_bound)
    : lower(lower_bound), upper(upper_bound) {
  if (std::isnan(lower) || std::isnan(upper) || lower > upper) {
    std::ostringstream os;
    os << "SpectralBox: need lower <= upper, got [" << lower << ", " << upper << "]";
    throw InputError(os.str());
  }
}

EigenDecomposition eig_sym(const SymMat& m) {
  const Eigen::MatrixXd& a = m.matrix();
  if (!a.allFinite()) throw InputError("eig_sym: non-finite entry");
  const Eigen::Index n = a.rows();
  if (n == 0) return {Eigen::VectorXd(0), Eigen::MatrixXd(0, 0)};

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a, Eigen::ComputeEigenvectors);
  const double scale = 1.0 + a.norm();
  if (solver.info() != Eigen::Success) {
    throw NumericalError("eig_sym: eigensolver did not converge", scale);
  }
  EigenDecomposition out{solver.eigenvalues(), solver.eigenvectors()};

  const Eigen::MatrixXd& v = out.eigenvectors;
  const double recon =
      (v * out.eigenvalues.asDiagonal() * v.transpose() - a).norm();
  const double ortho =
      (v.transpose() * v - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
  const double residual = std::max(recon / scale, ortho);
  if (!(residual <= kReconstructionTol)) {
    throw NumericalError("eig_sym: reconstruction residual above tolerance", residual);
  }
  return out;
}

std::pair<double, double> lambda_extremes(const SymMat& m) {
  if (m.dim() == 0) throw InputError("lambda_extremes: empty matrix");
  const auto ed = eig_sym(m);
  return {ed.eigenvalues(0), ed.eigenvalues(ed.eigenvalues.size() - 1)};
}

SymMat project_spectral_box(const SymMat& m, const SpectralBox& box) {
  const auto ed = eig_sym(m);
  const Eigen::VectorXd clipped =
      ed.eigenvalues.unaryExpr([&box](double v) { return box.clamp(v); });
  const Eigen::MatrixXd& v = ed.eigenvectors;
  return SymMat::symmetrize(v * clipped.asDiagonal() * v.transpose());
}

bool spectrum_in_box(const SymMat& m, const SpectralBox& box, double tol) {
  if (!(tol >= 0.0)) throw InputError("spectrum_in_box: tol must be >= 0");
  const auto [lo, hi] = lambda_extremes(m);
  return lo >= box.lower - tol && hi <= box.upper + tol;
}

}  // namespace sdls
