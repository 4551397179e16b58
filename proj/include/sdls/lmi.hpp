#pragma once

#include <Eigen/Dense>

#include <vector>

#include "sdls/spectral.hpp"

namespace sdls {

/// Affine symmetric-matrix map x -> F0 + sum_k x_k F_k.
class LmiMap {
 public:
  /// Throws InputError if the basis is empty or any dimension disagrees with F0.
  LmiMap(SymMat offset, std::vector<SymMat> basis);

  Eigen::Index ell() const { return offset_.dim(); }
  Eigen::Index n() const { return static_cast<Eigen::Index>(basis_.size()); }
  const SymMat& offset() const { return offset_; }
  const std::vector<SymMat>& basis() const { return basis_; }

  /// F0 + sum_k x_k F_k. Exactly symmetric.
  SymMat evaluate(const Eigen::VectorXd& x) const;

  /// Linear part only: sum_k x_k F_k.
  SymMat evaluate_linear(const Eigen::VectorXd& x) const;

  /// ell^2 x n matrix whose column k is vec(F_k) (column-major).
  Eigen::MatrixXd vectorized_basis() const;

 private:
  SymMat offset_;
  std::vector<SymMat> basis_;
};

/// lambda_max of H = [F_1; ...; F_n][F_1 ... F_n]. Computed as
/// lambda_max(sum_k F_k^2), which shares the nonzero spectrum of H.
/// F0 does not enter.
double h_lambda_max(const LmiMap& map);

}  // namespace sdls
