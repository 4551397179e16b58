#include "sdls/lmi.hpp"

#include <algorithm>

#include "sdls/errors.hpp"

namespace sdls {

LmiMap::LmiMap(SymMat offset, std::vector<SymMat> basis)
    : offset_(std::move(offset)), basis_(std::move(basis)) {
  if (basis_.empty()) throw InputError("LmiMap: basis must hold at least one matrix");
  for (const auto& f : basis_) {
    if (f.dim() != offset_.dim()) throw InputError("LmiMap: basis dimension mismatch");
  }
}

SymMat LmiMap::evaluate_linear(const Eigen::VectorXd& x) const {
  if (x.size() != n()) throw InputError("LmiMap::evaluate: length(x) != n");
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(ell(), ell());
  for (Eigen::Index k = 0; k < n(); ++k) {
    if (x(k) != 0.0) acc.noalias() += x(k) * basis_[k].matrix();
  }
  return SymMat(acc);
}

SymMat LmiMap::evaluate(const Eigen::VectorXd& x) const {
  return offset_ + evaluate_linear(x);
}

Eigen::MatrixXd LmiMap::vectorized_basis() const {
  const Eigen::Index l = ell();
  Eigen::MatrixXd g(l * l, n());
  for (Eigen::Index k = 0; k < n(); ++k) {
    g.col(k) = basis_[k].matrix().reshaped();
  }
  return g;
}

double h_lambda_max(const LmiMap& map) {
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(map.ell(), map.ell());
  for (const auto& f : map.basis()) {
    sum.noalias() += f.matrix() * f.matrix();
  }
  const auto [lo, hi] = lambda_extremes(SymMat::symmetrize(sum));
  (void)lo;
  return std::max(hi, 0.0);
}

}  // namespace sdls
