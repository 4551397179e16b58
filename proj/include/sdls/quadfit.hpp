#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>

#include <json.hpp>

#include "sdls/lmi.hpp"
#include "sdls/ridge.hpp"
#include "sdls/spectral.hpp"

namespace sdls {

/// How the symmetric matrix block of the parameter vector is laid out.
///  vec:  xi = [vec(Q); c; r], n^2 + n + 1 entries, with equality constraints
///        Q_ij = Q_ji. LMI basis (E_ij + E_ji) / 2, lambda_max(H) = (n + 1) / 2.
///  vech: xi = [vech(Q); c; r], n(n+1)/2 + n + 1 entries (lower triangle,
///        column by column), no constraints. LMI basis E_ii and E_ij + E_ji,
///        lambda_max(H) = n.
enum class Parameterization { vec, vech };

std::string to_string(Parameterization p);
/// Accepts "vec" or "vech"; throws InputError otherwise.
Parameterization parse_parameterization(const std::string& s);

/// f(x) = x^T Q x + c^T x + r with Q positive semidefinite.
struct QuadModel {
  int n = 0;
  SymMat Q;
  Eigen::VectorXd c;
  double r = 0.0;
  std::uint64_t seed = 0;

  double operator()(const Eigen::VectorXd& x) const;
  /// Throws InputError on dimension mismatch or lambda_min(Q) < -1e-10.
  void validate() const;
};

/// Q = U^T U, U_ij ~ U[0,1]; c ~ U[0,1]^n; r ~ U[0,1].
QuadModel gen_model(int n, std::uint64_t seed);

struct SampleSet {
  Eigen::MatrixXd points;  // N x n, one sample per row
  Eigen::VectorXd values;  // y_i = f(x_i) + eta_i
  double domain_halfwidth = 10.0;
  double noise_sd = 1.0;
  std::uint64_t seed = 0;

  Eigen::Index size() const { return points.rows(); }
};

/// x_i ~ U[-h, h]^n, eta_i ~ N(0, noise_sd^2). Sample i is drawn from its own
/// stream (seed, i), so prefixes are stable when N grows.
SampleSet sample(const QuadModel& model, long N, double domain_halfwidth, double noise_sd,
                 std::uint64_t seed);

/// Draws the sample with index `index` of the stream family `seed`.
void draw_sample(const QuadModel& model, double domain_halfwidth, double noise_sd,
                 std::uint64_t seed, std::uint64_t index, Eigen::Ref<Eigen::VectorXd> x,
                 double& y);

Eigen::Index parameter_count(int n, Parameterization param);

/// Design row of one point: [x^T (x) x^T, x^T, 1] for vec; the vech row
/// carries x_i^2 on the diagonal slots and 2 x_i x_j off the diagonal.
Eigen::RowVectorXd design_row(const Eigen::VectorXd& x, Parameterization param);

/// Symmetry constraints xi[(i,j)] - xi[(j,i)] = 0 for i < j (vec only).
EqualityConstraints symmetry_constraints(int n);

DesignSystem assemble_design(const SampleSet& samples, double rho,
                             Parameterization param = Parameterization::vec);

Eigen::VectorXd pack(const SymMat& Q, const Eigen::VectorXd& c, double r,
                     Parameterization param = Parameterization::vec);

struct Unpacked {
  SymMat Q;
  Eigen::VectorXd c;
  double r = 0.0;
  /// max |Q_ij - Q_ji| of the raw block before symmetrization.
  double asymmetry = 0.0;
};

Unpacked unpack(const Eigen::VectorXd& xi, int n, Parameterization param = Parameterization::vec);

/// LMI with ell = n and F0 = 0 that extracts Q from xi; c and r coordinates
/// map to zero matrices.
LmiMap quadfit_lmi(int n, Parameterization param = Parameterization::vec);

/// Fixed point of x <- x - gamma (Q x + c), i.e. the solution of Q x = -c.
/// Note this is argmin of x^T Q x / 2 + c^T x; argmin of f itself is
/// -Q^{-1} c / 2. Throws InputError if lambda_min(Q) <= 1e-10.
Eigen::VectorXd true_minimizer(const QuadModel& model);

nlohmann::json to_json(const QuadModel& model);
/// CSV with header i,x_1,...,x_n,y.
std::string to_csv(const SampleSet& samples);

}  // namespace sdls
