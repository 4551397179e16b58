#pragma once

#include <Eigen/Dense>

#include <optional>

#include <json.hpp>

#include "sdls/ridge.hpp"
#include "sdls/spectral.hpp"

namespace sdls {

// Finite-sample spectral certificate for the relaxed problem. With
// sigma = (B / rho) sqrt(2 lambda_max(H) / N) and
// epsilon = 2 sigma sqrt(2 ln(ell / delta)) = 4B / (rho sqrt N) sqrt(lambda_max(H) ln(ell / delta)),
// the spectrum of F(x*_N) lies in [m - epsilon, L + epsilon] with probability
// at least 1 - delta. Each tail is controlled by ell exp(-epsilon^2 / (8 sigma^2));
// the two tails are stated jointly at level delta without a union-bound factor.
// The bound presumes unbiased estimates, which ridge regularization does not
// deliver in general.

struct CertificateInputs {
  double B = 1.0;
  double rho = 1.0;
  long N = 1;
  long ell = 1;
  double lambda_max_H = 1.0;
  double delta = 0.05;
  SpectralBox box{};
  /// Marks B as an empirical plug-in rather than a proven a-priori bound.
  bool B_is_heuristic = false;

  /// Throws InputError on B <= 0, rho <= 0, N < 1, ell < 1,
  /// lambda_max_H < 0 or delta outside (0, 1).
  void validate() const;
};

struct Certificate {
  CertificateInputs inputs;
  double sigma = 0.0;
  double epsilon = 0.0;
  SpectralBox interval{};
  double confidence = 0.0;
};

double sigma_value(double B, double rho, long N, double lambda_max_H);

Certificate epsilon_value(const CertificateInputs& inputs);

/// Failure probability min(1, ell exp(-epsilon^2 / (8 sigma^2))) for a given
/// epsilon; inputs.delta is ignored.
double confidence_for_epsilon(const CertificateInputs& inputs, double epsilon);

struct BoundEstimate {
  double value = 0.0;
  bool heuristic = true;
};

/// Plug-in for B: max(max row norm of A, max |b_i|, ||x_star||), flagged as
/// heuristic. An override is returned verbatim and not flagged.
BoundEstimate estimate_B(const DesignSystem& sys, const Eigen::VectorXd& x_star,
                         std::optional<double> override_value = std::nullopt);

/// {B, B_is_heuristic, rho, N, ell, lambda_max_H, delta, sigma, epsilon, interval: [lo, hi]}
nlohmann::json to_json(const Certificate& cert);

}  // namespace sdls
