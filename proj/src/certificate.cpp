#include "sdls/certificate.hpp"

#include <cmath>
#include <limits>

namespace sdls {

void CertificateInputs::validate() const {
  if (!(B > 0.0) || !std::isfinite(B)) throw InputError("certificate: B must be > 0");
  if (!(rho > 0.0) || !std::isfinite(rho)) throw InputError("certificate: rho must be > 0");
  if (N < 1) throw InputError("certificate: N must be >= 1");
  if (ell < 1) throw InputError("certificate: ell must be >= 1");
  if (!(lambda_max_H >= 0.0) || !std::isfinite(lambda_max_H)) {
    throw InputError("certificate: lambda_max_H must be >= 0");
  }
  if (!(delta > 0.0 && delta < 1.0)) throw InputError("certificate: delta must lie in (0, 1)");
}

double sigma_value(double B, double rho, long N, double lambda_max_H) {
  if (!(B > 0.0) || !(rho > 0.0) || N < 1 || !(lambda_max_H >= 0.0)) {
    throw InputError("sigma_value: need B > 0, rho > 0, N >= 1, lambda_max_H >= 0");
  }
  return (B / rho) * std::sqrt(2.0 * lambda_max_H / static_cast<double>(N));
}

Certificate epsilon_value(const CertificateInputs& inputs) {
  inputs.validate();
  Certificate cert;
  cert.inputs = inputs;
  cert.sigma = sigma_value(inputs.B, inputs.rho, inputs.N, inputs.lambda_max_H);
  const double log_term = std::log(static_cast<double>(inputs.ell) / inputs.delta);
  cert.epsilon = 4.0 * inputs.B / (inputs.rho * std::sqrt(static_cast<double>(inputs.N))) *
                 std::sqrt(inputs.lambda_max_H * log_term);
  cert.interval = SpectralBox(inputs.box.lower - cert.epsilon, inputs.box.upper + cert.epsilon);
  cert.confidence = 1.0 - inputs.delta;
  return cert;
}

double confidence_for_epsilon(const CertificateInputs& inputs, double epsilon) {
  if (!(epsilon >= 0.0)) throw InputError("confidence_for_epsilon: epsilon must be >= 0");
  if (!(inputs.B > 0.0) || !(inputs.rho > 0.0) || inputs.N < 1 || inputs.ell < 1 ||
      !(inputs.lambda_max_H >= 0.0)) {
    throw InputError("confidence_for_epsilon: invalid certificate inputs");
  }
  const double ell = static_cast<double>(inputs.ell);
  const double sigma = sigma_value(inputs.B, inputs.rho, inputs.N, inputs.lambda_max_H);
  if (sigma == 0.0) return epsilon == 0.0 ? std::min(1.0, ell) : 0.0;
  return std::min(1.0, ell * std::exp(-epsilon * epsilon / (8.0 * sigma * sigma)));
}

BoundEstimate estimate_B(const DesignSystem& sys, const Eigen::VectorXd& x_star,
                         std::optional<double> override_value) {
  if (override_value) {
    if (!(*override_value > 0.0) || !std::isfinite(*override_value)) {
      throw InputError("estimate_B: override must be a positive finite number");
    }
    return {*override_value, false};
  }
  if (x_star.size() != sys.dim()) throw InputError("estimate_B: length(x_star) != p");
  const double row = sys.A().rowwise().norm().maxCoeff();
  const double bmax = sys.b().cwiseAbs().maxCoeff();
  return {std::max({row, bmax, x_star.norm()}), true};
}

nlohmann::json to_json(const Certificate& cert) {
  const auto& in = cert.inputs;
  return nlohmann::json{{"B", in.B},
                        {"B_is_heuristic", in.B_is_heuristic},
                        {"rho", in.rho},
                        {"N", in.N},
                        {"ell", in.ell},
                        {"lambda_max_H", in.lambda_max_H},
                        {"delta", in.delta},
                        {"sigma", cert.sigma},
                        {"epsilon", cert.epsilon},
                        {"interval", {cert.interval.lower, cert.interval.upper}}};
}

}  // namespace sdls
