#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sdls/admm.hpp"
#include "sdls/certificate.hpp"
#include "sdls/quadfit.hpp"

namespace sdls::exp {

/// Settings shared by all experiment commands. Defaults follow the quadratic
/// fitting setup: rho = 1, delta = 0.05, unit Gaussian noise, samples drawn
/// from [-10, 10]^n, 20 trials.
struct ExperimentConfig {
  std::vector<int> n{30};
  std::vector<long> N{100, 1000, 10000};
  double rho = 1.0;
  double delta = 0.05;
  int trials = 20;
  std::uint64_t seed = 1;
  std::optional<double> m;  // default 0
  std::optional<double> L;  // default lambda_max(Q) of the generated model
  std::optional<double> gamma;  // default 0.9 * step_size_bound(L, epsilon)
  long iters = 200000;
  double noise_sd = 1.0;
  double domain_halfwidth = 10.0;
  Parameterization param = Parameterization::vec;
  std::optional<double> B;  // override for the heuristic plug-in
  int threads = 0;          // 0: hardware concurrency
  int repetitions = 3;
  AdmmConfig admm{};

  /// Throws InputError on out-of-range values.
  void validate() const;
};

/// Overwrites fields present in `j` (keys: n, N, rho, delta, trials, seed, m,
/// L, gamma, iters, noise_sd, domain, param, B, threads, reps, penalty,
/// admm_max_iter, tol). Unknown keys raise InputError.
void apply_json(ExperimentConfig& cfg, const nlohmann::json& j);

enum class Status { ok, solver_error, diverged, not_converged, hypothesis_violated };
std::string to_string(Status s);

struct ViolinRow {
  long N = 0;
  int trial = 0;
  Status status = Status::ok;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  double epsilon = 0.0;
  double lb = 0.0;
  double ub = 0.0;
};

struct TimingRow {
  int n = 0;
  long p = 0;
  long N = 0;
  Status status = Status::ok;
  double t_ls_ms = 0.0;
  double t_sdls_ms = 0.0;
  int admm_iters = 0;
};

struct CoverageRow {
  long N = 0;
  double delta = 0.0;
  /// Smallest per-trial epsilon (a single value when B is overridden).
  double epsilon = 0.0;
  int trials = 0;
  int inside_count = 0;
  double coverage = 0.0;
  int failed_trials = 0;  // not serialized; failed trials count as outside
};

struct DescentRow {
  long N = 0;
  int trial = 0;
  Status status = Status::ok;
  double gamma = 0.0;
  double final_error = 0.0;
  double epsilon = 0.0;
  double error_ball_bound = 0.0;
  long iters = 0;
};

/// Everything computed for one (N, trial) fit of the relaxed problem.
struct TrialFit {
  DesignSystem sys;
  Eigen::VectorXd xi;
  Unpacked estimate;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  Certificate cert;
};

/// Seed of the dataset used for (N, trial).
std::uint64_t dataset_seed(std::uint64_t master, long N, int trial);

/// Samples, fits and certifies one dataset. `lambda_max_H` is the constant
/// of quadfit_lmi(model.n, cfg.param).
TrialFit fit_trial(const QuadModel& model, const ExperimentConfig& cfg, long N, int trial,
                   double lambda_max_H);

SpectralBox certificate_box(const QuadModel& model, const ExperimentConfig& cfg);

std::vector<ViolinRow> run_violin(const ExperimentConfig& cfg);
std::vector<TimingRow> run_timing(const ExperimentConfig& cfg);
std::vector<CoverageRow> run_coverage(const ExperimentConfig& cfg);
std::vector<DescentRow> run_descent_experiment(const ExperimentConfig& cfg);

void write_csv(std::ostream& os, const std::vector<ViolinRow>& rows);
void write_csv(std::ostream& os, const std::vector<TimingRow>& rows);
void write_csv(std::ostream& os, const std::vector<CoverageRow>& rows);
void write_csv(std::ostream& os, const std::vector<DescentRow>& rows);

bool all_ok(const std::vector<ViolinRow>& rows);
bool all_ok(const std::vector<TimingRow>& rows);
bool all_ok(const std::vector<CoverageRow>& rows);
bool all_ok(const std::vector<DescentRow>& rows);

}  // namespace sdls::exp
