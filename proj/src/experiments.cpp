#include "sdls/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>
#include <tuple>

#include "sdls/csv.hpp"
#include "sdls/descent.hpp"
#include "sdls/rng.hpp"

namespace sdls::exp {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Runs body(i) for i in [0, count) on up to `threads` workers. Each index is
// handled exactly once; results must be written to per-index slots.
template <typename Body>
void parallel_for(std::size_t count, int threads, Body body) {
  std::size_t workers = threads > 0 ? static_cast<std::size_t>(threads)
                                    : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::jthread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

int single_n(const ExperimentConfig& cfg) {
  if (cfg.n.size() != 1) throw InputError("this command takes exactly one value for --n");
  return cfg.n.front();
}

template <typename Row>
bool rows_ok(const std::vector<Row>& rows) {
  return std::all_of(rows.begin(), rows.end(), [](const Row& r) { return r.status == Status::ok; });
}

}  // namespace

void ExperimentConfig::validate() const {
  if (n.empty() || std::any_of(n.begin(), n.end(), [](int v) { return v < 1; })) {
    throw InputError("config: n values must be >= 1");
  }
  if (N.empty() || std::any_of(N.begin(), N.end(), [](long v) { return v < 1; })) {
    throw InputError("config: N values must be >= 1");
  }
  if (!(rho > 0.0)) throw InputError("config: rho must be > 0");
  if (!(delta > 0.0 && delta < 1.0)) throw InputError("config: delta must lie in (0, 1)");
  if (trials < 1) throw InputError("config: trials must be >= 1");
  if (gamma && !(*gamma > 0.0)) throw InputError("config: gamma must be > 0");
  if (iters < 0) throw InputError("config: iters must be >= 0");
  if (!(noise_sd >= 0.0)) throw InputError("config: noise_sd must be >= 0");
  if (!(domain_halfwidth > 0.0)) throw InputError("config: domain must be > 0");
  if (B && !(*B > 0.0)) throw InputError("config: B must be > 0");
  if (threads < 0) throw InputError("config: threads must be >= 0");
  if (repetitions < 1) throw InputError("config: reps must be >= 1");
  if (m && L && *m > *L) throw InputError("config: need m <= L");
  admm.validate();
}

void apply_json(ExperimentConfig& cfg, const nlohmann::json& j) {
  if (!j.is_object()) throw InputError("config file must hold a JSON object");
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "n") {
        cfg.n = v.is_array() ? v.get<std::vector<int>>() : std::vector<int>{v.get<int>()};
      } else if (key == "N") {
        cfg.N = v.is_array() ? v.get<std::vector<long>>() : std::vector<long>{v.get<long>()};
      } else if (key == "rho") {
        cfg.rho = v.get<double>();
      } else if (key == "delta") {
        cfg.delta = v.get<double>();
      } else if (key == "trials") {
        cfg.trials = v.get<int>();
      } else if (key == "seed") {
        cfg.seed = v.get<std::uint64_t>();
      } else if (key == "m") {
        cfg.m = v.get<double>();
      } else if (key == "L") {
        cfg.L = v.get<double>();
      } else if (key == "gamma") {
        cfg.gamma = v.get<double>();
      } else if (key == "iters") {
        cfg.iters = v.get<long>();
      } else if (key == "noise_sd") {
        cfg.noise_sd = v.get<double>();
      } else if (key == "domain") {
        cfg.domain_halfwidth = v.get<double>();
      } else if (key == "param") {
        cfg.param = parse_parameterization(v.get<std::string>());
      } else if (key == "B") {
        cfg.B = v.get<double>();
      } else if (key == "threads") {
        cfg.threads = v.get<int>();
      } else if (key == "reps") {
        cfg.repetitions = v.get<int>();
      } else if (key == "penalty") {
        cfg.admm.penalty = v.get<double>();
      } else if (key == "admm_max_iter") {
        cfg.admm.max_iter = v.get<int>();
      } else if (key == "tol") {
        cfg.admm.tol_primal = cfg.admm.tol_dual = v.get<double>();
      } else {
        throw InputError("config: unknown key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("config: ") + e.what());
  }
}

std::string to_string(Status s) {
  switch (s) {
    case Status::ok: return "ok";
    case Status::solver_error: return "solver_error";
    case Status::diverged: return "diverged";
    case Status::not_converged: return "not_converged";
    case Status::hypothesis_violated: return "hypothesis_violated";
  }
  return "unknown";
}

std::uint64_t dataset_seed(std::uint64_t master, long N, int trial) {
  const std::uint64_t index = (static_cast<std::uint64_t>(N) << 24) ^ static_cast<std::uint64_t>(trial);
  return derive_seed(master, Stream::dataset, index);
}

SpectralBox certificate_box(const QuadModel& model, const ExperimentConfig& cfg) {
  const double lower = cfg.m.value_or(0.0);
  const double upper = cfg.L ? *cfg.L : lambda_extremes(model.Q).second;
  return SpectralBox(lower, upper);
}

TrialFit fit_trial(const QuadModel& model, const ExperimentConfig& cfg, long N, int trial,
                   double lambda_max_H) {
  const auto samples =
      sample(model, N, cfg.domain_halfwidth, cfg.noise_sd, dataset_seed(cfg.seed, N, trial));
  DesignSystem sys = assemble_design(samples, cfg.rho, cfg.param);
  auto sol = solve_ridge(sys);
  Unpacked est = unpack(sol.x, model.n, cfg.param);
  const auto [lo, hi] = lambda_extremes(est.Q);

  const auto b = estimate_B(sys, sol.x, cfg.B);
  CertificateInputs in;
  in.B = b.value;
  in.B_is_heuristic = b.heuristic;
  in.rho = cfg.rho;
  in.N = N;
  in.ell = model.n;
  in.lambda_max_H = lambda_max_H;
  in.delta = cfg.delta;
  in.box = certificate_box(model, cfg);
  auto cert = epsilon_value(in);
  return TrialFit{std::move(sys), std::move(sol.x), std::move(est), lo, hi, std::move(cert)};
}

std::vector<ViolinRow> run_violin(const ExperimentConfig& cfg) {
  cfg.validate();
  const int n = single_n(cfg);
  const QuadModel model = gen_model(n, cfg.seed);
  const double lam_h = h_lambda_max(quadfit_lmi(n, cfg.param));

  std::vector<ViolinRow> rows(cfg.N.size() * static_cast<std::size_t>(cfg.trials));
  parallel_for(rows.size(), cfg.threads, [&](std::size_t idx) {
    ViolinRow& row = rows[idx];
    row.N = cfg.N[idx / static_cast<std::size_t>(cfg.trials)];
    row.trial = static_cast<int>(idx % static_cast<std::size_t>(cfg.trials));
    try {
      const auto fit = fit_trial(model, cfg, row.N, row.trial, lam_h);
      row.lambda_min = fit.lambda_min;
      row.lambda_max = fit.lambda_max;
      row.epsilon = fit.cert.epsilon;
      row.lb = fit.cert.interval.lower;
      row.ub = fit.cert.interval.upper;
    } catch (const std::exception&) {
      row.status = Status::solver_error;
      row.lambda_min = row.lambda_max = row.epsilon = row.lb = row.ub = kNaN;
    }
  });
  std::stable_sort(rows.begin(), rows.end(), [](const ViolinRow& a, const ViolinRow& b) {
    return std::tie(a.N, a.trial) < std::tie(b.N, b.trial);
  });
  return rows;
}

std::vector<CoverageRow> run_coverage(const ExperimentConfig& cfg) {
  cfg.validate();
  const int n = single_n(cfg);
  const QuadModel model = gen_model(n, cfg.seed);
  const double lam_h = h_lambda_max(quadfit_lmi(n, cfg.param));

  std::vector<long> Ns = cfg.N;
  std::sort(Ns.begin(), Ns.end());
  std::vector<CoverageRow> rows;
  for (long N : Ns) {
    std::vector<int> inside(static_cast<std::size_t>(cfg.trials), 0);
    std::vector<int> failed(static_cast<std::size_t>(cfg.trials), 0);
    std::vector<double> eps(static_cast<std::size_t>(cfg.trials), kNaN);
    parallel_for(inside.size(), cfg.threads, [&](std::size_t t) {
      try {
        const auto fit = fit_trial(model, cfg, N, static_cast<int>(t), lam_h);
        eps[t] = fit.cert.epsilon;
        inside[t] = fit.lambda_min >= fit.cert.interval.lower &&
                    fit.lambda_max <= fit.cert.interval.upper;
      } catch (const std::exception&) {
        failed[t] = 1;
      }
    });
    CoverageRow row;
    row.N = N;
    row.delta = cfg.delta;
    row.trials = cfg.trials;
    row.epsilon = kNaN;
    for (double e : eps) {
      if (!std::isnan(e) && (std::isnan(row.epsilon) || e < row.epsilon)) row.epsilon = e;
    }
    for (std::size_t t = 0; t < inside.size(); ++t) {
      row.inside_count += inside[t];
      row.failed_trials += failed[t];
    }
    row.coverage = static_cast<double>(row.inside_count) / cfg.trials;
    rows.push_back(row);
  }
  return rows;
}

std::vector<TimingRow> run_timing(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.N.size() != 1) throw InputError("timing takes exactly one value for --N");
  const long N = cfg.N.front();
  std::vector<TimingRow> rows;
  for (int n : cfg.n) {
    TimingRow row;
    row.n = n;
    row.p = static_cast<long>(parameter_count(n, cfg.param));
    row.N = N;
    try {
      const QuadModel model = gen_model(n, cfg.seed);
      const auto samples =
          sample(model, N, cfg.domain_halfwidth, cfg.noise_sd, dataset_seed(cfg.seed, N, 0));
      SdlsProblem prob(assemble_design(samples, cfg.rho, cfg.param), quadfit_lmi(n, cfg.param),
                       certificate_box(model, cfg));
      const auto rec = time_solvers(prob, cfg.admm, cfg.repetitions);
      row.t_ls_ms = rec.relaxed_median_ms;
      row.t_sdls_ms = rec.sdls_median_ms;
      row.admm_iters = rec.admm_iterations;
    } catch (const AdmmNonConvergence& e) {
      row.status = Status::not_converged;
      row.t_ls_ms = kNaN;
      row.t_sdls_ms = kNaN;
      row.admm_iters = e.partial().iterations;
    } catch (const std::exception&) {
      row.status = Status::solver_error;
      row.t_ls_ms = row.t_sdls_ms = kNaN;
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<DescentRow> run_descent_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const int n = single_n(cfg);
  const QuadModel model = gen_model(n, cfg.seed);
  const Eigen::VectorXd xstar = true_minimizer(model);
  const double lam_h = h_lambda_max(quadfit_lmi(n, cfg.param));

  std::vector<DescentRow> rows(cfg.N.size() * static_cast<std::size_t>(cfg.trials));
  parallel_for(rows.size(), cfg.threads, [&](std::size_t idx) {
    DescentRow& row = rows[idx];
    row.N = cfg.N[idx / static_cast<std::size_t>(cfg.trials)];
    row.trial = static_cast<int>(idx % static_cast<std::size_t>(cfg.trials));
    row.final_error = row.error_ball_bound = row.gamma = row.epsilon = kNaN;
    try {
      const auto fit = fit_trial(model, cfg, row.N, row.trial, lam_h);
      row.epsilon = fit.cert.epsilon;
      row.gamma = cfg.gamma ? *cfg.gamma
                            : 0.9 * step_size_bound(fit.cert.inputs.box.upper, fit.cert.epsilon);
      const bool contracting = contraction_factor(fit.estimate.Q, row.gamma) < 1.0;
      if (contracting) {
        row.error_ball_bound =
            error_ball_bound(model.Q, fit.estimate.Q, model.c, fit.estimate.c, xstar, row.gamma);
      }
      DescentConfig dc;
      dc.gamma = row.gamma;
      dc.max_iter = cfg.iters;
      dc.x0 = Eigen::VectorXd::Zero(n);
      try {
        const auto trace = run_descent(fit.estimate.Q, fit.estimate.c, xstar, dc);
        row.final_error = trace.final_error;
        row.iters = trace.iterations;
        if (!contracting) {
          row.status = Status::hypothesis_violated;
        } else if (!trace.converged) {
          row.status = Status::not_converged;
        }
      } catch (const DivergenceError& e) {
        row.status = Status::diverged;
        row.final_error = e.trace().final_error;
        row.iters = e.trace().iterations;
      }
    } catch (const std::exception&) {
      row.status = Status::solver_error;
    }
  });
  std::stable_sort(rows.begin(), rows.end(), [](const DescentRow& a, const DescentRow& b) {
    return std::tie(a.N, a.trial) < std::tie(b.N, b.trial);
  });
  return rows;
}

void write_csv(std::ostream& os, const std::vector<ViolinRow>& rows) {
  os << "N,trial,status,lambda_min,lambda_max,epsilon,lb,ub\n";
  for (const auto& r : rows) {
    os << csv::join_row({csv::format(r.N), csv::format(r.trial), to_string(r.status),
                         csv::format(r.lambda_min), csv::format(r.lambda_max),
                         csv::format(r.epsilon), csv::format(r.lb), csv::format(r.ub)})
       << '\n';
  }
}

void write_csv(std::ostream& os, const std::vector<TimingRow>& rows) {
  os << "n,p,N,status,t_ls_ms,t_sdls_ms,admm_iters\n";
  for (const auto& r : rows) {
    os << csv::join_row({csv::format(r.n), csv::format(r.p), csv::format(r.N), to_string(r.status),
                         csv::format(r.t_ls_ms), csv::format(r.t_sdls_ms),
                         csv::format(r.admm_iters)})
       << '\n';
  }
}

void write_csv(std::ostream& os, const std::vector<CoverageRow>& rows) {
  os << "N,delta,epsilon,trials,inside_count,coverage\n";
  for (const auto& r : rows) {
    os << csv::join_row({csv::format(r.N), csv::format(r.delta), csv::format(r.epsilon),
                         csv::format(r.trials), csv::format(r.inside_count),
                         csv::format(r.coverage)})
       << '\n';
  }
}

void write_csv(std::ostream& os, const std::vector<DescentRow>& rows) {
  os << "N,trial,status,gamma,final_error,epsilon,error_ball_bound,iters\n";
  for (const auto& r : rows) {
    os << csv::join_row({csv::format(r.N), csv::format(r.trial), to_string(r.status),
                         csv::format(r.gamma), csv::format(r.final_error), csv::format(r.epsilon),
                         csv::format(r.error_ball_bound), csv::format(r.iters)})
       << '\n';
  }
}

bool all_ok(const std::vector<ViolinRow>& rows) { return rows_ok(rows); }
bool all_ok(const std::vector<TimingRow>& rows) { return rows_ok(rows); }
bool all_ok(const std::vector<DescentRow>& rows) { return rows_ok(rows); }
bool all_ok(const std::vector<CoverageRow>& rows) {
  return std::all_of(rows.begin(), rows.end(),
                     [](const CoverageRow& r) { return r.failed_trials == 0; });
}

}  // namespace sdls::exp
