// Experiment runner: violin | timing | coverage | descent, one CSV per run.
//
//   sdls coverage --n 5 --N 500 --trials 200 --out coverage.csv
//
// Exit status: 0 all rows ok, 1 at least one failed row, 2 bad configuration.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "sdls/experiments.hpp"

namespace {

template <typename T>
std::vector<T> parse_list(const std::string& text, const char* flag) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::istringstream is(item);
    T v{};
    if (!(is >> v) || !is.eof()) {
      throw sdls::InputError(std::string("cannot parse ") + flag + " value '" + item + "'");
    }
    out.push_back(v);
  }
  if (out.empty()) throw sdls::InputError(std::string(flag) + " needs at least one value");
  return out;
}

struct Flags {
  std::string n, N, param, out, config;
  double rho = 0, delta = 0, m = 0, L = 0, gamma = 0, noise_sd = 0, domain = 0, B = 0;
  double penalty = 0, tol = 0;
  int trials = 0, threads = 0, reps = 0, admm_max_iter = 0;
  long iters = 0;
  std::uint64_t seed = 0;
};

void add_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--n", f.n, "dimension, or comma-separated list (timing)");
  cmd->add_option("--N", f.N, "sample count, or comma-separated list");
  cmd->add_option("--rho", f.rho, "ridge weight (default 1)");
  cmd->add_option("--delta", f.delta, "failure probability (default 0.05)");
  cmd->add_option("--trials", f.trials, "datasets per N (default 20)");
  cmd->add_option("--seed", f.seed, "master seed (default 1)");
  cmd->add_option("--m", f.m, "lower spectral bound (default 0)");
  cmd->add_option("--L", f.L, "upper spectral bound (default lambda_max(Q))");
  cmd->add_option("--gamma", f.gamma, "descent step (default 0.9 * 2/(L+eps))");
  cmd->add_option("--iters", f.iters, "descent iteration cap");
  cmd->add_option("--noise-sd", f.noise_sd, "noise standard deviation (default 1)");
  cmd->add_option("--domain", f.domain, "sampling half-width (default 10)");
  cmd->add_option("--param", f.param, "vec | vech (default vec)")
      ->check(CLI::IsMember({"vec", "vech"}));
  cmd->add_option("--B", f.B, "override for the data bound B");
  cmd->add_option("--threads", f.threads, "worker threads, 0 = all cores");
  cmd->add_option("--reps", f.reps, "timing repetitions (default 3)");
  cmd->add_option("--penalty", f.penalty, "ADMM penalty relative to the Hessian scale (default 1)");
  cmd->add_option("--admm-max-iter", f.admm_max_iter, "ADMM iteration cap (default 5000)");
  cmd->add_option("--tol", f.tol, "ADMM primal/dual tolerance (default 1e-7)");
  cmd->add_option("--out", f.out, "output CSV path (default stdout)");
  cmd->add_option("--config", f.config, "JSON file with defaults; flags take precedence");
}

sdls::exp::ExperimentConfig build_config(CLI::App* cmd, const Flags& f) {
  sdls::exp::ExperimentConfig cfg;
  if (cmd->count("--config")) {
    std::ifstream in(f.config);
    if (!in) throw sdls::InputError("cannot open config file " + f.config);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw sdls::InputError(std::string("config file: ") + e.what());
    }
    sdls::exp::apply_json(cfg, j);
  }
  auto given = [cmd](const char* name) { return cmd->count(name) > 0; };
  if (given("--n")) cfg.n = parse_list<int>(f.n, "--n");
  if (given("--N")) cfg.N = parse_list<long>(f.N, "--N");
  if (given("--rho")) cfg.rho = f.rho;
  if (given("--delta")) cfg.delta = f.delta;
  if (given("--trials")) cfg.trials = f.trials;
  if (given("--seed")) cfg.seed = f.seed;
  if (given("--m")) cfg.m = f.m;
  if (given("--L")) cfg.L = f.L;
  if (given("--gamma")) cfg.gamma = f.gamma;
  if (given("--iters")) cfg.iters = f.iters;
  if (given("--noise-sd")) cfg.noise_sd = f.noise_sd;
  if (given("--domain")) cfg.domain_halfwidth = f.domain;
  if (given("--param")) cfg.param = sdls::parse_parameterization(f.param);
  if (given("--B")) cfg.B = f.B;
  if (given("--threads")) cfg.threads = f.threads;
  if (given("--reps")) cfg.repetitions = f.reps;
  if (given("--penalty")) cfg.admm.penalty = f.penalty;
  if (given("--admm-max-iter")) cfg.admm.max_iter = f.admm_max_iter;
  if (given("--tol")) cfg.admm.tol_primal = cfg.admm.tol_dual = f.tol;
  cfg.validate();
  return cfg;
}

template <typename Rows>
int emit(const Rows& rows, const std::string& path) {
  if (path.empty()) {
    sdls::exp::write_csv(std::cout, rows);
  } else {
    const std::string tmp = path + ".tmp";
    {
      std::ofstream os(tmp);
      if (!os) {
        std::cerr << "error: cannot write " << path << "\n";
        return 2;
      }
      sdls::exp::write_csv(os, rows);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
      std::cerr << "error: cannot write " << path << "\n";
      return 2;
    }
  }
  return sdls::exp::all_ok(rows) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Relaxed semidefinite least squares: certificates and experiments"};
  app.require_subcommand(1);
  Flags f;
  auto* violin = app.add_subcommand("violin", "spectrum of the relaxed estimate per N and trial");
  auto* timing = app.add_subcommand("timing", "relaxed solve vs ADMM SDLS wall time per n");
  auto* coverage = app.add_subcommand("coverage", "Monte Carlo coverage of the certificate");
  auto* descent = app.add_subcommand("descent", "gradient iteration on the learned quadratic");
  for (auto* cmd : {violin, timing, coverage, descent}) add_flags(cmd, f);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  CLI::App* cmd = app.get_subcommands().front();
  sdls::exp::ExperimentConfig cfg;
  try {
    cfg = build_config(cmd, f);
    if (cmd == violin) return emit(sdls::exp::run_violin(cfg), f.out);
    if (cmd == timing) {
      // Defaults for the timing study differ from the fitting experiments.
      if (!cmd->count("--N") && !cmd->count("--config")) cfg.N = {2000};
      if (!cmd->count("--n") && !cmd->count("--config")) cfg.n = {5, 10, 20, 30};
      return emit(sdls::exp::run_timing(cfg), f.out);
    }
    if (cmd == coverage) return emit(sdls::exp::run_coverage(cfg), f.out);
    return emit(sdls::exp::run_descent_experiment(cfg), f.out);
  } catch (const sdls::InputError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
