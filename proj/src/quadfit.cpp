#include "sdls/quadfit.hpp"

#include <sstream>

#include "sdls/csv.hpp"
#include "sdls/errors.hpp"
#include "sdls/rng.hpp"

namespace sdls {

namespace {

Eigen::Index vech_size(int n) { return static_cast<Eigen::Index>(n) * (n + 1) / 2; }

// Position of Q_ij (i >= j) in vech(Q), lower triangle stored column by column.
Eigen::Index vech_index(int n, int i, int j) {
  return static_cast<Eigen::Index>(j) * n - static_cast<Eigen::Index>(j) * (j - 1) / 2 + (i - j);
}

Eigen::Index q_block_size(int n, Parameterization p) {
  return p == Parameterization::vec ? static_cast<Eigen::Index>(n) * n : vech_size(n);
}

void check_n(int n) {
  if (n < 1) throw InputError("quadfit: n must be >= 1");
}

}  // namespace

std::string to_string(Parameterization p) { return p == Parameterization::vec ? "vec" : "vech"; }

Parameterization parse_parameterization(const std::string& s) {
  if (s == "vec") return Parameterization::vec;
  if (s == "vech") return Parameterization::vech;
  throw InputError("unknown parameterization '" + s + "' (expected vec or vech)");
}

double QuadModel::operator()(const Eigen::VectorXd& x) const {
  return x.dot(Q.matrix() * x) + c.dot(x) + r;
}

void QuadModel::validate() const {
  check_n(n);
  if (Q.dim() != n || c.size() != n) throw InputError("QuadModel: dimension mismatch");
  if (lambda_extremes(Q).first < -1e-10) throw InputError("QuadModel: Q is not PSD");
}

QuadModel gen_model(int n, std::uint64_t seed) {
  check_n(n);
  auto eng = make_engine(seed, Stream::model);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Eigen::MatrixXd u(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) u(i, j) = unif(eng);
  QuadModel m;
  m.n = n;
  m.Q = SymMat::symmetrize(u.transpose() * u);
  m.c.resize(n);
  for (int i = 0; i < n; ++i) m.c(i) = unif(eng);
  m.r = unif(eng);
  m.seed = seed;
  return m;
}

void draw_sample(const QuadModel& model, double domain_halfwidth, double noise_sd,
                 std::uint64_t seed, std::uint64_t index, Eigen::Ref<Eigen::VectorXd> x,
                 double& y) {
  auto eng = make_engine(seed, Stream::sample, index);
  std::uniform_real_distribution<double> unif(-domain_halfwidth, domain_halfwidth);
  for (Eigen::Index j = 0; j < x.size(); ++j) x(j) = unif(eng);
  y = model(x);
  if (noise_sd > 0.0) {
    std::normal_distribution<double> noise(0.0, noise_sd);
    y += noise(eng);
  }
}

SampleSet sample(const QuadModel& model, long N, double domain_halfwidth, double noise_sd,
                 std::uint64_t seed) {
  if (N < 1) throw InputError("sample: N must be >= 1");
  if (!(domain_halfwidth > 0.0) || !(noise_sd >= 0.0)) {
    throw InputError("sample: need domain_halfwidth > 0 and noise_sd >= 0");
  }
  SampleSet s;
  s.points.resize(N, model.n);
  s.values.resize(N);
  s.domain_halfwidth = domain_halfwidth;
  s.noise_sd = noise_sd;
  s.seed = seed;
  Eigen::VectorXd x(model.n);
  for (long i = 0; i < N; ++i) {
    draw_sample(model, domain_halfwidth, noise_sd, seed, static_cast<std::uint64_t>(i), x,
                s.values(i));
    s.points.row(i) = x.transpose();
  }
  return s;
}

Eigen::Index parameter_count(int n, Parameterization param) {
  check_n(n);
  return q_block_size(n, param) + n + 1;
}

Eigen::RowVectorXd design_row(const Eigen::VectorXd& x, Parameterization param) {
  const int n = static_cast<int>(x.size());
  check_n(n);
  Eigen::RowVectorXd row(parameter_count(n, param));
  if (param == Parameterization::vec) {
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) row(a * n + b) = x(a) * x(b);
  } else {
    for (int j = 0; j < n; ++j)
      for (int i = j; i < n; ++i) row(vech_index(n, i, j)) = (i == j ? 1.0 : 2.0) * x(i) * x(j);
  }
  const Eigen::Index off = q_block_size(n, param);
  row.segment(off, n) = x.transpose();
  row(off + n) = 1.0;
  return row;
}

EqualityConstraints symmetry_constraints(int n) {
  check_n(n);
  const Eigen::Index q = static_cast<Eigen::Index>(n) * (n - 1) / 2;
  const Eigen::Index p = parameter_count(n, Parameterization::vec);
  EqualityConstraints eq{Eigen::MatrixXd::Zero(q, p), Eigen::VectorXd::Zero(q)};
  Eigen::Index k = 0;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < j; ++i, ++k) {
      eq.E(k, i + j * n) = 1.0;  // Q_ij in vec(Q)
      eq.E(k, j + i * n) = -1.0;
    }
  }
  return eq;
}

DesignSystem assemble_design(const SampleSet& samples, double rho, Parameterization param) {
  const int n = static_cast<int>(samples.points.cols());
  Eigen::MatrixXd a(samples.size(), parameter_count(n, param));
  for (Eigen::Index i = 0; i < samples.size(); ++i) {
    a.row(i) = design_row(samples.points.row(i).transpose(), param);
  }
  std::optional<EqualityConstraints> eq;
  if (param == Parameterization::vec && n > 1) eq = symmetry_constraints(n);
  return DesignSystem(std::move(a), samples.values, rho, std::move(eq));
}

Eigen::VectorXd pack(const SymMat& Q, const Eigen::VectorXd& c, double r, Parameterization param) {
  const int n = static_cast<int>(Q.dim());
  if (c.size() != n) throw InputError("pack: length(c) != dim(Q)");
  Eigen::VectorXd xi(parameter_count(n, param));
  if (param == Parameterization::vec) {
    xi.head(static_cast<Eigen::Index>(n) * n) = Q.matrix().reshaped();
  } else {
    for (int j = 0; j < n; ++j)
      for (int i = j; i < n; ++i) xi(vech_index(n, i, j)) = Q(i, j);
  }
  const Eigen::Index off = q_block_size(n, param);
  xi.segment(off, n) = c;
  xi(off + n) = r;
  return xi;
}

Unpacked unpack(const Eigen::VectorXd& xi, int n, Parameterization param) {
  if (xi.size() != parameter_count(n, param)) throw InputError("unpack: length mismatch");
  Eigen::MatrixXd q(n, n);
  if (param == Parameterization::vec) {
    q = xi.head(static_cast<Eigen::Index>(n) * n).reshaped(n, n);
  } else {
    for (int j = 0; j < n; ++j)
      for (int i = j; i < n; ++i) q(i, j) = q(j, i) = xi(vech_index(n, i, j));
  }
  Unpacked out{SymMat::symmetrize(q), Eigen::VectorXd(), 0.0, 0.0};
  out.asymmetry = out.Q.ingest_asymmetry();
  const Eigen::Index off = q_block_size(n, param);
  out.c = xi.segment(off, n);
  out.r = xi(off + n);
  return out;
}

LmiMap quadfit_lmi(int n, Parameterization param) {
  const Eigen::Index p = parameter_count(n, param);
  std::vector<SymMat> basis(static_cast<std::size_t>(p), SymMat::zero(n));
  auto unit_pair = [n](int i, int j, double w) {
    Eigen::MatrixXd e = Eigen::MatrixXd::Zero(n, n);
    e(i, j) += w;
    e(j, i) += w;
    return SymMat(e);
  };
  if (param == Parameterization::vec) {
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) basis[static_cast<std::size_t>(i + j * n)] = unit_pair(i, j, 0.5);
  } else {
    for (int j = 0; j < n; ++j)
      for (int i = j; i < n; ++i)
        basis[static_cast<std::size_t>(vech_index(n, i, j))] = unit_pair(i, j, i == j ? 0.5 : 1.0);
  }
  return LmiMap(SymMat::zero(n), std::move(basis));
}

Eigen::VectorXd true_minimizer(const QuadModel& model) {
  const auto ed = eig_sym(model.Q);
  if (!(ed.eigenvalues(0) > 1e-10)) {
    throw InputError("true_minimizer: Q is singular (lambda_min <= 1e-10)");
  }
  return -model.Q.matrix().llt().solve(model.c);
}

nlohmann::json to_json(const QuadModel& model) {
  nlohmann::json q = nlohmann::json::array();
  for (int i = 0; i < model.n; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < model.n; ++j) row.push_back(model.Q(i, j));
    q.push_back(std::move(row));
  }
  return nlohmann::json{{"n", model.n},
                        {"Q", std::move(q)},
                        {"c", std::vector<double>(model.c.begin(), model.c.end())},
                        {"r", model.r},
                        {"seed", model.seed}};
}

std::string to_csv(const SampleSet& samples) {
  std::ostringstream os;
  const Eigen::Index n = samples.points.cols();
  os << "i";
  for (Eigen::Index j = 1; j <= n; ++j) os << ",x_" << j;
  os << ",y\n";
  for (Eigen::Index i = 0; i < samples.size(); ++i) {
    os << i;
    for (Eigen::Index j = 0; j < n; ++j) os << ',' << csv::format(samples.points(i, j));
    os << ',' << csv::format(samples.values(i)) << '\n';
  }
  return os.str();
}

}  // namespace sdls
