#include "stablekit/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <optional>
#include <sstream>

#include "stablekit/csv.hpp"
#include "stablekit/density.hpp"
#include "stablekit/em_fit.hpp"
#include "stablekit/errors.hpp"
#include "stablekit/gof.hpp"
#include "stablekit/simulate.hpp"
#include "stablekit/spectral_fit.hpp"

namespace stablekit {

namespace {

using json = nlohmann::json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  bool json_mode = false;
  // law
  double alpha = 2.0, beta = 0.0, sigma = 1.0, mu = 0.0;
  int param = 0;
  std::vector<double> alphas, betas, sigmas, mus, omega;
  // simulation
  std::size_t n = 1;
  double lower = 0.0, upper = 0.0;
  std::string sigma_matrix;
  std::vector<double> mu_vec, masses, z;
  std::uint64_t seed = 1;
  // evaluation
  double y = 0.0;
  // data
  std::string dataset, file;
  // fits
  std::size_t k = 1, m = 4;
  std::vector<double> init_omega, init_alpha, init_beta, init_sigma, init_mu, init_mu_vec;
  std::string init_sigma_matrix;
  double tol = 1e-6;
  int max_iter = 500;
  // plot data
  std::size_t points = 200, bins = 20;
};

double round6(double v) {
  if (!std::isfinite(v) || v == 0.0) return v;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return std::strtod(buf, nullptr);
}

class Emitter {
 public:
  explicit Emitter(bool full) : full_(full) {}
  json num(double v) const { return full_ ? v : round6(v); }
  json vec(const std::vector<double>& v) const {
    json a = json::array();
    for (double x : v) a.push_back(num(x));
    return a;
  }
  json vec(const Eigen::VectorXd& v) const {
    return vec(std::vector<double>(v.data(), v.data() + v.size()));
  }
  json mat(const Eigen::MatrixXd& m) const {
    json a = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) a.push_back(vec(Eigen::VectorXd(m.row(i).transpose())));
    return a;
  }

 private:
  bool full_;
};

Form form_of(int param) { return param == 1 ? Form::S1 : Form::S0; }

Eigen::MatrixXd parse_matrix(const std::string& text, const std::string& flag) {
  std::vector<std::vector<double>> rows;
  std::stringstream ss(text);
  std::string row;
  while (std::getline(ss, row, ';')) {
    std::vector<double> r;
    std::stringstream rs(row);
    std::string cell;
    while (std::getline(rs, cell, ',')) {
      try {
        std::size_t used = 0;
        r.push_back(std::stod(cell, &used));
        if (cell.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw UsageError(flag + ": cannot parse '" + cell + "'");
      }
    }
    rows.push_back(std::move(r));
  }
  if (rows.empty()) throw UsageError(flag + " is empty");
  const std::size_t d = rows.size();
  Eigen::MatrixXd m(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < d; ++i) {
    if (rows[i].size() != d) throw UsageError(flag + " must be a square matrix 'a,b;c,d'");
    for (std::size_t j = 0; j < d; ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  }
  return m;
}

Eigen::VectorXd to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Dataset load_data(const Options& o, std::size_t columns) {
  if (o.dataset.empty() == o.file.empty())
    throw UsageError("exactly one of --dataset or --file is required");
  Dataset d = o.dataset.empty() ? read_csv(o.file, columns) : embedded_dataset(o.dataset);
  if (columns != 0 && static_cast<std::size_t>(d.dim()) != columns)
    throw DimensionMismatch("expected " + std::to_string(columns) + " column(s), found " +
                            std::to_string(d.dim()));
  return d;
}

void need_sizes(std::size_t k, std::initializer_list<std::pair<const char*, std::size_t>> flags) {
  for (const auto& [name, size] : flags)
    if (size != k)
      throw UsageError(std::string(name) + " needs " + std::to_string(k) + " values, got " +
                       std::to_string(size));
}

json params_json(const Emitter& e, const StableParams& p) {
  return {{"alpha", e.num(p.alpha)}, {"beta", e.num(p.beta)}, {"sigma", e.num(p.sigma)},
          {"mu", e.num(p.mu)}, {"param", static_cast<int>(p.form)}};
}

json mixture_json(const Emitter& e, const MixtureSpec& s) {
  std::vector<double> a, b, sg, m;
  for (const auto& c : s.components) {
    a.push_back(c.alpha);
    b.push_back(c.beta);
    sg.push_back(c.sigma);
    m.push_back(c.mu);
  }
  const int form = s.components.empty() ? 0 : static_cast<int>(s.components[0].form);
  return {{"omega", e.vec(s.weights)}, {"alpha", e.vec(a)}, {"beta", e.vec(b)},
          {"sigma", e.vec(sg)}, {"mu", e.vec(m)}, {"param", form}};
}

json report_json(const Emitter& e, const FitReport& r) {
  json j;
  if (const auto* p = std::get_if<StableParams>(&r.estimates)) j["estimates"] = params_json(e, *p);
  if (const auto* s = std::get_if<MixtureSpec>(&r.estimates)) j["estimates"] = mixture_json(e, *s);
  if (const auto* el = std::get_if<EllipticalParams>(&r.estimates))
    j["estimates"] = {{"alpha", e.num(el->alpha)}, {"sigma", e.mat(el->sigma)}, {"mu", e.vec(el->mu)}};
  j["loglik"] = e.num(r.loglik());
  j["loglik_trace"] = e.vec(r.loglik_trace);
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  j["status"] = std::string(to_string(r.status));
  j["message"] = r.message;
  j["tol"] = e.num(r.tol);
  if (r.gof) j["gof"] = {{"ks", e.num(r.gof->ks)}, {"ad", e.num(r.gof->ad)}, {"n", r.gof->n}};
  else j["gof"] = nullptr;
  return j;
}

// Single law from --alpha/--beta/--sigma/--mu, or a mixture when --omega is given.
std::variant<StableParams, MixtureSpec> model_from(const Options& o) {
  const Form f = form_of(o.param);
  if (o.omega.empty()) {
    auto one = [](const std::vector<double>& v, const char* name, double dflt) {
      if (v.empty()) return dflt;
      if (v.size() != 1) throw UsageError(std::string(name) + " takes one value without --omega");
      return v[0];
    };
    StableParams p{one(o.alphas, "--alpha", 2.0), one(o.betas, "--beta", 0.0),
                   one(o.sigmas, "--sigma", 1.0), one(o.mus, "--mu", 0.0), f};
    validate(p);
    return p;
  }
  const std::size_t k = o.omega.size();
  auto fill = [&](const std::vector<double>& v, const char* name, double dflt) {
    if (v.empty()) return std::vector<double>(k, dflt);
    need_sizes(k, {{name, v.size()}});
    return v;
  };
  const auto a = fill(o.alphas, "--alpha", 2.0), b = fill(o.betas, "--beta", 0.0),
             s = fill(o.sigmas, "--sigma", 1.0), m = fill(o.mus, "--mu", 0.0);
  MixtureSpec spec;
  spec.weights = o.omega;
  for (std::size_t j = 0; j < k; ++j) spec.components.push_back({a[j], b[j], s[j], m[j], f});
  validate(spec);
  return spec;
}

EmConfig config_from(const Options& o) {
  EmConfig c;
  c.tol = o.tol;
  c.max_iter = o.max_iter;
  c.seed = o.seed;
  validate(c);
  return c;
}

int exit_code_for(const StableError& e) {
  static const std::vector<std::string> numerical{
      "NumericalFailure", "NotPositiveDefinite", "ComponentCollapse", "RankDeficientData",
      "DegenerateEcf",    "IllConditioned",      "MaxIterations"};
  return std::find(numerical.begin(), numerical.end(), e.kind()) != numerical.end() ? 2 : 1;
}

template <class T>
void env_default(const char* name, T& target) {
  const char* v = std::getenv(name);
  if (!v || !*v) return;
  std::istringstream in(v);
  T parsed{};
  in >> parsed;
  if (in.fail() || !in.eof()) throw UsageError(std::string(name) + ": cannot parse '" + v + "'");
  target = parsed;
}

void add_law(CLI::App* c, Options& o) {
  c->add_option("--alpha", o.alpha, "tail index in (0, 2]");
  c->add_option("--beta", o.beta, "skewness in [-1, 1]");
  c->add_option("--sigma", o.sigma, "scale > 0");
  c->add_option("--mu", o.mu, "location");
  c->add_option("--param", o.param, "parameterization 0 (S0) or 1 (S1)")->check(CLI::IsMember({0, 1}));
}

void add_model_lists(CLI::App* c, Options& o) {
  c->add_option("--alpha", o.alphas, "tail index (comma list with --omega)")->delimiter(',');
  c->add_option("--beta", o.betas, "skewness")->delimiter(',');
  c->add_option("--sigma", o.sigmas, "scale")->delimiter(',');
  c->add_option("--mu", o.mus, "location")->delimiter(',');
  c->add_option("--omega", o.omega, "mixture weights; presence selects a mixture model")->delimiter(',');
  c->add_option("--param", o.param, "parameterization 0 (S0) or 1 (S1)")->check(CLI::IsMember({0, 1}));
}

void add_data(CLI::App* c, Options& o) {
  auto* d = c->add_option("--dataset", o.dataset,
                          "embedded data: guinea_pigs, galaxy, abbey_prices, abbey_returns");
  auto* f = c->add_option("--file", o.file, "CSV file, one observation per row");
  d->excludes(f);
}

void add_em(CLI::App* c, Options& o) {
  c->add_option("--tol", o.tol, "relative log-likelihood tolerance (env STABLEKIT_TOL)");
  c->add_option("--max-iter", o.max_iter, "iteration cap (env STABLEKIT_MAX_ITER)");
  c->add_option("--seed", o.seed, "seed for Monte Carlo fallbacks (env STABLEKIT_SEED)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  try {
    env_default("STABLEKIT_SEED", o.seed);
    env_default("STABLEKIT_TOL", o.tol);
    env_default("STABLEKIT_MAX_ITER", o.max_iter);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }

  CLI::App app{"Stable distributions: densities, simulation, EM fitting and spectral estimation.\n"
               "Results are JSON on stdout (6 significant digits; --json for full precision)."};
  app.require_subcommand(1);
  app.add_flag("--json", o.json_mode, "full-precision JSON output");
  std::function<json()> action;
  std::function<void()> raw_action;  // plot-data writes CSV itself

  auto* sim = app.add_subcommand("sim", "draws from S(alpha, beta, sigma, mu). JSON: {draws}");
  add_law(sim, o);
  sim->add_option("--n", o.n, "sample size")->required();
  sim->add_option("--seed", o.seed, "64-bit seed (env STABLEKIT_SEED)");
  sim->callback([&] {
    action = [&] {
      RngStream rng(o.seed);
      const StableParams p{o.alpha, o.beta, o.sigma, o.mu, form_of(o.param)};
      return json{{"draws", Emitter(o.json_mode).vec(rstable(o.n, p, rng))}};
    };
  });

  auto* trunc = app.add_subcommand("sim-trunc", "draws restricted to (lower, upper). JSON: {draws}");
  add_law(trunc, o);
  trunc->add_option("--n", o.n, "sample size")->required();
  trunc->add_option("--lower", o.lower, "lower bound")->required();
  trunc->add_option("--upper", o.upper, "upper bound")->required();
  trunc->add_option("--seed", o.seed, "64-bit seed (env STABLEKIT_SEED)");
  trunc->callback([&] {
    action = [&] {
      RngStream rng(o.seed);
      const StableParams p{o.alpha, o.beta, o.sigma, o.mu, form_of(o.param)};
      return json{{"draws", Emitter(o.json_mode).vec(rstable_truncated(o.n, p, o.lower, o.upper, rng))}};
    };
  });

  auto* sim_e = app.add_subcommand("sim-elliptical", "elliptical stable vectors. JSON: {draws}");
  sim_e->add_option("--n", o.n, "sample size")->required();
  sim_e->add_option("--alpha", o.alpha, "tail index in (0, 2]");
  sim_e->add_option("--sigma-matrix", o.sigma_matrix, "dispersion 'a,b;c,d'")->required();
  sim_e->add_option("--mu-vec", o.mu_vec, "location vector")->delimiter(',');
  sim_e->add_option("--seed", o.seed, "64-bit seed (env STABLEKIT_SEED)");
  sim_e->callback([&] {
    action = [&] {
      const Eigen::MatrixXd s = parse_matrix(o.sigma_matrix, "--sigma-matrix");
      Eigen::VectorXd mu = o.mu_vec.empty() ? Eigen::VectorXd::Zero(s.rows()) : to_vector(o.mu_vec);
      RngStream rng(o.seed);
      return json{{"draws", Emitter(o.json_mode).mat(rstable_elliptical(o.n, {o.alpha, s, mu}, rng))}};
    };
  });

  auto* sim_s = app.add_subcommand("sim-spectral",
                                   "bivariate stable vectors with masses on circle anchors. JSON: {draws}");
  sim_s->add_option("--n", o.n, "sample size")->required();
  sim_s->add_option("--alpha", o.alpha, "tail index in (0, 2), not 1");
  sim_s->add_option("--masses", o.masses, "masses on the m anchors")->delimiter(',')->required();
  sim_s->add_option("--seed", o.seed, "64-bit seed (env STABLEKIT_SEED)");
  sim_s->callback([&] {
    action = [&] {
      SpectralMeasure m;
      m.alpha = o.alpha;
      m.points = circle_anchors(o.masses.size());
      m.masses = o.masses;
      m.mu = Eigen::VectorXd::Zero(2);
      RngStream rng(o.seed);
      return json{{"draws", Emitter(o.json_mode).mat(rstable_spectral(o.n, m, rng))}};
    };
  });

  auto* pdf = app.add_subcommand("pdf", "density at y. JSON: {pdf}");
  add_law(pdf, o);
  pdf->add_option("--y", o.y, "argument")->required();
  pdf->callback([&] {
    action = [&] {
      const StableParams p{o.alpha, o.beta, o.sigma, o.mu, form_of(o.param)};
      return json{{"pdf", Emitter(o.json_mode).num(pdf_univariate(o.y, p))}};
    };
  });

  auto* cdf = app.add_subcommand("cdf", "distribution function at y. JSON: {cdf}");
  add_law(cdf, o);
  cdf->add_option("--y", o.y, "argument")->required();
  cdf->callback([&] {
    action = [&] {
      const StableParams p{o.alpha, o.beta, o.sigma, o.mu, form_of(o.param)};
      return json{{"cdf", Emitter(o.json_mode).num(cdf_univariate(o.y, p))}};
    };
  });

  auto* pdf_e = app.add_subcommand("pdf-elliptical", "elliptical stable density at z. JSON: {pdf}");
  pdf_e->add_option("--z", o.z, "point")->delimiter(',')->required();
  pdf_e->add_option("--alpha", o.alpha, "tail index in (0, 2]");
  pdf_e->add_option("--sigma-matrix", o.sigma_matrix, "dispersion 'a,b;c,d'")->required();
  pdf_e->add_option("--mu-vec", o.mu_vec, "location vector")->delimiter(',');
  pdf_e->callback([&] {
    action = [&] {
      const Eigen::MatrixXd s = parse_matrix(o.sigma_matrix, "--sigma-matrix");
      Eigen::VectorXd mu = o.mu_vec.empty() ? Eigen::VectorXd::Zero(s.rows()) : to_vector(o.mu_vec);
      return json{{"pdf", Emitter(o.json_mode).num(pdf_elliptical(to_vector(o.z), {o.alpha, s, mu}))}};
    };
  });

  auto* fit = app.add_subcommand("fit", "parameter estimation");
  fit->require_subcommand(1);

  auto* f_cauchy = fit->add_subcommand("cauchy", "alpha = 1 EM fit (S0). JSON: FitReport");
  add_data(f_cauchy, o);
  add_em(f_cauchy, o);
  f_cauchy->add_option("--init-beta", o.init_beta)->required()->expected(1);
  f_cauchy->add_option("--init-sigma", o.init_sigma)->required()->expected(1);
  f_cauchy->add_option("--init-mu", o.init_mu)->required()->expected(1);
  f_cauchy->callback([&] {
    action = [&] {
      const auto y = load_data(o, 1).univariate();
      const auto r = fit_cauchy(y, {o.init_beta[0], o.init_sigma[0], o.init_mu[0]}, config_from(o));
      return report_json(Emitter(o.json_mode), r);
    };
  });

  auto* f_sym = fit->add_subcommand("sym", "symmetric stable EM fit. JSON: FitReport");
  add_data(f_sym, o);
  add_em(f_sym, o);
  f_sym->add_option("--init-alpha", o.init_alpha)->required()->expected(1);
  f_sym->add_option("--init-sigma", o.init_sigma)->required()->expected(1);
  f_sym->add_option("--init-mu", o.init_mu)->required()->expected(1);
  f_sym->callback([&] {
    action = [&] {
      const auto y = load_data(o, 1).univariate();
      const auto r = fit_symmetric(y, {o.init_alpha[0], o.init_sigma[0], o.init_mu[0]}, config_from(o));
      return report_json(Emitter(o.json_mode), r);
    };
  });

  auto* f_skew = fit->add_subcommand("skew", "skewed stable EM fit. JSON: FitReport");
  add_data(f_skew, o);
  add_em(f_skew, o);
  f_skew->add_option("--init-alpha", o.init_alpha)->required()->expected(1);
  f_skew->add_option("--init-beta", o.init_beta)->required()->expected(1);
  f_skew->add_option("--init-sigma", o.init_sigma)->required()->expected(1);
  f_skew->add_option("--init-mu", o.init_mu)->required()->expected(1);
  f_skew->add_option("--param", o.param, "parameterization 0 (S0) or 1 (S1)")->check(CLI::IsMember({0, 1}));
  f_skew->callback([&] {
    action = [&] {
      const auto y = load_data(o, 1).univariate();
      const auto r = fit_skewed(y, {o.init_alpha[0], o.init_beta[0], o.init_sigma[0], o.init_mu[0]},
                                form_of(o.param), config_from(o));
      return report_json(Emitter(o.json_mode), r);
    };
  });

  auto* f_cmix = fit->add_subcommand("cauchy-mix", "K-component Cauchy mixture (S0). JSON: FitReport");
  add_data(f_cmix, o);
  add_em(f_cmix, o);
  f_cmix->add_option("--k", o.k, "number of components")->required();
  f_cmix->add_option("--init-omega", o.init_omega)->delimiter(',')->required();
  f_cmix->add_option("--init-beta", o.init_beta)->delimiter(',')->required();
  f_cmix->add_option("--init-sigma", o.init_sigma)->delimiter(',')->required();
  f_cmix->add_option("--init-mu", o.init_mu)->delimiter(',')->required();
  f_cmix->callback([&] {
    action = [&] {
      need_sizes(o.k, {{"--init-omega", o.init_omega.size()}, {"--init-beta", o.init_beta.size()},
                       {"--init-sigma", o.init_sigma.size()}, {"--init-mu", o.init_mu.size()}});
      const auto y = load_data(o, 1).univariate();
      const auto r = fit_cauchy_mixture(y, {o.init_omega, o.init_beta, o.init_sigma, o.init_mu},
                                        config_from(o));
      return report_json(Emitter(o.json_mode), r);
    };
  });

  auto* f_smix = fit->add_subcommand("sym-mix", "K-component symmetric stable mixture. JSON: FitReport");
  add_data(f_smix, o);
  add_em(f_smix, o);
  f_smix->add_option("--k", o.k, "number of components")->required();
  f_smix->add_option("--init-omega", o.init_omega)->delimiter(',')->required();
  f_smix->add_option("--init-alpha", o.init_alpha)->delimiter(',')->required();
  f_smix->add_option("--init-sigma", o.init_sigma)->delimiter(',')->required();
  f_smix->add_option("--init-mu", o.init_mu)->delimiter(',')->required();
  f_smix->callback([&] {
    action = [&] {
      need_sizes(o.k, {{"--init-omega", o.init_omega.size()}, {"--init-alpha", o.init_alpha.size()},
                       {"--init-sigma", o.init_sigma.size()}, {"--init-mu", o.init_mu.size()}});
      const auto y = load_data(o, 1).univariate();
      const auto r = fit_symmetric_mixture(y, {o.init_omega, o.init_alpha, o.init_sigma, o.init_mu},
                                           config_from(o));
      return report_json(Emitter(o.json_mode), r);
    };
  });

  auto* f_ell = fit->add_subcommand("elliptical", "elliptical stable EM fit. JSON: FitReport");
  f_ell->add_option("--file", o.file, "CSV file with d columns")->required();
  add_em(f_ell, o);
  f_ell->add_option("--init-alpha", o.init_alpha)->required()->expected(1);
  f_ell->add_option("--init-sigma-matrix", o.init_sigma_matrix, "'a,b;c,d'")->required();
  f_ell->add_option("--init-mu-vec", o.init_mu_vec)->delimiter(',')->required();
  f_ell->callback([&] {
    action = [&] {
      const Dataset d = read_csv(o.file);
      const Eigen::MatrixXd s = parse_matrix(o.init_sigma_matrix, "--init-sigma-matrix");
      const auto r = fit_elliptical(d.values, {o.init_alpha[0], s, to_vector(o.init_mu_vec)}, config_from(o));
      return report_json(Emitter(o.json_mode), r);
    };
  });

  auto* f_spec = fit->add_subcommand("spectral", "discrete spectral measure of bivariate data. "
                                                 "JSON: {alpha, anchors, masses}");
  f_spec->add_option("--file", o.file, "CSV file with 2 columns")->required();
  f_spec->add_option("--m", o.m, "number of anchors")->required();
  f_spec->callback([&] {
    action = [&] {
      const Dataset d = read_csv(o.file, 2);
      const SpectralMeasure s = estimate_spectral_measure(d.values, o.m);
      const Emitter e(o.json_mode);
      json anchors = json::array();
      for (const auto& p : s.points) anchors.push_back(e.vec(p));
      return json{{"alpha", e.num(s.alpha)}, {"anchors", anchors}, {"masses", e.vec(s.masses)}};
    };
  });

  auto* f_tail = fit->add_subcommand("tail", "ECF tail index of zero-location symmetric data. "
                                             "JSON: {alpha, sigma}");
  add_data(f_tail, o);
  f_tail->callback([&] {
    action = [&] {
      const auto y = load_data(o, 1).univariate();
      const auto est = estimate_symmetric_ecf(y);
      const Emitter e(o.json_mode);
      return json{{"alpha", e.num(est.alpha)}, {"sigma", e.num(est.sigma)}};
    };
  });

  auto* gof = app.add_subcommand("gof", "KS and AD statistics of data against a model. JSON: {ks, ad, n}");
  add_data(gof, o);
  add_model_lists(gof, o);
  gof->callback([&] {
    action = [&] {
      const auto y = load_data(o, 1).univariate();
      const auto model = model_from(o);
      const GofResult g = std::visit([&](const auto& m) { return goodness_of_fit(y, m); }, model);
      const Emitter e(o.json_mode);
      return json{{"ks", e.num(g.ks)}, {"ad", e.num(g.ad)}, {"n", g.n}};
    };
  });

  auto* plot = app.add_subcommand("plot-data", "CSV of (y, pdf) on a grid, then histogram bins");
  add_data(plot, o);
  add_model_lists(plot, o);
  plot->add_option("--points", o.points, "grid size")->check(CLI::PositiveNumber);
  plot->add_option("--bins", o.bins, "histogram bins")->check(CLI::PositiveNumber);
  plot->callback([&] {
    raw_action = [&] {
      const auto y = load_data(o, 1).univariate();
      const auto model = model_from(o);
      const auto [lo_it, hi_it] = std::minmax_element(y.begin(), y.end());
      const double lo = *lo_it, hi = *hi_it;
      const double pad = 0.05 * (hi - lo > 0.0 ? hi - lo : 1.0);
      const std::size_t np = std::max<std::size_t>(o.points, 2);
      std::ostringstream s;
      s.precision(o.json_mode ? 17 : 6);
      s << "y,pdf\n";
      for (std::size_t i = 0; i < np; ++i) {
        const double x = (lo - pad) + (hi - lo + 2.0 * pad) * static_cast<double>(i) / static_cast<double>(np - 1);
        const double f = std::visit(
            [&](const auto& m) {
              if constexpr (std::is_same_v<std::decay_t<decltype(m)>, StableParams>)
                return pdf_univariate(x, m);
              else
                return pdf_mixture(x, m);
            },
            model);
        s << x << "," << f << "\n";
      }
      s << "bin_lo,bin_hi,count\n";
      const double width = (hi - lo > 0.0 ? hi - lo : 1.0) / static_cast<double>(o.bins);
      std::vector<std::size_t> counts(o.bins, 0);
      for (double v : y) {
        auto b = static_cast<std::size_t>((v - lo) / width);
        counts[std::min(b, o.bins - 1)]++;
      }
      for (std::size_t b = 0; b < o.bins; ++b)
        s << lo + width * static_cast<double>(b) << "," << lo + width * static_cast<double>(b + 1) << ","
          << counts[b] << "\n";
      out << s.str();
    };
  });

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  if (argv.empty()) argv.push_back("stablekit");
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    std::ostringstream o_out, o_err;
    const int code = app.exit(e, o_out, o_err);
    out << o_out.str();
    err << o_err.str();
    return code == 0 ? 0 : 1;
  }

  try {
    if (raw_action) {
      raw_action();
    } else if (action) {
      out << action().dump() << "\n";
    }
    return 0;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const ParseError& e) {
    err << "error: ParseError: " << e.what() << " (row " << e.row() << ", column " << e.column()
        << ")\n";
    return 1;
  } catch (const StableError& e) {
    err << "error: " << e.kind() << ": " << e.what() << "\n";
    return exit_code_for(e);
  }
}

}  // namespace stablekit
