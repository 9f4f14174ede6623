#include "stablekit/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/tools/roots.hpp>

#include "stablekit/errors.hpp"
#include "stablekit/mixing.hpp"

namespace stablekit {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = 2.220446049250313e-16;
// Acceptance of a series value, on the standardized (sigma = 1) scale.
constexpr double kSeriesAbsTol = 1e-11;
constexpr double kSeriesRelTol = 1e-9;
// exp(-37) < 1e-16: the chf is negligible past this point.
constexpr double kChfCut = 37.0;

// Standardized alpha = 1 law with beta > 0 through the non-oscillatory
// integral over phi = pi/2 - theta in (0, pi):
//   f = 1/(2 beta) int exp(g - e^g),  F = 1/pi int exp(-e^g),
//   g = log V(phi) - pi x / (2 beta).
double alpha_one_integral(double x, double beta, bool cdf) {
  auto g = [&](double phi) {
    const double c = 0.5 * kPi * (1.0 + beta) - beta * phi;
    if (!(c > 0.0)) return -std::numeric_limits<double>::infinity();
    return std::log(2.0 / kPi) + std::log(c) - std::log(std::sin(phi)) +
           c * std::cos(phi) / std::sin(phi) / beta - kPi * x / (2.0 * beta);
  };
  const double lo = 1e-300, hi = kPi - 1e-12;
  std::vector<double> breaks{0.0};
  if (g(lo) > 0.0 && g(hi) < 0.0) {
    std::uintmax_t iters = 200;
    const auto r = boost::math::tools::toms748_solve(
        g, lo, hi, boost::math::tools::eps_tolerance<double>(40), iters);
    const double peak = 0.5 * (r.first + r.second);
    // g falls by about one unit over `width` around the peak.
    const double c = 0.5 * kPi * (1.0 + beta) - beta * peak;
    const double sn = std::sin(peak);
    const double slope = beta / c + 2.0 * std::cos(peak) / sn + c / (beta * sn * sn);
    const double width = 1.0 / slope;
    for (double k : {-32.0, -8.0, -3.0, -1.0, 1.0, 3.0, 8.0, 32.0})
      if (peak + k * width > 0.0 && peak + k * width < kPi) breaks.push_back(peak + k * width);
    for (double k : {1.0 / 64, 1.0 / 16, 0.25, 0.5, 1.0, 2.0, 4.0, 16.0, 64.0})
      if (peak * k < kPi) breaks.push_back(peak * k);
  }
  breaks.push_back(kPi);
  std::sort(breaks.begin(), breaks.end());
  auto f = [&](double phi) {
    if (phi <= 0.0) return cdf ? 0.0 : 0.0;
    const double v = g(phi);
    if (v > 700.0) return 0.0;
    const double e = std::exp(v);
    return cdf ? std::exp(-e) : std::exp(v - e);
  };
  const double integral =
      integrate<double>(f, std::span<const double>(breaks), QuadratureSpec{1e-300, 1e-9, 4000}).value;
  return cdf ? integral / kPi : integral / (2.0 * beta);
}

// Neumaier compensated sum.
struct Accumulator {
  double sum = 0.0;
  double comp = 0.0;
  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

// Sums sign_i * exp(logmag_i) * sin_i for i = 1..k with a truncation and
// rounding error estimate. Stops early once terms are negligible and falling,
// which also makes the divergent (asymptotic) expansions usable when their
// smallest term is small enough.
template <class LogMag>
std::pair<double, double> guarded_sum(int k, LogMag&& logmag, const std::vector<double>& sines,
                                      bool alternate_from_plus) {
  Accumulator acc;
  double abs_sum = 0.0;
  double prev = HUGE_VAL;
  double last = 0.0;
  double ratio = 1.0;
  for (int i = 1; i <= k; ++i) {
    const double lm = logmag(i);
    const double mag = lm < -745.0 ? 0.0 : std::exp(lm);
    if (!std::isfinite(mag)) return {0.0, HUGE_VAL};
    const double sign = ((i % 2 == 1) == alternate_from_plus) ? 1.0 : -1.0;
    const double term = sign * mag * sines[static_cast<std::size_t>(i - 1)];
    acc.add(term);
    abs_sum += std::abs(term);
    ratio = prev > 0.0 && std::isfinite(prev) ? mag / prev : 1.0;
    last = mag;
    if (i >= 3 && mag < prev && mag <= 1e-17 * std::abs(acc.value()))
      return {acc.value(), 2.0 * mag + 4.0 * kEps * abs_sum};
    if (mag == 0.0 && i >= 3) return {acc.value(), 4.0 * kEps * abs_sum};
    prev = mag;
  }
  if (!(ratio < 0.9)) return {acc.value(), HUGE_VAL};
  return {acc.value(), last * ratio / (1.0 - ratio) + 4.0 * kEps * abs_sum};
}

bool accept(double err, double value) {
  return err <= std::max(kSeriesAbsTol, kSeriesRelTol * std::abs(value));
}

}  // namespace

std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::TailSeries: return "TailSeries";
    case Regime::CoreSeries: return "CoreSeries";
    case Regime::Fallback: return "Fallback";
  }
  return "Fallback";
}

std::string_view to_string(Method m) {
  switch (m) {
    case Method::ClosedForm: return "ClosedForm";
    case Method::TailSeries: return "TailSeries";
    case Method::CoreSeries: return "CoreSeries";
    case Method::Quadrature: return "Quadrature";
  }
  return "Quadrature";
}

SeriesRegime classify_regime(double y, const StableParams& raw, int k) {
  validate(raw);
  const StableParams p = normalized(raw);
  if (p.alpha == 1.0) throw UnsupportedAlpha("series expansions require alpha != 1");
  if (k < 1) throw InvalidInput("series needs at least one term");
  const double a = p.alpha;
  const double tn = a == 2.0 ? 0.0 : std::tan(kPi * a / 2.0);
  SeriesRegime r;
  r.k = k;
  r.lambda = std::pow(1.0 + p.beta * p.beta * tn * tn, 1.0 / (2.0 * a));
  r.xi = p.form == Form::S0 ? -p.sigma * p.beta * tn : 0.0;
  const double x = y - p.mu - r.xi;
  const double sgn = x >= 0.0 ? 1.0 : -1.0;
  r.eta = (2.0 / kPi) * std::atan(p.beta * tn) * sgn;
  const double kd = static_cast<double>(k);
  r.tail_bound =
      p.sigma * r.lambda *
          std::exp((std::log(a) + std::lgamma(kd * a + a) - std::lgamma(kd * a + 1.0)) / a) +
      a;
  r.core_bound =
      p.sigma * r.lambda * a * std::exp(std::lgamma(kd / a + 1.0) - std::lgamma(kd / a + 1.0 / a)) -
      a;
  const double ax = std::abs(x);
  if (ax >= r.tail_bound)
    r.regime = Regime::TailSeries;
  else if (ax <= r.core_bound)
    r.regime = Regime::CoreSeries;
  else
    r.regime = Regime::Fallback;
  return r;
}

StableDensity::StableDensity(const StableParams& params, const QuadratureSpec& quad, int k)
    : quad_(quad), k_(k) {
  validate(params);
  if (k < 1) throw InvalidInput("series needs at least one term");
  params_ = normalized(params);
  special_ = special_case(params_);
  mu1_ = s1_location(params_);
  const double a = params_.alpha;
  if (a == 1.0 || a == 2.0) return;
  const double b = params_.beta;
  const double tn = std::tan(kPi * a / 2.0);
  lambda_ = std::pow(1.0 + b * b * tn * tn, 1.0 / (2.0 * a));
  zeta_ = std::atan(b * tn);
  // Keep the support edge of totally skewed laws exact.
  if (a < 1.0 && std::abs(b) == 1.0) zeta_ = b * kPi * a / 2.0;
  const double kd = static_cast<double>(k);
  tail_bound_ = lambda_ *
                    std::exp((std::log(a) + std::lgamma(kd * a + a) - std::lgamma(kd * a + 1.0)) / a) +
                a / params_.sigma;
  core_bound_ =
      lambda_ * a * std::exp(std::lgamma(kd / a + 1.0) - std::lgamma(kd / a + 1.0 / a)) -
      a / params_.sigma;
  tail_logc_.resize(static_cast<std::size_t>(k));
  core_logc_.resize(static_cast<std::size_t>(k));
  for (int s = 0; s < 2; ++s) {
    tail_sin_[s].resize(static_cast<std::size_t>(k));
    core_sin_[s].resize(static_cast<std::size_t>(k));
  }
  for (int i = 1; i <= k; ++i) {
    const auto idx = static_cast<std::size_t>(i - 1);
    const double id = static_cast<double>(i);
    tail_logc_[idx] = std::lgamma(id * a + 1.0) - std::lgamma(id + 1.0);
    core_logc_[idx] = std::lgamma(id / a + 1.0) - std::lgamma(id + 1.0);
    for (int s = 0; s < 2; ++s) {
      const double eta = (2.0 / kPi) * zeta_ * (s == 0 ? 1.0 : -1.0);
      const double arg = a + eta;
      // arg == 0 exactly on the empty side of a one-sided law.
      tail_sin_[s][idx] = arg == 0.0 ? 0.0 : std::sin(id * kPi * arg / 2.0);
      core_sin_[s][idx] = arg == 0.0 ? 0.0 : std::sin(id * kPi * arg / (2.0 * a));
    }
  }
}

// x is the standardized distance (y - mu1) / sigma.
StableDensity::SeriesSum StableDensity::tail_series(double x, bool cdf) const {
  const double a = params_.alpha;
  const int s = x >= 0.0 ? 0 : 1;
  const double sgn = s == 0 ? 1.0 : -1.0;
  const double r = std::abs(x) / lambda_;
  if (r == 0.0) return {0.0, false};
  const double lr = std::log(r);
  if (!cdf) {
    auto [sum, err] = guarded_sum(
        k_, [&](int i) { return tail_logc_[static_cast<std::size_t>(i - 1)] - i * a * lr; },
        tail_sin_[s], true);
    const double scale = 1.0 / (kPi * lambda_ * r);
    return {sum * scale, accept(err * scale, sum * scale)};
  }
  auto [sum, err] = guarded_sum(
      k_,
      [&](int i) {
        return tail_logc_[static_cast<std::size_t>(i - 1)] - std::log(i * a) - i * a * lr;
      },
      tail_sin_[s], false);
  return {(1.0 + sgn) / 2.0 + sgn * sum / kPi, accept(err / kPi, sum / kPi)};
}

StableDensity::SeriesSum StableDensity::core_series(double x, bool cdf) const {
  const double a = params_.alpha;
  const int s = x >= 0.0 ? 0 : 1;
  const double sgn = s == 0 ? 1.0 : -1.0;
  const double r = std::abs(x) / lambda_;
  if (!cdf) {
    if (r == 0.0) {
      const double v = std::exp(core_logc_[0]) * core_sin_[0][0] / (kPi * lambda_);
      return {v, true};
    }
    const double lr = std::log(r);
    auto [sum, err] = guarded_sum(
        k_, [&](int i) { return core_logc_[static_cast<std::size_t>(i - 1)] + (i - 1) * lr; },
        core_sin_[s], true);
    const double scale = 1.0 / (kPi * lambda_);
    return {sum * scale, accept(err * scale, sum * scale)};
  }
  const double base = 0.5 - zeta_ / (kPi * a);
  if (r == 0.0) return {base, true};
  const double lr = std::log(r);
  auto [sum, err] = guarded_sum(
      k_,
      [&](int i) { return core_logc_[static_cast<std::size_t>(i - 1)] - std::log(i) + i * lr; },
      core_sin_[s], false);
  return {base - sgn * sum / kPi, accept(err / kPi, sum / kPi)};
}

bool StableDensity::closed_form(double y, bool cdf, double& out) const {
  const StableParams& p = params_;
  if (special_ == SpecialCase::Gaussian) {
    const double z = (y - p.mu) / (2.0 * p.sigma);
    out = cdf ? 0.5 * std::erfc(-z) : std::exp(-z * z) / (2.0 * p.sigma * std::sqrt(kPi));
    return true;
  }
  if (special_ == SpecialCase::Cauchy) {
    const double z = (y - p.mu) / p.sigma;
    if (cdf)
      out = z < 0.0 ? std::atan(-1.0 / z) / kPi : 0.5 + std::atan(z) / kPi;
    else
      out = 1.0 / (kPi * p.sigma * (1.0 + z * z));
    return true;
  }
  if (p.alpha < 1.0 && std::abs(p.beta) == 1.0) {
    // Totally skewed with one-sided support [mu1, inf) (beta = 1) or (-inf, mu1].
    const double x = p.beta > 0.0 ? y - mu1_ : mu1_ - y;
    if (x <= 0.0) {
      out = cdf ? (p.beta > 0.0 ? 0.0 : 1.0) : 0.0;
      return true;
    }
    if (special_ == SpecialCase::Levy) {
      const double c = p.sigma;
      if (cdf) {
        const double q = std::sqrt(c / (2.0 * x));
        out = p.beta > 0.0 ? std::erfc(q) : std::erf(q);
      } else {
        out = std::sqrt(c / (2.0 * kPi)) * std::pow(x, -1.5) * std::exp(-c / (2.0 * x));
      }
      return true;
    }
    if (!cdf) {
      // Near the edge the series cancel to rounding noise; use the leading
      // saddle-point term for Laplace transform exp(-s^a) instead.
      const double a = p.alpha;
      const double lambda = p.sigma / std::pow(std::cos(kPi * a / 2.0), 1.0 / a);
      const double u = x / lambda;
      const double lu = std::log(u);
      const double e = (1.0 - a) * std::exp(a / (1.0 - a) * (std::log(a) - lu));
      const double log_amp = 0.5 * (std::log(a) / (1.0 - a) - std::log(2.0 * kPi * (1.0 - a)));
      const double log_f = log_amp - (2.0 - a) / (2.0 * (1.0 - a)) * lu - e;
      // Below 1e-9 its relative error keeps the absolute error under the series tolerance.
      if (e > 10.0 && log_f < std::log(1e-9)) {
        out = std::exp(log_f) / lambda;
        return true;
      }
    }
  }
  return false;
}

Evaluation StableDensity::evaluate_pdf(double y) const {
  if (!std::isfinite(y)) return {0.0, Method::ClosedForm};
  double v;
  if (closed_form(y, false, v)) return {v, Method::ClosedForm};
  if (params_.alpha == 1.0) return {pdf_quadrature(y), Method::Quadrature};
  const double x = (y - mu1_) / params_.sigma;
  const double ax = std::abs(x);
  const bool tail_first = ax >= tail_bound_ || (ax > core_bound_ && params_.alpha < 1.0);
  for (int pass = 0; pass < 2; ++pass) {
    const bool tail = (pass == 0) == tail_first;
    const SeriesSum s = tail ? tail_series(x, false) : core_series(x, false);
    if (s.ok) return {std::max(0.0, s.value) / params_.sigma,
                      tail ? Method::TailSeries : Method::CoreSeries};
  }
  return {pdf_quadrature(y), Method::Quadrature};
}

Evaluation StableDensity::evaluate_cdf(double y) const {
  if (std::isnan(y)) throw DomainError("cdf argument is NaN");
  if (std::isinf(y)) return {y > 0.0 ? 1.0 : 0.0, Method::ClosedForm};
  double v;
  if (closed_form(y, true, v)) return {v, Method::ClosedForm};
  if (params_.alpha == 1.0) return {cdf_quadrature(y), Method::Quadrature};
  const double x = (y - mu1_) / params_.sigma;
  const double ax = std::abs(x);
  const bool tail_first = ax >= tail_bound_ || (ax > core_bound_ && params_.alpha < 1.0);
  for (int pass = 0; pass < 2; ++pass) {
    const bool tail = (pass == 0) == tail_first;
    const SeriesSum s = tail ? tail_series(x, true) : core_series(x, true);
    if (s.ok) return {std::clamp(s.value, 0.0, 1.0),
                      tail ? Method::TailSeries : Method::CoreSeries};
  }
  return {cdf_quadrature(y), Method::Quadrature};
}

double StableDensity::log_pdf(double y) const { return std::log(std::max(pdf(y), kPdfFloor)); }

double StableDensity::pdf_quadrature(double y) const {
  return std::max(0.0, inversion(y, false)) / params_.sigma;
}

double StableDensity::cdf_quadrature(double y) const {
  return std::clamp(inversion(y, true), 0.0, 1.0);
}

// Inversion of the standardized S0 chf:
//   f = (1/pi) int_0^inf exp(-t^a) cos(phi(t)) dt
//   F = 1/2 - (1/pi) int_0^inf exp(-t^a) sin(phi(t)) / t dt
// with phi(t) = beta tan(pi a/2) (t^a - t) - t x (x centred by the S0 location),
// or -beta (2/pi) t log t - t x at a = 1.
// For a < 1 the integral is taken in s = t^a.
double StableDensity::inversion(double y, bool cdf) const {
  const StableParams& p = params_;
  const double a = p.alpha;
  const double b = p.beta;
  if (a == 1.0 && b != 0.0) {
    const double x0 = (y - convert_form(p, Form::S0).mu) / p.sigma;
    if (std::abs(x0) > 1e6) {
      // Pareto tails; the next term is smaller by a factor log|x| / |x|.
      const double w = (1.0 + (x0 > 0.0 ? b : -b)) / kPi;
      if (!cdf) return w / (x0 * x0);
      return x0 > 0.0 ? 1.0 - w / x0 : w / -x0;
    }
    if (std::abs(x0) > 10.0) {
      if (b > 0.0) return alpha_one_integral(x0, b, cdf);
      return cdf ? 1.0 - alpha_one_integral(-x0, -b, true) : alpha_one_integral(-x0, -b, false);
    }
  }
  const double c = (a == 1.0 || a == 2.0) ? 0.0 : b * std::tan(kPi * a / 2.0);
  // Near alpha = 1 the S0 centring avoids the pole of tan; elsewhere the S1
  // centring avoids cancelling two large linear terms.
  const bool s0_centre = a == 1.0 || std::abs(a - 1.0) < 0.25;
  const double x = (y - (s0_centre ? convert_form(p, Form::S0).mu : mu1_)) / p.sigma;
  auto phase = [&](double t) {
    if (t == 0.0) return 0.0;
    const double lt = std::log(t);
    if (a == 1.0) return -b * (2.0 / kPi) * t * lt - t * x;
    if (c == 0.0) return -t * x;
    if (!s0_centre) return c * std::exp(a * lt) - t * x;
    // c (t^a - t), stable near a = 1
    return c * t * std::expm1((a - 1.0) * lt) - t * x;
  };
  const bool in_s = a < 1.0;
  const double upper = in_s ? kChfCut : std::pow(kChfCut, 1.0 / a);
  auto to_t = [&](double u) { return in_s ? std::pow(u, 1.0 / a) : u; };

  // Initial panels from the total variation of the phase.
  double variation = 0.0;
  {
    constexpr int kProbe = 128;
    double prev = 0.0;
    for (int j = 1; j <= kProbe; ++j) {
      const double ph = phase(to_t(upper * j / kProbe));
      variation += std::abs(ph - prev);
      prev = ph;
    }
  }
  const int panels = std::clamp(static_cast<int>(std::ceil(variation / kPi)) + 4, 8, 3000);
  std::vector<double> breaks(static_cast<std::size_t>(panels) + 1);
  for (int j = 0; j <= panels; ++j) breaks[static_cast<std::size_t>(j)] = upper * j / panels;

  QuadratureSpec spec = quad_;
  spec.max_subdivisions = std::max(spec.max_subdivisions, 4 * panels);
  double integral;
  if (!cdf) {
    auto f = [&](double u) {
      if (in_s) {
        const double t = to_t(u);
        return std::exp(-u) * std::cos(phase(t)) * std::pow(u, 1.0 / a - 1.0) / a;
      }
      return std::exp(-std::pow(u, a)) * std::cos(phase(u));
    };
    integral = integrate<double>(f, std::span<const double>(breaks), spec).value;
    return integral / kPi;
  }
  auto g = [&](double u) {
    if (in_s) return std::exp(-u) * std::sin(phase(to_t(u))) / (a * u);
    return std::exp(-std::pow(u, a)) * std::sin(phase(u)) / u;
  };
  integral = integrate<double>(g, std::span<const double>(breaks), spec).value;
  return 0.5 - integral / kPi;
}

double pdf_univariate(double y, const StableParams& params) {
  return StableDensity(params).pdf(y);
}

double cdf_univariate(double y, const StableParams& params) {
  return StableDensity(params).cdf(y);
}

double positive_stable_scale(double alpha_half) {
  if (!(alpha_half > 0.0 && alpha_half < 1.0))
    throw DomainError("alpha_half = " + std::to_string(alpha_half) +
                      " outside admissible range (0, 1)");
  return std::pow(std::cos(kPi * alpha_half / 2.0), 1.0 / alpha_half);
}

StableParams positive_stable_params(double alpha_half) {
  return {alpha_half, 1.0, positive_stable_scale(alpha_half), 0.0, Form::S1};
}

double pdf_positive_stable(double p, double alpha_half) {
  const StableParams ps = positive_stable_params(alpha_half);
  if (!(p > 0.0)) return 0.0;
  return StableDensity(ps).pdf(p);
}

double pdf_elliptical(const Eigen::VectorXd& z, const EllipticalParams& params) {
  validate(params);
  const auto d = params.dim();
  if (z.size() != d)
    throw DimensionMismatch("point has dimension " + std::to_string(z.size()) + ", expected " +
                            std::to_string(d));
  const Eigen::LLT<Eigen::MatrixXd> llt(params.sigma);
  if (llt.info() != Eigen::Success) throw NotPositiveDefinite("Cholesky of Sigma failed");
  const Eigen::VectorXd r = llt.matrixL().solve(z - params.mu);
  const double delta = r.squaredNorm();
  const double log_det = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
  const double dd = static_cast<double>(d);
  auto kernel_log = [&](double p) {
    return -0.5 * dd * std::log(4.0 * kPi * p) - delta / (4.0 * p) - 0.5 * log_det;
  };
  if (params.alpha == 2.0) return std::exp(kernel_log(1.0));

  const double a = params.alpha / 2.0;
  const StableDensity fp(positive_stable_params(a));
  // U = log P; the integrand in u is N_d(z; mu, 2 e^u Sigma) e^u f_P(e^u).
  auto h = [&](double u) {
    const double p = std::exp(u);
    const double f = fp.pdf(p);
    if (f <= 0.0) return 0.0;
    return std::exp(kernel_log(p) + u) * f;
  };
  const MixingRange range = mixing_range(params.alpha, std::max(delta, 1.0), static_cast<int>(d));
  std::vector<double> breaks;
  for (double u = range.lo; u < range.hi; u += range.step) breaks.push_back(u);
  breaks.push_back(range.hi);
  QuadratureSpec spec;
  spec.abs_tol = 1e-16;
  spec.rel_tol = 1e-10;
  return integrate<double>(h, std::span<const double>(breaks), spec).value;
}

double pdf_mixture(double y, const MixtureSpec& spec) {
  validate(spec);
  double s = 0.0;
  for (std::size_t j = 0; j < spec.size(); ++j)
    if (spec.weights[j] > 0.0) s += spec.weights[j] * pdf_univariate(y, spec.components[j]);
  return s;
}

double cdf_mixture(double y, const MixtureSpec& spec) {
  validate(spec);
  double s = 0.0;
  for (std::size_t j = 0; j < spec.size(); ++j)
    if (spec.weights[j] > 0.0) s += spec.weights[j] * cdf_univariate(y, spec.components[j]);
  return std::clamp(s, 0.0, 1.0);
}

double loglik(std::span<const double> data, const StableParams& params) {
  if (data.empty()) throw InvalidInput("log-likelihood of an empty sample");
  const StableDensity dens(params);
  double s = 0.0;
  for (double y : data) s += dens.log_pdf(y);
  return s;
}

double loglik(std::span<const double> data, const MixtureSpec& spec) {
  if (data.empty()) throw InvalidInput("log-likelihood of an empty sample");
  validate(spec);
  std::vector<StableDensity> comps;
  comps.reserve(spec.size());
  for (const auto& c : spec.components) comps.emplace_back(c);
  double s = 0.0;
  for (double y : data) {
    double g = 0.0;
    for (std::size_t j = 0; j < comps.size(); ++j)
      if (spec.weights[j] > 0.0) g += spec.weights[j] * comps[j].pdf(y);
    s += std::log(std::max(g, kPdfFloor));
  }
  return s;
}

double loglik(const Eigen::MatrixXd& data, const EllipticalParams& params) {
  if (data.rows() == 0) throw InvalidInput("log-likelihood of an empty sample");
  validate(params);
  if (data.cols() != params.dim())
    throw DimensionMismatch("data has " + std::to_string(data.cols()) + " columns, expected " +
                            std::to_string(params.dim()));
  const Eigen::LLT<Eigen::MatrixXd> llt(params.sigma);
  if (llt.info() != Eigen::Success) throw NotPositiveDefinite("Cholesky of Sigma failed");
  const Eigen::MatrixXd centered = data.rowwise() - params.mu.transpose();
  const Eigen::MatrixXd r = llt.matrixL().solve(centered.transpose());
  const Eigen::VectorXd delta = r.colwise().squaredNorm().transpose();
  const double log_det = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
  const int d = static_cast<int>(params.dim());
  const MixingRule rule(params.alpha, delta.maxCoeff(), d);
  double s = 0.0;
  for (Eigen::Index i = 0; i < delta.size(); ++i) {
    const double f = rule.normal_kernel(delta[i]).density;
    s += std::log(std::max(f * std::exp(-0.5 * log_det), kPdfFloor));
  }
  return s;
}

}  // namespace stablekit
