#include "stablekit/simulate.hpp"

#include <cmath>
#include <numbers>

#include <boost/math/tools/roots.hpp>

#include "stablekit/density.hpp"
#include "stablekit/errors.hpp"

namespace stablekit {

namespace {

constexpr double kPi = std::numbers::pi;

// One S1(alpha, beta, 1, 0) draw (Chambers, Mallows and Stuck).
double cms_standard(double alpha, double beta, RngStream& rng) {
  const double v = kPi * (rng.uniform() - 0.5);
  const double w = rng.exponential();
  if (alpha == 1.0) {
    const double c = kPi / 2.0 + beta * v;
    return (2.0 / kPi) * (c * std::tan(v) - beta * std::log((kPi / 2.0) * w * std::cos(v) / c));
  }
  const double tn = alpha == 2.0 ? 0.0 : std::tan(kPi * alpha / 2.0);
  double b;
  if (alpha < 1.0 && std::abs(beta) == 1.0)
    b = beta * kPi / 2.0;
  else
    b = std::atan(beta * tn) / alpha;
  const double s = std::pow(1.0 + beta * beta * tn * tn, 1.0 / (2.0 * alpha));
  const double ab = alpha * (v + b);
  return s * std::sin(ab) / std::pow(std::cos(v), 1.0 / alpha) *
         std::pow(std::cos(v - ab) / w, (1.0 - alpha) / alpha);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream_id),
                    static_cast<std::uint32_t>(stream_id >> 32)};
  engine_.seed(seq);
}

double RngStream::uniform() {
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double m = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * m;
  has_spare_ = true;
  return u * m;
}

double RngStream::exponential() { return -std::log(uniform()); }

std::vector<double> rstable(std::size_t n, const StableParams& raw, RngStream& rng) {
  validate(raw);
  const StableParams p = normalized(raw);
  std::vector<double> out(n);
  const double a = p.alpha;
  const double shift0 = (a == 1.0 || a == 2.0) ? 0.0 : p.beta * std::tan(kPi * a / 2.0);
  for (auto& y : out) {
    double x = cms_standard(a, p.beta, rng);
    if (p.form == Form::S0 && a != 1.0) x -= shift0;
    y = p.sigma * x + p.mu;
    if (p.form == Form::S1 && a == 1.0 && p.beta != 0.0)
      y += (2.0 / kPi) * p.beta * p.sigma * std::log(p.sigma);
  }
  return out;
}

std::vector<double> rstable_positive(std::size_t n, double alpha_half, RngStream& rng) {
  const double scale = positive_stable_scale(alpha_half);
  std::vector<double> out(n);
  for (auto& p : out) {
    // The draw is positive in exact arithmetic; guard against underflow.
    do {
      p = scale * cms_standard(alpha_half, 1.0, rng);
    } while (!(p > 0.0));
  }
  return out;
}

std::vector<double> rstable_truncated(std::size_t n, const StableParams& params, double a,
                                      double b, RngStream& rng) {
  validate(params);
  if (!std::isfinite(a) || !std::isfinite(b) || !(a < b))
    throw DomainError("truncation bounds must be finite with a < b");
  const StableDensity dens(params);
  const double fa = dens.cdf(a);
  const double fb = dens.cdf(b);
  if (!(fb - fa > 1e-12))
    throw EmptyTruncationRegion("F(b) - F(a) = " + std::to_string(fb - fa) + " <= 1e-12");
  std::vector<double> out(n);
  auto done = [](double l, double r) { return r - l <= 1e-10; };
  for (auto& y : out) {
    const double u = fa + (fb - fa) * rng.uniform();
    std::uintmax_t iters = 200;
    const auto root = boost::math::tools::toms748_solve(
        [&](double t) { return dens.cdf(t) - u; }, a, b, fa - u, fb - u, done, iters);
    y = std::clamp(0.5 * (root.first + root.second), std::nextafter(a, b), std::nextafter(b, a));
  }
  return out;
}

Eigen::MatrixXd cholesky_factor(const Eigen::MatrixXd& sigma) {
  const Eigen::MatrixXd sym = 0.5 * (sigma + sigma.transpose());
  Eigen::LLT<Eigen::MatrixXd> llt(sym);
  if (llt.info() == Eigen::Success) return llt.matrixL();
  const double jitter = 1e-12 * std::max(1.0, sym.diagonal().cwiseAbs().maxCoeff());
  llt.compute(sym + jitter * Eigen::MatrixXd::Identity(sym.rows(), sym.cols()));
  if (llt.info() == Eigen::Success) return llt.matrixL();
  throw NotPositiveDefinite("Cholesky factorization failed even with jitter");
}

Eigen::MatrixXd rstable_elliptical(std::size_t n, const EllipticalParams& params,
                                   RngStream& rng) {
  validate(params);
  const Eigen::MatrixXd a = cholesky_factor(params.sigma);
  const auto d = params.dim();
  const auto rows = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd out(rows, d);
  Eigen::VectorXd z(d);
  const double alpha_half = params.alpha / 2.0;
  const double scale = params.alpha < 2.0 ? positive_stable_scale(alpha_half) : 1.0;
  for (Eigen::Index i = 0; i < rows; ++i) {
    double p = 1.0;
    if (params.alpha < 2.0) {
      do {
        p = scale * cms_standard(alpha_half, 1.0, rng);
      } while (!(p > 0.0));
    }
    for (Eigen::Index k = 0; k < d; ++k) z[k] = rng.normal();
    out.row(i) = (std::sqrt(2.0 * p) * (a * z) + params.mu).transpose();
  }
  return out;
}

Eigen::MatrixXd rstable_spectral(std::size_t n, const SpectralMeasure& measure, RngStream& rng) {
  validate(measure);
  const auto d = measure.dim();
  const auto rows = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd out(rows, d);
  std::vector<double> w(measure.masses.size());
  for (std::size_t j = 0; j < w.size(); ++j)
    w[j] = std::pow(measure.masses[j], 1.0 / measure.alpha);
  for (Eigen::Index i = 0; i < rows; ++i) {
    Eigen::VectorXd x = measure.mu;
    for (std::size_t j = 0; j < w.size(); ++j) {
      const double v = cms_standard(measure.alpha, 1.0, rng);
      x += w[j] * v * measure.points[j];
    }
    out.row(i) = x.transpose();
  }
  return out;
}

}  // namespace stablekit
