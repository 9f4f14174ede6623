#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "em_internal.hpp"
#include "stablekit/density.hpp"
#include "stablekit/errors.hpp"
#include "stablekit/quadrature.hpp"

namespace stablekit::detail {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kKernelSMax = 12.0;  // asinh(z) range of the kernel table
constexpr double kVMax = 1e10;

// Catmull-Rom interpolation of a uniformly tabulated log-function at the
// fractional index t; -inf entries force linear interpolation.
double interp(const std::vector<double>& y, double t) {
  const auto n = static_cast<long>(y.size());
  long i = static_cast<long>(std::floor(t));
  i = std::clamp(i, 0L, n - 2);
  const double u = t - static_cast<double>(i);
  const double y1 = y[static_cast<std::size_t>(i)];
  const double y2 = y[static_cast<std::size_t>(i + 1)];
  if (y1 == kNegInf || y2 == kNegInf) return u < 0.5 ? y1 : y2;
  if (i == 0 || i + 2 >= n) return y1 + u * (y2 - y1);
  const double y0 = y[static_cast<std::size_t>(i - 1)];
  const double y3 = y[static_cast<std::size_t>(i + 2)];
  if (y0 == kNegInf || y3 == kNegInf) return y1 + u * (y2 - y1);
  return y1 + 0.5 * u *
                  (y2 - y0 + u * (2.0 * y0 - 5.0 * y1 + 4.0 * y2 - y3 +
                                  u * (3.0 * (y1 - y2) + y3 - y0)));
}

}  // namespace

SkewMoments::SkewMoments(double alpha, const EmConfig& cfg)
    : alpha_(alpha), positive_v_(alpha < 1.0) {
  if (!(alpha > 0.0 && alpha < 2.0)) throw DomainError("skewed E-step needs alpha in (0, 2)");
  const StableDensity fv(StableParams{alpha, 1.0, 1.0, 0.0, Form::S1});
  double lo, hi;
  if (positive_v_) {
    // V = P' / gamma with P' of Laplace transform exp(-s^alpha).
    const double gamma = std::pow(std::cos(kPi * alpha / 2.0), 1.0 / alpha);
    lo = std::log(alpha) - (1.0 - alpha) / alpha * std::log(90.0 / (1.0 - alpha)) -
         std::log(gamma) - 1.0;
    hi = std::log(kVMax);
  } else {
    // Walk left past the mode until the light left tail is negligible.
    double fmax = 0.0, v = 2.0;
    for (int steps = 0; steps < 40000; ++steps, v -= 0.25) {
      const double f = fv.pdf(v);
      fmax = std::max(fmax, f);
      if (fmax > 0.0 && f < 1e-13 * fmax && v < 0.0) break;
    }
    lo = std::asinh(v);
    hi = std::asinh(kVMax);
  }
  w0_ = lo;
  const auto n = static_cast<std::size_t>(std::ceil((hi - lo) / dw_)) + 1;
  logf_.resize(n);
  double fmax = 0.0;
  std::size_t imax = 0;
  std::vector<double> f(n);
  for (std::size_t k = 0; k < n; ++k) {
    f[k] = fv.pdf(v_of(w0_ + dw_ * static_cast<double>(k)));
    if (f[k] > fmax) fmax = f[k], imax = k;
  }
  for (std::size_t k = 0; k < n; ++k) {
    // Below the mode, tiny values are inversion noise.
    const bool noise = k < imax && f[k] < 1e-13 * fmax;
    logf_[k] = (f[k] > 0.0 && !noise) ? std::log(f[k]) : kNegInf;
  }

  if (alpha != 1.0) {
    const double zmax = std::sinh(kKernelSMax);
    rule_.emplace(make_rule(alpha, zmax * zmax, 1, cfg));
    const auto m = static_cast<std::size_t>(std::ceil(kKernelSMax / ks_)) + 1;
    log_g_.resize(m);
    log_q_.resize(m);
    for (std::size_t k = 0; k < m; ++k) {
      const double z = std::sinh(ks_ * static_cast<double>(k));
      const auto mo = rule_->normal_kernel(z * z);
      log_g_[k] = mo.density > 0.0 ? std::log(mo.density) : kNegInf;
      log_q_[k] = mo.inv_p > 0.0 ? std::log(mo.inv_p) : kNegInf;
    }
  }
}

double SkewMoments::v_of(double w) const { return positive_v_ ? std::exp(w) : std::sinh(w); }
double SkewMoments::dv_dw(double w) const { return positive_v_ ? std::exp(w) : std::cosh(w); }
double SkewMoments::w_of(double v) const { return positive_v_ ? std::log(v) : std::asinh(v); }

double SkewMoments::log_fv(double w) const {
  const double t = (w - w0_) / dw_;
  if (t < 0.0) return kNegInf;
  const double last = static_cast<double>(logf_.size() - 1);
  if (t > last) {
    // power-law extrapolation of the right tail
    const double y1 = logf_[logf_.size() - 2], y2 = logf_.back();
    if (y1 == kNegInf || y2 == kNegInf) return kNegInf;
    return y2 + (t - last) * (y2 - y1);
  }
  return interp(logf_, t);
}

std::pair<double, double> SkewMoments::kernel(double z) const {
  z = std::abs(z);
  if (alpha_ == 1.0) {
    const double g = 1.0 / (kPi * (1.0 + z * z));
    return {g, g * 4.0 / (1.0 + z * z)};
  }
  const double s = std::asinh(z);
  if (s < kKernelSMax) {
    const double t = s / ks_;
    return {std::exp(interp(log_g_, t)), std::exp(interp(log_q_, t))};
  }
  const auto mo = rule_->normal_kernel(z * z);
  return {mo.density, mo.inv_p};
}

SkewMoments::Result SkewMoments::at(double x, double eta, double theta) const {
  if (!(eta > 0.0)) throw DomainError("skewed E-step needs a positive symmetric scale");
  if (theta == 0.0) {
    const auto [g, q] = kernel(x / eta);
    return {g / eta, g > 0.0 ? q / g : 0.0, 0.0};
  }
  const double w_lo = w0_;
  const double w_hi = w0_ + dw_ * static_cast<double>(logf_.size() - 1);
  std::vector<double> breaks{w_lo, w_hi};
  const double vstar = x / theta;
  const double eps = eta / std::abs(theta);
  for (double k : {-30.0, -10.0, -3.0, -1.0, 0.0, 1.0, 3.0, 10.0, 30.0}) {
    const double v = vstar + k * eps;
    if (positive_v_ && !(v > 0.0)) continue;
    const double w = w_of(v);
    if (w > w_lo && w < w_hi) breaks.push_back(w);
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  std::array<double, 3> scale{1.0, 1.0, 1.0};
  auto f = [&](double w) -> std::array<double, 3> {
    const double lf = log_fv(w);
    if (lf == kNegInf) return {0.0, 0.0, 0.0};
    const double v = v_of(w);
    const double fw = std::exp(lf) * dv_dw(w);
    const auto [g, q] = kernel((x - theta * v) / eta);
    return {fw * g / scale[0], fw * q / scale[1], fw * v * q / scale[2]};
  };
  QuadratureSpec rough{1e-300, 1e-4, 2000};
  const auto r1 = integrate<std::array<double, 3>>(f, std::span<const double>(breaks), rough).value;
  if (!(r1[0] > 0.0)) return {0.0, 0.0, 0.0};
  scale = {r1[0], std::max(std::abs(r1[1]), 1e-300),
           std::max(std::abs(r1[2]), 1e-3 * std::abs(r1[1]) * (1.0 + std::abs(vstar)))};
  std::array<double, 3> r2;
  try {
    const auto res = integrate<std::array<double, 3>>(f, std::span<const double>(breaks),
                                                      QuadratureSpec{1e-10, 1e-10, 4000});
    r2 = {res.value[0] * scale[0], res.value[1] * scale[1], res.value[2] * scale[2]};
  } catch (const NumericalFailure&) {
    r2 = r1;
  }
  if (!(r2[0] > 0.0)) return {0.0, 0.0, 0.0};
  return {r2[0] / eta, r2[1] / r2[0], r2[2] / r2[0]};
}

}  // namespace stablekit::detail
