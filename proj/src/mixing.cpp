#include "stablekit/mixing.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "stablekit/density.hpp"
#include "stablekit/errors.hpp"
#include "stablekit/quadrature.hpp"
#include "stablekit/simulate.hpp"

namespace stablekit {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEulerGamma = std::numbers::egamma;
constexpr double kPanelTol = 1e-11;
constexpr int kMaxDepth = 40;

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha <= 2.0))
    throw DomainError("alpha = " + std::to_string(alpha) + " outside admissible range (0, 2]");
}

}  // namespace

MixingRange mixing_range(double alpha, double delta_max, int d) {
  check_alpha(alpha);
  const double a = alpha / 2.0;
  // log P has mean gamma_E (1/a - 1) and variance (pi^2 / 6)(1/a^2 - 1).
  const double mean = kEulerGamma * (1.0 / a - 1.0);
  const double sd = kPi / std::sqrt(6.0) * std::sqrt(std::max(1.0 / (a * a) - 1.0, 0.0));
  // Left tail: log f_P(p) ~ -(1 - a) (a / p)^(a / (1 - a)) as p -> 0.
  const double lo = std::log(a) - (1.0 - a) / a * std::log(90.0 / (1.0 - a));
  // Right: the kernel-weighted tail decays like p^-(a + d/2).
  const double hi = std::max(std::log(std::max(delta_max, 1.0)), mean + 3.0 * sd) +
                    40.0 / (a + 0.5 * d) + 2.0;
  const double step = std::clamp(0.5 * sd, 0.05, 1.0);
  return {std::min(lo, mean - 1.0), hi, step};
}

MixingRule::MixingRule(double alpha, double delta_max, int d, int min_nodes)
    : alpha_(alpha), d_(d) {
  check_alpha(alpha);
  if (d < 1) throw DimensionMismatch("dimension must be positive");
  if (alpha == 2.0) {
    p_ = {1.0};
    w_ = {1.0};
    finish();
    return;
  }
  const double a = alpha / 2.0;
  const StableDensity fp(positive_stable_params(a));
  auto h = [&](double u) {
    const double p = std::exp(u);
    return p * fp.pdf(p);
  };
  const MixingRange range = mixing_range(alpha, delta_max, d);
  struct Piece {
    double lo, hi;
  };
  // Panels widen away from the bulk of log P, up to width 2.
  const double centre = kEulerGamma * (2.0 / alpha - 1.0);
  auto width = [&](double u) {
    return std::min(2.0, range.step * (1.0 + std::abs(u - centre) / (4.0 * range.step)));
  };
  std::vector<Piece> todo;
  for (double u = range.lo; u < range.hi;) {
    const double next = std::min(u + width(u), range.hi);
    todo.push_back({u, next});
    u = next;
  }

  // Refine on the mixing density itself until each panel's Gauss/Kronrod
  // difference is negligible.
  std::vector<double> us, ws;
  std::function<void(double, double, int)> refine = [&](double lo, double hi, int depth) {
    const double c = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    std::array<double, 21> x{}, fx{}, wk{};
    double kron = 0.0, gauss = 0.0;
    int n = 0;
    for (int j = 0; j < 10; ++j) {
      for (int side : {-1, 1}) {
        x[n] = c + side * half * detail::kXgk[j];
        fx[n] = h(x[n]);
        wk[n] = detail::kWgk[j] * half;
        kron += wk[n] * fx[n];
        if (j % 2 == 1) gauss += detail::kWg[j / 2] * half * fx[n];
        ++n;
      }
    }
    x[n] = c;
    fx[n] = h(c);
    wk[n] = detail::kWgk[10] * half;
    kron += wk[n] * fx[n];
    ++n;
    if (std::abs(kron - gauss) > kPanelTol && depth < kMaxDepth) {
      refine(lo, c, depth + 1);
      refine(c, hi, depth + 1);
      return;
    }
    for (int j = 0; j < n; ++j) {
      us.push_back(x[j]);
      ws.push_back(wk[j] * fx[j]);
    }
  };
  for (;;) {
    us.clear();
    ws.clear();
    for (const auto& piece : todo) refine(piece.lo, piece.hi, 0);
    if (static_cast<int>(us.size()) >= min_nodes) break;
    std::vector<Piece> finer;
    for (const auto& piece : todo) {
      const double mid = 0.5 * (piece.lo + piece.hi);
      finer.push_back({piece.lo, mid});
      finer.push_back({mid, piece.hi});
    }
    todo = std::move(finer);
  }
  for (std::size_t k = 0; k < us.size(); ++k) {
    if (ws[k] <= 0.0) continue;
    p_.push_back(std::exp(us[k]));
    w_.push_back(ws[k]);
  }
  if (p_.empty()) throw NumericalFailure("mixing rule has no positive mass");
  finish();
}

MixingRule MixingRule::monte_carlo(double alpha, int draws, std::uint64_t seed, int d) {
  check_alpha(alpha);
  if (draws < 1) throw InvalidInput("Monte Carlo rule needs at least one draw");
  MixingRule rule;
  rule.alpha_ = alpha;
  rule.d_ = d;
  if (alpha == 2.0) {
    rule.p_ = {1.0};
  } else {
    RngStream rng(seed, 0x6d697869ULL);
    rule.p_ = rstable_positive(static_cast<std::size_t>(draws), alpha / 2.0, rng);
    std::sort(rule.p_.begin(), rule.p_.end());
  }
  rule.w_.assign(rule.p_.size(), 1.0 / static_cast<double>(rule.p_.size()));
  rule.finish();
  return rule;
}

void MixingRule::finish() {
  const double dd = static_cast<double>(d_);
  log_c_.resize(p_.size());
  inv4p_.resize(p_.size());
  inv_p_.resize(p_.size());
  p_max_ = 0.0;
  for (std::size_t k = 0; k < p_.size(); ++k) {
    log_c_[k] = std::log(w_[k]) - 0.5 * dd * std::log(4.0 * kPi * p_[k]);
    inv4p_[k] = 0.25 / p_[k];
    inv_p_[k] = 1.0 / p_[k];
    p_max_ = std::max(p_max_, p_[k]);
  }
}

MixingRule::Moments MixingRule::normal_kernel(double delta) const {
  const double dd = static_cast<double>(d_);
  const double a = alpha_ / 2.0;
  // Beyond the rule's reach use the leading tail term of f_P.
  if (alpha_ < 2.0 && delta * 0.25 > p_max_ * std::exp(-8.0)) {
    const double e = 0.5 * dd + a;
    const double dens = a / std::tgamma(1.0 - a) * std::pow(4.0 * kPi, -0.5 * dd) *
                        std::tgamma(e) * std::pow(0.25 * delta, -e);
    return {dens, dens * 4.0 * e / delta};
  }
  double f = 0.0, g = 0.0;
  for (std::size_t k = 0; k < p_.size(); ++k) {
    const double v = std::exp(log_c_[k] - delta * inv4p_[k]);
    f += v;
    g += v * inv_p_[k];
  }
  return {f, g};
}

}  // namespace stablekit
