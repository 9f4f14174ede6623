#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "stablekit/em_fit.hpp"
#include "stablekit/mixing.hpp"

namespace stablekit::detail {

/// Quadrature rule for the E-step, or a Monte Carlo rule when it cannot be built.
MixingRule make_rule(double alpha, double delta_max, int d, const EmConfig& cfg);

/// n >= 10, finite, not all equal.
void check_sample(std::span<const double> data);

/// Brent maximization of f on [lo, hi]. Returns the better of the optimum and
/// the incumbent (x0, f0).
std::pair<double, double> maximize_1d(const std::function<double(double)>& f, double lo,
                                      double hi, double x0, double f0);

/// Posterior moments for the skewed representation
///   Y = eta sqrt(2P) N + theta V + m,  V ~ S1(alpha, 1, 1, 0)
/// (V ~ S1(1, 1, 1, 0) and Cauchy N/Z at alpha = 1).
class SkewMoments {
 public:
  SkewMoments(double alpha, const EmConfig& cfg);

  struct Result {
    double density;  ///< f(y)
    double a;        ///< E[1/P | y]
    double b;        ///< E[V/P | y]
  };

  /// x = y - m.
  Result at(double x, double eta, double theta) const;

  /// Standardized symmetric kernels at z = u / eta: density of sqrt(2P)N and
  /// the same integral with an extra factor 1/P.
  std::pair<double, double> kernel(double z) const;

 private:
  double log_fv(double w) const;
  double v_of(double w) const;
  double dv_dw(double w) const;
  double w_of(double v) const;

  double alpha_;
  bool positive_v_;  // V > 0 (alpha < 1): w = log v, else w = asinh v
  double w0_ = 0.0, dw_ = 0.02;
  std::vector<double> logf_;
  double ks_ = 0.01;  // kernel table step in asinh(z)
  std::vector<double> log_g_, log_q_;
  std::optional<MixingRule> rule_;
};

}  // namespace stablekit::detail
