#pragma once

#include <cstdint>
#include <vector>

namespace stablekit {

/// Integration range for U = log P, where P is the positive stable mixing
/// variable of an alpha-stable normal scale mixture in dimension d.
struct MixingRange {
  double lo;
  double hi;
  double step;  ///< initial panel width
};

MixingRange mixing_range(double alpha, double delta_max, int d);

/// Fixed quadrature rule for expectations over P, built adaptively on the
/// log-p axis against pdf_positive_stable. Nodes p_k carry masses w_k so that
/// E g(P) ~ sum_k w_k g(p_k) for kernels smooth in log p.
class MixingRule {
 public:
  /// delta_max: largest squared standardized distance the rule must serve.
  MixingRule(double alpha, double delta_max = 1.0, int d = 1, int min_nodes = 96);

  /// Equal-mass rule from `draws` simulated values of P.
  static MixingRule monte_carlo(double alpha, int draws, std::uint64_t seed, int d = 1);

  struct Moments {
    double density;  ///< int (4 pi p)^(-d/2) exp(-delta / (4p)) dF_P(p)
    double inv_p;    ///< same with an extra factor 1/p
    double mean_inv_p() const { return inv_p / density; }
  };

  /// Standardized d-variate normal kernel averaged over P at squared
  /// Mahalanobis distance delta (covariance 2 p Sigma, |Sigma| = 1).
  Moments normal_kernel(double delta) const;

  double alpha() const { return alpha_; }
  int dim() const { return d_; }
  const std::vector<double>& nodes() const { return p_; }
  const std::vector<double>& masses() const { return w_; }

 private:
  MixingRule() = default;
  void finish();

  double alpha_ = 2.0;
  int d_ = 1;
  std::vector<double> p_, w_;
  std::vector<double> log_c_, inv4p_, inv_p_;
  double p_max_ = 1.0;
};

}  // namespace stablekit
