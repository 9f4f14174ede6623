#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "stablekit/params.hpp"
#include "stablekit/quadrature.hpp"

namespace stablekit {

inline constexpr int kSeriesTerms = 150;
/// Densities are floored here before taking logs.
inline constexpr double kPdfFloor = 1e-300;

enum class Regime { TailSeries, CoreSeries, Fallback };

std::string_view to_string(Regime r);

struct SeriesRegime {
  int k = kSeriesTerms;
  double lambda = 1.0;
  double eta = 0.0;
  double xi = 0.0;
  Regime regime = Regime::Fallback;
  double tail_bound = 0.0;  ///< |y - mu - xi| at or above this is TailSeries
  double core_bound = 0.0;  ///< |y - mu - xi| at or below this is CoreSeries
};

/// Throws UnsupportedAlpha at alpha = 1.
SeriesRegime classify_regime(double y, const StableParams& params, int k = kSeriesTerms);

/// How a value was produced (exposed for tests and diagnostics).
enum class Method { ClosedForm, TailSeries, CoreSeries, Quadrature };

std::string_view to_string(Method m);

struct Evaluation {
  double value = 0.0;
  Method method = Method::ClosedForm;
};

/// Univariate stable density and distribution function for one parameter set.
/// Series coefficients are computed once at construction, so reuse the object
/// when evaluating many points.
class StableDensity {
 public:
  explicit StableDensity(const StableParams& params, const QuadratureSpec& quad = {},
                         int k = kSeriesTerms);

  double pdf(double y) const { return evaluate_pdf(y).value; }
  double cdf(double y) const { return evaluate_cdf(y).value; }
  /// log of the floored pdf.
  double log_pdf(double y) const;

  Evaluation evaluate_pdf(double y) const;
  Evaluation evaluate_cdf(double y) const;

  /// Characteristic-function inversion, bypassing series and closed forms.
  double pdf_quadrature(double y) const;
  double cdf_quadrature(double y) const;

  const StableParams& params() const { return params_; }

 private:
  struct SeriesSum {
    double value;
    bool ok;
  };
  SeriesSum tail_series(double x, bool cdf) const;
  SeriesSum core_series(double x, bool cdf) const;
  bool closed_form(double y, bool cdf, double& out) const;
  double inversion(double y, bool cdf) const;

  StableParams params_;  // normalized
  QuadratureSpec quad_;
  int k_;
  SpecialCase special_;
  double mu1_ = 0.0;      // S1 location
  double lambda_ = 1.0;
  double zeta_ = 0.0;     // arctan(beta tan(pi alpha / 2))
  double tail_bound_ = 0.0;
  double core_bound_ = 0.0;
  // log coefficients, index i-1
  std::vector<double> tail_logc_, core_logc_;
  // sin factors for x >= 0 ([0]) and x < 0 ([1])
  std::vector<double> tail_sin_[2], core_sin_[2];
};

double pdf_univariate(double y, const StableParams& params);
double cdf_univariate(double y, const StableParams& params);

/// Scale of the positive stable law S1(a, 1, cos(pi a / 2)^(1/a), 0), whose
/// Laplace transform is exp(-s^a).
double positive_stable_scale(double alpha_half);
StableParams positive_stable_params(double alpha_half);

/// Density of the mixing variable P of the normal scale mixture with tail
/// index 2 * alpha_half.
double pdf_positive_stable(double p, double alpha_half);

/// Elliptical stable density by one-dimensional quadrature over the mixing law.
double pdf_elliptical(const Eigen::VectorXd& z, const EllipticalParams& params);

double pdf_mixture(double y, const MixtureSpec& spec);
double cdf_mixture(double y, const MixtureSpec& spec);

double loglik(std::span<const double> data, const StableParams& params);
double loglik(std::span<const double> data, const MixtureSpec& spec);
/// Rows of `data` are observations.
double loglik(const Eigen::MatrixXd& data, const EllipticalParams& params);

}  // namespace stablekit
