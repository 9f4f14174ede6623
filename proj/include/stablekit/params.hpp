#pragma once

#include <complex>
#include <cstddef>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace stablekit {

/// Characteristic-function convention. S0 is continuous in all four
/// parameters; S1 is the classical form with a jump at alpha = 1.
enum class Form { S0 = 0, S1 = 1 };

std::string_view to_string(Form form);

/// Univariate stable law S_form(alpha, beta, sigma, mu).
struct StableParams {
  double alpha = 2.0;
  double beta = 0.0;
  double sigma = 1.0;
  double mu = 0.0;
  Form form = Form::S0;

  friend bool operator==(const StableParams&, const StableParams&) = default;
};

/// Elliptically contoured stable law with chf exp{-(t' Sigma t)^(alpha/2) + i t' mu}.
struct EllipticalParams {
  double alpha = 2.0;
  Eigen::MatrixXd sigma;  ///< d x d dispersion matrix
  Eigen::VectorXd mu;     ///< location, length d

  Eigen::Index dim() const { return mu.size(); }
};

/// Discrete spectral measure sum_j gamma_j * delta_{s_j} on the unit sphere
/// of a strictly stable random vector (alpha != 1).
struct SpectralMeasure {
  double alpha = 1.5;
  std::vector<Eigen::VectorXd> points;
  std::vector<double> masses;
  Eigen::VectorXd mu;

  Eigen::Index dim() const { return mu.size(); }
};

/// Finite mixture of univariate stable laws with simplex weights.
struct MixtureSpec {
  std::vector<double> weights;
  std::vector<StableParams> components;

  std::size_t size() const { return components.size(); }
};

enum class SpecialCase { Gaussian, Cauchy, Levy, PositiveStable, General };

std::string_view to_string(SpecialCase c);

// Validation. Each throws DomainError naming the offending field.
void validate(const StableParams& params);
void validate(const EllipticalParams& params);
void validate(const SpectralMeasure& measure);
void validate(const MixtureSpec& spec);

/// Snaps |alpha - 1| < 1e-9 to exactly 1 and drops beta at alpha = 2.
/// Every evaluator works on normalized parameters.
StableParams normalized(const StableParams& params);

/// Re-expresses the same law in `target` form (only mu changes).
StableParams convert_form(const StableParams& params, Form target);

/// Location of the law in S1 form.
double s1_location(const StableParams& params);

SpecialCase special_case(const StableParams& params);

/// log E exp(i t Y).
std::complex<double> log_chf(double t, const StableParams& params);
std::complex<double> chf(double t, const StableParams& params);

std::complex<double> chf(const Eigen::VectorXd& t, const EllipticalParams& params);
std::complex<double> chf(const Eigen::VectorXd& t, const SpectralMeasure& measure);

/// Anchors s_j = (cos(2 pi (j-1)/m), sin(2 pi (j-1)/m)), j = 1..m.
std::vector<Eigen::VectorXd> circle_anchors(std::size_t m);

}  // namespace stablekit
