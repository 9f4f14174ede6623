#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "stablekit/gof.hpp"
#include "stablekit/params.hpp"

namespace stablekit {

struct EmConfig {
  int max_iter = 500;
  double tol = 1e-6;             ///< relative change of the observed log-likelihood
  int quadrature_nodes = 96;     ///< minimum node count of the E-step rule
  int mc_fallback_draws = 10000; ///< used when the quadrature rule cannot be built
  std::uint64_t seed = 1;
};

void validate(const EmConfig& cfg);

enum class FitStatus { Converged, MaxIterations, ComponentCollapse };

std::string_view to_string(FitStatus s);

struct FitReport {
  std::variant<StableParams, MixtureSpec, EllipticalParams> estimates;
  /// Observed log-likelihood at the initial values, then after every iteration.
  std::vector<double> loglik_trace;
  int iterations = 0;
  bool converged = false;
  double tol = 0.0;
  FitStatus status = FitStatus::MaxIterations;
  std::string message;
  std::optional<GofResult> gof;
  /// Elliptical fits only: the dispersion estimate after every iteration.
  std::vector<Eigen::MatrixXd> sigma_trace;

  double loglik() const { return loglik_trace.back(); }
};

struct PosteriorWeights {
  Eigen::VectorXd w;                ///< E[1/P | y_i]
  std::optional<Eigen::MatrixXd> tau;  ///< n x K memberships (mixtures)
};

/// E[1/P | y_i] under the symmetric law (beta must be 0, alpha < 2 allowed up to 2).
PosteriorWeights estep_weights(std::span<const double> data, const StableParams& params,
                               const EmConfig& cfg = {});

struct SymmetricInit {
  double alpha, sigma, mu;
};
struct CauchyInit {
  double beta, sigma, mu;
};
struct SkewedInit {
  double alpha, beta, sigma, mu;
};
struct SymmetricMixtureInit {
  std::vector<double> weights, alpha, sigma, mu;
};
struct CauchyMixtureInit {
  std::vector<double> weights, beta, sigma, mu;
};
struct EllipticalInit {
  double alpha;
  Eigen::MatrixXd sigma;
  Eigen::VectorXd mu;
};

FitReport fit_symmetric(std::span<const double> data, const SymmetricInit& init,
                        const EmConfig& cfg = {});
/// alpha = 1, S0 form.
FitReport fit_cauchy(std::span<const double> data, const CauchyInit& init,
                     const EmConfig& cfg = {});
FitReport fit_skewed(std::span<const double> data, const SkewedInit& init, Form form,
                     const EmConfig& cfg = {});
/// Components in S0 form, reported sorted by location.
FitReport fit_cauchy_mixture(std::span<const double> data, const CauchyMixtureInit& init,
                             const EmConfig& cfg = {});
FitReport fit_symmetric_mixture(std::span<const double> data, const SymmetricMixtureInit& init,
                                const EmConfig& cfg = {});
/// Rows of `data` are observations.
FitReport fit_elliptical(const Eigen::MatrixXd& data, const EllipticalInit& init,
                         const EmConfig& cfg = {});

}  // namespace stablekit
