#pragma once

#include <cstddef>
#include <functional>
#include <span>

#include "stablekit/params.hpp"

namespace stablekit {

struct GofResult {
  double ks = 0.0;
  double ad = 0.0;
  std::size_t n = 0;
};

/// Kolmogorov-Smirnov D_n and Anderson-Darling A^2 for an arbitrary cdf.
/// AD clamps cdf values to [1e-12, 1 - 1e-12].
double ks_statistic(std::span<const double> data, const std::function<double(double)>& cdf);
double ad_statistic(std::span<const double> data, const std::function<double(double)>& cdf);

double ks_statistic(std::span<const double> data, const StableParams& model);
double ks_statistic(std::span<const double> data, const MixtureSpec& model);
double ad_statistic(std::span<const double> data, const StableParams& model);
double ad_statistic(std::span<const double> data, const MixtureSpec& model);

GofResult goodness_of_fit(std::span<const double> data, const StableParams& model);
GofResult goodness_of_fit(std::span<const double> data, const MixtureSpec& model);

}  // namespace stablekit
