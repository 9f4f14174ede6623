#include "stablekit/gof.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "stablekit/density.hpp"
#include "stablekit/errors.hpp"

namespace stablekit {

namespace {

std::vector<double> sorted_cdf(std::span<const double> data,
                               const std::function<double(double)>& cdf) {
  if (data.empty()) throw InvalidInput("goodness of fit needs at least one observation");
  std::vector<double> y(data.begin(), data.end());
  std::sort(y.begin(), y.end());
  for (auto& v : y) v = cdf(v);
  return y;
}

double ks_sorted(const std::vector<double>& f) {
  const double n = static_cast<double>(f.size());
  double d = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double k = static_cast<double>(i + 1);
    d = std::max({d, k / n - f[i], f[i] - (k - 1.0) / n});
  }
  return d;
}

double ad_sorted(const std::vector<double>& f) {
  const std::size_t n = f.size();
  const double nd = static_cast<double>(n);
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lo = std::clamp(f[i], 1e-12, 1.0 - 1e-12);
    const double hi = std::clamp(f[n - 1 - i], 1e-12, 1.0 - 1e-12);
    s += (2.0 * static_cast<double>(i + 1) - 1.0) * (std::log(lo) + std::log1p(-hi));
  }
  return -nd - s / nd;
}

std::function<double(double)> mixture_cdf(const MixtureSpec& spec) {
  validate(spec);
  std::vector<StableDensity> comps;
  for (const auto& c : spec.components) comps.emplace_back(c);
  return [comps = std::move(comps), w = spec.weights](double y) {
    double s = 0.0;
    for (std::size_t j = 0; j < comps.size(); ++j)
      if (w[j] > 0.0) s += w[j] * comps[j].cdf(y);
    return std::clamp(s, 0.0, 1.0);
  };
}

std::function<double(double)> single_cdf(const StableParams& p) {
  return [d = StableDensity(p)](double y) { return d.cdf(y); };
}

}  // namespace

double ks_statistic(std::span<const double> data, const std::function<double(double)>& cdf) {
  return ks_sorted(sorted_cdf(data, cdf));
}

double ad_statistic(std::span<const double> data, const std::function<double(double)>& cdf) {
  return ad_sorted(sorted_cdf(data, cdf));
}

double ks_statistic(std::span<const double> data, const StableParams& model) {
  return ks_statistic(data, single_cdf(model));
}
double ks_statistic(std::span<const double> data, const MixtureSpec& model) {
  return ks_statistic(data, mixture_cdf(model));
}
double ad_statistic(std::span<const double> data, const StableParams& model) {
  return ad_statistic(data, single_cdf(model));
}
double ad_statistic(std::span<const double> data, const MixtureSpec& model) {
  return ad_statistic(data, mixture_cdf(model));
}

GofResult goodness_of_fit(std::span<const double> data, const StableParams& model) {
  const auto f = sorted_cdf(data, single_cdf(model));
  return {ks_sorted(f), ad_sorted(f), f.size()};
}

GofResult goodness_of_fit(std::span<const double> data, const MixtureSpec& model) {
  const auto f = sorted_cdf(data, mixture_cdf(model));
  return {ks_sorted(f), ad_sorted(f), f.size()};
}

}  // namespace stablekit
