#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/tools/minima.hpp>

#include "em_internal.hpp"
#include "stablekit/errors.hpp"

namespace stablekit {

void validate(const EmConfig& cfg) {
  if (cfg.max_iter < 1) throw DomainError("max_iter must be positive");
  if (!(cfg.tol > 0.0)) throw DomainError("tol must be positive");
  if (cfg.quadrature_nodes < 1) throw DomainError("quadrature_nodes must be positive");
  if (cfg.mc_fallback_draws < 1) throw DomainError("mc_fallback_draws must be positive");
}

std::string_view to_string(FitStatus s) {
  switch (s) {
    case FitStatus::Converged: return "converged";
    case FitStatus::MaxIterations: return "max_iterations";
    case FitStatus::ComponentCollapse: return "component_collapse";
  }
  return "max_iterations";
}

namespace detail {

MixingRule make_rule(double alpha, double delta_max, int d, const EmConfig& cfg) {
  try {
    return MixingRule(alpha, delta_max, d, cfg.quadrature_nodes);
  } catch (const NumericalFailure&) {
    return MixingRule::monte_carlo(alpha, cfg.mc_fallback_draws, cfg.seed, d);
  }
}

void check_sample(std::span<const double> data) {
  if (data.size() < 10) throw InvalidInput("fits need at least 10 observations");
  for (std::size_t i = 0; i < data.size(); ++i)
    if (!std::isfinite(data[i]))
      throw InvalidInput("observation " + std::to_string(i + 1) + " is not finite");
  const auto [lo, hi] = std::minmax_element(data.begin(), data.end());
  if (*lo == *hi) throw InvalidInput("all observations are equal");
}

std::pair<double, double> maximize_1d(const std::function<double(double)>& f, double lo,
                                      double hi, double x0, double f0) {
  if (!(hi > lo)) return {x0, f0};
  auto neg = [&](double x) {
    try {
      const double v = f(x);
      return std::isfinite(v) ? -v : std::numeric_limits<double>::infinity();
    } catch (const StableError&) {
      return std::numeric_limits<double>::infinity();
    }
  };
  std::uintmax_t iters = 80;
  const auto [x, v] = boost::math::tools::brent_find_minima(neg, lo, hi, 20, iters);
  if (-v > f0) return {x, -v};
  return {x0, f0};
}

}  // namespace detail

PosteriorWeights estep_weights(std::span<const double> data, const StableParams& raw,
                               const EmConfig& cfg) {
  validate(raw);
  validate(cfg);
  const StableParams p = normalized(raw);
  if (p.beta != 0.0) throw DomainError("estep_weights needs a symmetric law (beta = 0)");
  if (data.empty()) throw InvalidInput("no observations");
  double delta_max = 1.0;
  for (double y : data) delta_max = std::max(delta_max, std::pow((y - p.mu) / p.sigma, 2));
  const MixingRule rule = detail::make_rule(p.alpha, delta_max, 1, cfg);
  PosteriorWeights out;
  out.w.resize(static_cast<Eigen::Index>(data.size()));
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double z = (data[i] - p.mu) / p.sigma;
    out.w[static_cast<Eigen::Index>(i)] = rule.normal_kernel(z * z).mean_inv_p();
  }
  return out;
}

}  // namespace stablekit
