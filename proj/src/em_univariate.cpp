#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <numeric>

#include "em_internal.hpp"
#include "stablekit/density.hpp"
#include "stablekit/errors.hpp"

namespace stablekit {

namespace {

using detail::maximize_1d;
using detail::SkewMoments;

constexpr double kPi = std::numbers::pi;
constexpr double kAlphaLo = 0.3;
constexpr double kBetaEdge = 0.999;
constexpr double kSkewAlphaMax = 1.999;
constexpr double kAlphaOneGap = 0.01;

enum class Kind { Symmetric, Cauchy, Skewed };

// One component, location always held in S0 form.
struct Comp {
  double alpha, beta, sigma, mu;
};

StableParams s0(const Comp& c) { return {c.alpha, c.beta, c.sigma, c.mu, Form::S0}; }

double sgn(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

// Coefficients of the symmetric and totally skewed parts: eta = c1 sigma, theta = c2 sigma.
std::pair<double, double> split(const Comp& c) {
  const double ab = std::abs(c.beta);
  if (c.alpha == 1.0) return {1.0 - ab, c.beta};
  return {std::pow(1.0 - ab, 1.0 / c.alpha), sgn(c.beta) * std::pow(ab, 1.0 / c.alpha)};
}

// Location m of the latent representation Y = eta sqrt(2P) N + theta V + m.
double rep_location(const Comp& c) {
  if (c.beta == 0.0) return c.mu;
  if (c.alpha == 1.0) return c.mu + 2.0 / kPi * c.sigma * c.beta * std::log(std::abs(c.beta));
  return c.mu - c.beta * c.sigma * std::tan(kPi * c.alpha / 2.0);
}

double s0_location(const Comp& c, double m) {
  if (c.beta == 0.0) return m;
  if (c.alpha == 1.0) return m - 2.0 / kPi * c.sigma * c.beta * std::log(std::abs(c.beta));
  return m + c.beta * c.sigma * std::tan(kPi * c.alpha / 2.0);
}

double nudge_alpha(double a) {
  if (std::abs(a - 1.0) < kAlphaOneGap) return a < 1.0 ? 1.0 - kAlphaOneGap : 1.0 + kAlphaOneGap;
  return a;
}

class Engine {
 public:
  Engine(std::span<const double> y, Kind kind, std::vector<double> w, std::vector<Comp> comps,
         const EmConfig& cfg)
      : y_(y), kind_(kind), w_(std::move(w)), c_(std::move(comps)), cfg_(cfg) {
    validate(cfg);
    detail::check_sample(y);
    n_ = y.size();
    dens_.resize(c_.size());
    for (std::size_t j = 0; j < c_.size(); ++j) dens_[j] = component_pdf(c_[j]);
    skew_.resize(c_.size());
  }

  FitReport run();

  const std::vector<double>& weights() const { return w_; }
  const std::vector<Comp>& comps() const { return c_; }

 private:
  std::vector<double> component_pdf(const Comp& c) const {
    const StableDensity d(s0(c));
    std::vector<double> f(n_);
    for (std::size_t i = 0; i < n_; ++i) f[i] = d.pdf(y_[i]);
    return f;
  }

  double total_ll() const {
    double s = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      double g = 0.0;
      for (std::size_t j = 0; j < c_.size(); ++j) g += w_[j] * dens_[j][i];
      s += std::log(std::max(g, kPdfFloor));
    }
    return s;
  }

  // Log-likelihood with component j replaced by `c` (others at current values).
  double ll_with(std::size_t j, const Comp& c, std::vector<double>* keep = nullptr) const {
    auto f = component_pdf(c);
    double s = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      double g = w_[j] * f[i];
      for (std::size_t k = 0; k < c_.size(); ++k)
        if (k != j) g += w_[k] * dens_[k][i];
      s += std::log(std::max(g, kPdfFloor));
    }
    if (keep) *keep = std::move(f);
    return s;
  }

  void set(std::size_t j, const Comp& c) {
    c_[j] = c;
    dens_[j] = component_pdf(c);
  }

  // 1-D observed-likelihood search over one coordinate of component j.
  double search(std::size_t j, double Comp::*field, double lo, double hi, double ll,
                const std::function<double(double)>& transform = nullptr) {
    const Comp base = c_[j];
    auto f = [&](double x) {
      Comp c = base;
      c.*field = transform ? transform(x) : x;
      return ll_with(j, c);
    };
    const double x0 = base.*field;
    const auto [x, v] = maximize_1d(f, lo, hi, x0, ll);
    if (v > ll && x != x0) {
      Comp c = base;
      c.*field = transform ? transform(x) : x;
      set(j, c);
      return v;
    }
    return ll;
  }

  double search_alpha(std::size_t j, double ll) {
    const double amax = kind_ == Kind::Skewed ? kSkewAlphaMax : 2.0;
    const double a0 = c_[j].alpha;
    const double lo = first_ ? kAlphaLo : std::max(kAlphaLo, a0 - 0.25);
    const double hi = first_ ? amax : std::min(amax, a0 + 0.25);
    if (kind_ == Kind::Skewed)
      return search(j, &Comp::alpha, lo, hi, ll, nudge_alpha);
    return search(j, &Comp::alpha, lo, hi, ll);
  }

  double search_beta(std::size_t j, double ll) {
    ll = search(j, &Comp::beta, -kBetaEdge, kBetaEdge, ll);
    const double b = c_[j].beta;
    if (std::abs(b) > kBetaEdge - 1e-3) {
      for (double cand : {0.9999, 1.0}) {
        Comp c = c_[j];
        c.beta = sgn(b) * cand;
        std::vector<double> f;
        const double v = ll_with(j, c, &f);
        if (v > ll) {
          c_[j] = c;
          dens_[j] = std::move(f);
          ll = v;
        }
      }
    }
    return ll;
  }

  // Observed-likelihood coordinate moves on (log sigma, mu).
  double observed_scale_location(std::size_t j, double ll) {
    const double ls = std::log(c_[j].sigma);
    ll = search(j, &Comp::sigma, ls - 0.3, ls + 0.3, ll, [](double x) { return std::exp(x); });
    const double mu = c_[j].mu, s = c_[j].sigma;
    return search(j, &Comp::mu, mu - 0.5 * s, mu + 0.5 * s, ll);
  }

  // Steps further along the accepted CM move (old -> c_[j]) on (log sigma, mu) while the
  // observed log-likelihood keeps rising.
  double extrapolate(std::size_t j, const Comp& old, double ll) {
    const Comp step = c_[j];
    const double dls = std::log(step.sigma / old.sigma), dmu = step.mu - old.mu;
    for (double k = 2.0; k <= 64.0; k *= 2.0) {
      Comp c = step;
      c.sigma = old.sigma * std::exp(k * dls);
      c.mu = old.mu + k * dmu;
      std::vector<double> f;
      const double v = ll_with(j, c, &f);
      if (!(v > ll)) break;
      c_[j] = c;
      dens_[j] = std::move(f);
      ll = v;
    }
    return ll;
  }

  // CM step on (m, 1/sigma) given E-step moments; returns the proposal.
  Comp cm_step(std::size_t j, const std::vector<double>& tau);

  const SkewMoments& skew_for(std::size_t j, double alpha) {
    auto& slot = skew_[j];
    if (!slot || slot->first != alpha)
      slot = std::make_unique<std::pair<double, SkewMoments>>(alpha, SkewMoments(alpha, cfg_));
    return slot->second;
  }

  const MixingRule& rule_for(double alpha, double delta_max) {
    if (!rule_ || rule_alpha_ != alpha || rule_delta_ < delta_max) {
      rule_delta_ = std::max(4.0 * delta_max, 100.0);
      rule_alpha_ = alpha;
      rule_ = std::make_unique<MixingRule>(detail::make_rule(alpha, rule_delta_, 1, cfg_));
    }
    return *rule_;
  }

  std::span<const double> y_;
  Kind kind_;
  std::vector<double> w_;
  std::vector<Comp> c_;
  EmConfig cfg_;
  std::size_t n_ = 0;
  std::vector<std::vector<double>> dens_;
  std::vector<std::unique_ptr<std::pair<double, SkewMoments>>> skew_;
  std::unique_ptr<MixingRule> rule_;
  double rule_alpha_ = 0.0, rule_delta_ = 0.0;
  bool first_ = true;
};

Comp Engine::cm_step(std::size_t j, const std::vector<double>& tau) {
  const Comp c = c_[j];
  const auto [c1, c2] = split(c);
  const double m0 = rep_location(c);
  std::vector<double> a(n_), b(n_, 0.0);
  if (kind_ == Kind::Symmetric) {
    double dmax = 1.0;
    for (std::size_t i = 0; i < n_; ++i) dmax = std::max(dmax, std::pow((y_[i] - m0) / c.sigma, 2));
    if (c.alpha == 2.0) {
      std::fill(a.begin(), a.end(), 1.0);
    } else {
      const MixingRule& rule = rule_for(c.alpha, dmax);
      for (std::size_t i = 0; i < n_; ++i) {
        const double z = (y_[i] - m0) / c.sigma;
        const auto mo = rule.normal_kernel(z * z);
        a[i] = mo.density > 0.0 ? mo.inv_p / mo.density : 0.0;
      }
    }
  } else {
    const SkewMoments& sm = skew_for(j, c.alpha);
    for (std::size_t i = 0; i < n_; ++i) {
      if (!(tau[i] > 0.0)) {
        a[i] = 0.0;
        continue;
      }
      const auto r = sm.at(y_[i] - m0, c1 * c.sigma, c2 * c.sigma);
      a[i] = r.a;
      b[i] = r.b;
    }
  }

  double nj = 0.0, sa = 0.0, say = 0.0, sb = 0.0;
  for (std::size_t i = 0; i < n_; ++i) {
    nj += tau[i];
    sa += tau[i] * a[i];
    say += tau[i] * a[i] * y_[i];
    sb += tau[i] * b[i];
  }
  Comp out = c;
  if (!(sa > 0.0) || !(nj > 0.0)) return out;
  double m = m0, zeta = 1.0 / c.sigma;
  for (int it = 0; it < 100; ++it) {
    const double m_new = (say - c2 / zeta * sb) / sa;
    double s2 = 0.0, s1 = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      const double r = y_[i] - m_new;
      s2 += tau[i] * a[i] * r * r;
      s1 += tau[i] * r * b[i];
    }
    s1 *= c2;
    if (!(s2 > 0.0)) break;
    const double z_new = (s1 + std::sqrt(s1 * s1 + 8.0 * c1 * c1 * nj * s2)) / (2.0 * s2);
    const bool done = std::abs(m_new - m) <= 1e-12 * (std::abs(m) + 1.0 / zeta) &&
                      std::abs(z_new - zeta) <= 1e-12 * zeta;
    m = m_new;
    zeta = z_new;
    if (c2 == 0.0 || done) break;
  }
  if (!(zeta > 0.0) || !std::isfinite(zeta) || !std::isfinite(m)) return out;
  out.sigma = 1.0 / zeta;
  out.mu = s0_location(out, m);
  return out;
}

FitReport Engine::run() {
  FitReport rep;
  rep.tol = cfg_.tol;
  const std::size_t K = c_.size();
  const bool free_alpha = kind_ != Kind::Cauchy;
  const bool free_beta = kind_ != Kind::Symmetric;
  double ll = total_ll();
  rep.loglik_trace.push_back(ll);
  rep.status = FitStatus::MaxIterations;

  for (int it = 1; it <= cfg_.max_iter; ++it) {
    const std::vector<double> w_old = w_;
    const std::vector<Comp> c_old = c_;

    // memberships
    std::vector<std::vector<double>> tau(K, std::vector<double>(n_));
    for (std::size_t i = 0; i < n_; ++i) {
      double g = 0.0;
      for (std::size_t j = 0; j < K; ++j) g += w_[j] * dens_[j][i];
      for (std::size_t j = 0; j < K; ++j)
        tau[j][i] = g > 0.0 ? w_[j] * dens_[j][i] / g : 1.0 / static_cast<double>(K);
    }
    bool collapsed = false;
    for (std::size_t j = 0; j < K; ++j) {
      const double s = std::accumulate(tau[j].begin(), tau[j].end(), 0.0);
      if (s < static_cast<double>(K) * 1e-6) collapsed = true;
    }
    if (collapsed) {
      rep.status = FitStatus::ComponentCollapse;
      rep.message = "a mixture component lost all membership weight";
      break;
    }
    if (K > 1) {
      std::vector<double> w_new(K);
      for (std::size_t j = 0; j < K; ++j)
        w_new[j] = std::accumulate(tau[j].begin(), tau[j].end(), 0.0) / static_cast<double>(n_);
      const double s = std::accumulate(w_new.begin(), w_new.end(), 0.0);
      for (auto& v : w_new) v /= s;
      const auto w_keep = w_;
      w_ = w_new;
      const double v = total_ll();
      if (v >= ll) ll = v;
      else w_ = w_keep;
    }

    for (std::size_t j = 0; j < K; ++j) {
      if (std::abs(c_[j].beta) < 1.0) {
        const Comp prop = cm_step(j, tau[j]);
        std::vector<double> f;
        const double v = ll_with(j, prop, &f);
        if (v >= ll) {
          const Comp old = c_[j];
          c_[j] = prop;
          dens_[j] = std::move(f);
          ll = extrapolate(j, old, v);
          // With a skewed part the latent term nearly pins sigma; move it on the
          // observed likelihood as well.
          if (kind_ != Kind::Symmetric && c_[j].beta != 0.0) ll = observed_scale_location(j, ll);
        } else {
          ll = observed_scale_location(j, ll);
        }
      } else {
        ll = observed_scale_location(j, ll);
      }
      if (free_alpha) ll = search_alpha(j, ll);
      if (free_beta) ll = search_beta(j, ll);
    }
    first_ = false;
    const double prev = rep.loglik_trace.back();
    rep.loglik_trace.push_back(ll);
    rep.iterations = it;

    double change = 0.0;
    for (std::size_t j = 0; j < K; ++j) {
      change = std::max({change, std::abs(w_[j] - w_old[j]), std::abs(c_[j].alpha - c_old[j].alpha),
                         std::abs(c_[j].beta - c_old[j].beta),
                         std::abs(c_[j].sigma - c_old[j].sigma) / c_old[j].sigma,
                         std::abs(c_[j].mu - c_old[j].mu) / c_old[j].sigma});
    }
    if (std::abs(ll - prev) < cfg_.tol * std::max(1.0, std::abs(prev)) || change < 1e-6) {
      rep.status = FitStatus::Converged;
      rep.converged = true;
      break;
    }
  }
  if (rep.status == FitStatus::MaxIterations)
    rep.message = "maximum number of iterations reached";
  return rep;
}

void check_weights(const std::vector<double>& w, std::size_t k) {
  if (k == 0) throw DomainError("at least one component is required");
  if (w.size() != k) throw DimensionMismatch("init vectors must have equal length");
  double s = 0.0;
  for (double v : w) {
    if (!(v > 0.0)) throw DomainError("init weights must be positive");
    s += v;
  }
  if (std::abs(s - 1.0) > 1e-8) throw DomainError("init weights must sum to 1");
}

Comp checked(const StableParams& p) {
  validate(p);
  const StableParams q = convert_form(normalized(p), Form::S0);
  return {q.alpha, q.beta, q.sigma, q.mu};
}

MixtureSpec to_mixture(const std::vector<double>& w, std::vector<Comp> c) {
  std::vector<std::size_t> order(c.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return c[a].mu < c[b].mu; });
  MixtureSpec spec;
  for (auto k : order) {
    spec.weights.push_back(w[k]);
    spec.components.push_back(s0(c[k]));
  }
  return spec;
}

}  // namespace

FitReport fit_symmetric(std::span<const double> data, const SymmetricInit& init,
                        const EmConfig& cfg) {
  const Comp c = checked({init.alpha, 0.0, init.sigma, init.mu, Form::S0});
  Engine e(data, Kind::Symmetric, {1.0}, {c}, cfg);
  FitReport rep = e.run();
  const StableParams est = s0(e.comps()[0]);
  rep.estimates = est;
  rep.gof = goodness_of_fit(data, est);
  return rep;
}

FitReport fit_cauchy(std::span<const double> data, const CauchyInit& init, const EmConfig& cfg) {
  const Comp c = checked({1.0, init.beta, init.sigma, init.mu, Form::S0});
  Engine e(data, Kind::Cauchy, {1.0}, {c}, cfg);
  FitReport rep = e.run();
  const StableParams est = s0(e.comps()[0]);
  rep.estimates = est;
  rep.gof = goodness_of_fit(data, est);
  return rep;
}

FitReport fit_skewed(std::span<const double> data, const SkewedInit& init, Form form,
                     const EmConfig& cfg) {
  Comp c = checked({init.alpha, init.beta, init.sigma, init.mu, form});
  if (c.alpha > kSkewAlphaMax) c.alpha = kSkewAlphaMax;
  c.alpha = nudge_alpha(c.alpha);
  Engine e(data, Kind::Skewed, {1.0}, {c}, cfg);
  FitReport rep = e.run();
  const StableParams est = convert_form(s0(e.comps()[0]), form);
  rep.estimates = est;
  rep.gof = goodness_of_fit(data, est);
  return rep;
}

FitReport fit_cauchy_mixture(std::span<const double> data, const CauchyMixtureInit& init,
                             const EmConfig& cfg) {
  const std::size_t k = init.weights.size();
  check_weights(init.weights, k);
  if (init.beta.size() != k || init.sigma.size() != k || init.mu.size() != k)
    throw DimensionMismatch("init vectors must have equal length");
  std::vector<Comp> comps;
  for (std::size_t j = 0; j < k; ++j)
    comps.push_back(checked({1.0, init.beta[j], init.sigma[j], init.mu[j], Form::S0}));
  Engine e(data, Kind::Cauchy, init.weights, comps, cfg);
  FitReport rep = e.run();
  const MixtureSpec est = to_mixture(e.weights(), e.comps());
  rep.estimates = est;
  rep.gof = goodness_of_fit(data, est);
  return rep;
}

FitReport fit_symmetric_mixture(std::span<const double> data, const SymmetricMixtureInit& init,
                                const EmConfig& cfg) {
  const std::size_t k = init.weights.size();
  check_weights(init.weights, k);
  if (init.alpha.size() != k || init.sigma.size() != k || init.mu.size() != k)
    throw DimensionMismatch("init vectors must have equal length");
  std::vector<Comp> comps;
  for (std::size_t j = 0; j < k; ++j)
    comps.push_back(checked({init.alpha[j], 0.0, init.sigma[j], init.mu[j], Form::S0}));
  Engine e(data, Kind::Symmetric, init.weights, comps, cfg);
  FitReport rep = e.run();
  const MixtureSpec est = to_mixture(e.weights(), e.comps());
  rep.estimates = est;
  rep.gof = goodness_of_fit(data, est);
  return rep;
}

}  // namespace stablekit
