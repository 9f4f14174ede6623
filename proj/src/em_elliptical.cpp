#include <algorithm>
#include <cmath>

#include "em_internal.hpp"
#include "stablekit/density.hpp"
#include "stablekit/errors.hpp"

namespace stablekit {

namespace {

constexpr double kAlphaLo = 0.3;

void check_dispersion(const Eigen::MatrixXd& s, const char* what) {
  if ((s - s.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + s.cwiseAbs().maxCoeff()))
    throw NotPositiveDefinite(std::string(what) + " is not symmetric");
  const Eigen::LLT<Eigen::MatrixXd> llt(s);
  if (llt.info() != Eigen::Success) throw NotPositiveDefinite(std::string(what) + " is not positive definite");
}

}  // namespace

FitReport fit_elliptical(const Eigen::MatrixXd& data, const EllipticalInit& init,
                         const EmConfig& cfg) {
  validate(cfg);
  const Eigen::Index n = data.rows(), d = data.cols();
  if (d < 1) throw DimensionMismatch("data has no columns");
  if (init.mu.size() != d || init.sigma.rows() != d || init.sigma.cols() != d)
    throw DimensionMismatch("init does not match the data dimension");
  if (n <= d || n < 10) throw InvalidInput("elliptical fits need n >= 10 and n > d");
  if (!data.allFinite()) throw InvalidInput("data contains non-finite values");
  if (!(init.alpha > 0.0 && init.alpha <= 2.0))
    throw DomainError("alpha = " + std::to_string(init.alpha) + " outside admissible range (0, 2]");
  check_dispersion(init.sigma, "initial Sigma");
  {
    const Eigen::MatrixXd c = data.rowwise() - data.colwise().mean();
    Eigen::FullPivLU<Eigen::MatrixXd> lu(c.transpose() * c);
    lu.setThreshold(1e-12);
    if (lu.rank() < d) throw RankDeficientData("data matrix does not have full column rank");
  }

  EllipticalParams cur{init.alpha, init.sigma, init.mu};
  auto ll_at = [&](const EllipticalParams& p) { return loglik(data, p); };
  double ll = ll_at(cur);
  FitReport rep;
  rep.tol = cfg.tol;
  rep.loglik_trace.push_back(ll);
  rep.sigma_trace.push_back(cur.sigma);
  bool first = true;

  for (int it = 1; it <= cfg.max_iter; ++it) {
    const EllipticalParams old = cur;
    // E-step at squared distances under the current law.
    const Eigen::LLT<Eigen::MatrixXd> llt(cur.sigma);
    const Eigen::MatrixXd centered = data.rowwise() - cur.mu.transpose();
    const Eigen::VectorXd delta =
        llt.matrixL().solve(centered.transpose()).colwise().squaredNorm().transpose();
    Eigen::VectorXd w(n);
    if (cur.alpha == 2.0) {
      w.setOnes();
    } else {
      const MixingRule rule =
          detail::make_rule(cur.alpha, std::max(delta.maxCoeff(), 1.0), static_cast<int>(d), cfg);
      for (Eigen::Index i = 0; i < n; ++i) {
        const auto mo = rule.normal_kernel(delta[i]);
        w[i] = mo.density > 0.0 ? mo.inv_p / mo.density : 0.0;
      }
    }
    // CM-steps.
    EllipticalParams prop = cur;
    prop.mu = (data.transpose() * w) / w.sum();
    const Eigen::MatrixXd r = data.rowwise() - prop.mu.transpose();
    prop.sigma = (r.transpose() * w.asDiagonal() * r) / (2.0 * static_cast<double>(n));
    prop.sigma = 0.5 * (prop.sigma + prop.sigma.transpose()).eval();
    if (Eigen::LLT<Eigen::MatrixXd>(prop.sigma).info() == Eigen::Success) {
      try {
        const double v = ll_at(prop);
        if (v >= ll) {
          cur = prop;
          ll = v;
        }
      } catch (const StableError&) {
      }
    }
    // CML-step for alpha.
    const double lo = first ? kAlphaLo : std::max(kAlphaLo, cur.alpha - 0.25);
    const double hi = first ? 2.0 : std::min(2.0, cur.alpha + 0.25);
    auto f = [&](double a) {
      EllipticalParams q = cur;
      q.alpha = a;
      return ll_at(q);
    };
    const auto [a, v] = detail::maximize_1d(f, lo, hi, cur.alpha, ll);
    if (v > ll) {
      cur.alpha = a;
      ll = v;
    }
    first = false;

    const double prev = rep.loglik_trace.back();
    rep.loglik_trace.push_back(ll);
    rep.sigma_trace.push_back(cur.sigma);
    rep.iterations = it;
    const double scale = std::sqrt(old.sigma.diagonal().maxCoeff());
    const double change =
        std::max({std::abs(cur.alpha - old.alpha),
                  (cur.sigma - old.sigma).cwiseAbs().maxCoeff() / (scale * scale),
                  (cur.mu - old.mu).cwiseAbs().maxCoeff() / scale});
    if (std::abs(ll - prev) < cfg.tol * std::max(1.0, std::abs(prev)) || change < 1e-6) {
      rep.converged = true;
      rep.status = FitStatus::Converged;
      break;
    }
  }
  if (!rep.converged) rep.message = "maximum number of iterations reached";
  rep.estimates = cur;
  return rep;
}

}  // namespace stablekit
