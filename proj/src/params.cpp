#include "stablekit/params.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "stablekit/errors.hpp"

namespace stablekit {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kAlphaOneSnap = 1e-9;

[[noreturn]] void domain_error(const std::string& field, double value,
                               const std::string& range) {
  std::ostringstream os;
  os.precision(17);
  os << field << " = " << value << " outside admissible range " << range;
  throw DomainError(os.str());
}

double sgn(double x) { return (x > 0.0) - (x < 0.0); }

}  // namespace

std::string_view to_string(Form form) {
  return form == Form::S0 ? "S0" : "S1";
}

std::string_view to_string(SpecialCase c) {
  switch (c) {
    case SpecialCase::Gaussian: return "Gaussian";
    case SpecialCase::Cauchy: return "Cauchy";
    case SpecialCase::Levy: return "Levy";
    case SpecialCase::PositiveStable: return "PositiveStable";
    case SpecialCase::General: return "General";
  }
  return "General";
}

void validate(const StableParams& p) {
  if (!std::isfinite(p.alpha) || !(p.alpha > 0.0 && p.alpha <= 2.0))
    domain_error("alpha", p.alpha, "(0, 2]");
  if (!std::isfinite(p.beta) || !(std::abs(p.beta) <= 1.0))
    domain_error("beta", p.beta, "[-1, 1]");
  if (!std::isfinite(p.sigma) || !(p.sigma > 0.0))
    domain_error("sigma", p.sigma, "(0, inf)");
  if (!std::isfinite(p.mu)) domain_error("mu", p.mu, "finite reals");
}

void validate(const EllipticalParams& p) {
  if (!std::isfinite(p.alpha) || !(p.alpha > 0.0 && p.alpha <= 2.0))
    domain_error("alpha", p.alpha, "(0, 2]");
  const auto d = p.mu.size();
  if (d == 0) throw DimensionMismatch("elliptical location vector is empty");
  if (p.sigma.rows() != d || p.sigma.cols() != d)
    throw DimensionMismatch("dispersion matrix must be " + std::to_string(d) + "x" +
                            std::to_string(d));
  if (!p.sigma.allFinite() || !p.mu.allFinite())
    throw DomainError("Sigma and mu must be finite");
  const double scale = std::max(1.0, p.sigma.cwiseAbs().maxCoeff());
  if (!p.sigma.isApprox(p.sigma.transpose(), 1e-12) &&
      (p.sigma - p.sigma.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw DomainError("Sigma must be symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(p.sigma, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() <= 0.0)
    throw NotPositiveDefinite("Sigma must be positive definite (min eigenvalue " +
                              std::to_string(eig.eigenvalues().minCoeff()) + ")");
}

void validate(const SpectralMeasure& m) {
  if (!std::isfinite(m.alpha) || !(m.alpha > 0.0 && m.alpha < 2.0))
    domain_error("alpha", m.alpha, "(0, 2)");
  if (std::abs(m.alpha - 1.0) < kAlphaOneSnap)
    throw UnsupportedAlpha("spectral measures are restricted to strictly stable alpha != 1");
  if (m.points.empty() || m.points.size() != m.masses.size())
    throw DimensionMismatch("spectral measure needs one mass per point");
  const auto d = m.mu.size();
  bool any_positive = false;
  for (std::size_t j = 0; j < m.points.size(); ++j) {
    if (m.points[j].size() != d)
      throw DimensionMismatch("spectral point " + std::to_string(j) + " has wrong dimension");
    if (std::abs(m.points[j].norm() - 1.0) > 1e-12)
      domain_error("points[" + std::to_string(j) + "] norm", m.points[j].norm(), "{1}");
    if (!std::isfinite(m.masses[j]) || m.masses[j] < 0.0)
      domain_error("masses[" + std::to_string(j) + "]", m.masses[j], "[0, inf)");
    any_positive = any_positive || m.masses[j] > 0.0;
  }
  if (!any_positive) throw DomainError("masses: at least one mass must be positive");
  if (!m.mu.allFinite()) throw DomainError("mu must be finite");
}

void validate(const MixtureSpec& s) {
  if (s.components.empty()) throw DomainError("mixture needs at least one component");
  if (s.weights.size() != s.components.size())
    throw DimensionMismatch("mixture weights and components differ in length");
  double total = 0.0;
  for (std::size_t j = 0; j < s.weights.size(); ++j) {
    if (!std::isfinite(s.weights[j]) || s.weights[j] < 0.0)
      domain_error("weights[" + std::to_string(j) + "]", s.weights[j], "[0, 1]");
    total += s.weights[j];
    validate(s.components[j]);
  }
  if (std::abs(total - 1.0) > 1e-12) domain_error("sum(weights)", total, "{1}");
}

StableParams normalized(const StableParams& p) {
  StableParams q = p;
  if (std::abs(q.alpha - 1.0) < kAlphaOneSnap) q.alpha = 1.0;
  if (q.alpha == 2.0) {
    // The S0/S1 shift vanishes with beta; keep the same law.
    q.mu = s1_location(p);
    q.beta = 0.0;
  }
  return q;
}

double s1_location(const StableParams& p) {
  if (p.form == Form::S1 || p.beta == 0.0) return p.mu;
  if (std::abs(p.alpha - 1.0) < kAlphaOneSnap)
    return p.mu - p.beta * (2.0 / kPi) * p.sigma * std::log(p.sigma);
  if (p.alpha == 2.0) return p.mu;
  return p.mu - p.beta * p.sigma * std::tan(kPi * p.alpha / 2.0);
}

StableParams convert_form(const StableParams& p, Form target) {
  validate(p);
  if (p.form == target) return p;
  StableParams q = p;
  q.form = target;
  if (p.form == Form::S0) {
    q.mu = s1_location(p);
    return q;
  }
  // S1 -> S0: undo the shift.
  if (p.beta == 0.0 || p.alpha == 2.0) return q;
  if (std::abs(p.alpha - 1.0) < kAlphaOneSnap)
    q.mu = p.mu + p.beta * (2.0 / kPi) * p.sigma * std::log(p.sigma);
  else
    q.mu = p.mu + p.beta * p.sigma * std::tan(kPi * p.alpha / 2.0);
  return q;
}

SpecialCase special_case(const StableParams& raw) {
  const StableParams p = normalized(raw);
  if (p.alpha == 2.0) return SpecialCase::Gaussian;
  if (p.alpha == 1.0 && p.beta == 0.0) return SpecialCase::Cauchy;
  if (p.alpha == 0.5 && std::abs(p.beta) == 1.0) return SpecialCase::Levy;
  if (p.beta == 1.0 && p.alpha < 1.0) return SpecialCase::PositiveStable;
  return SpecialCase::General;
}

std::complex<double> log_chf(double t, const StableParams& raw) {
  const StableParams p = normalized(raw);
  if (t == 0.0) return {0.0, 0.0};
  const double at = std::abs(t);
  const double st = p.sigma * at;
  const double s = sgn(t);
  if (p.alpha == 1.0) {
    const double logterm = p.form == Form::S0 ? std::log(st) : std::log(at);
    return {-st, -st * p.beta * s * (2.0 / kPi) * logterm + t * p.mu};
  }
  const double sa = std::pow(st, p.alpha);
  const double tn = p.alpha == 2.0 ? 0.0 : std::tan(kPi * p.alpha / 2.0);
  if (p.form == Form::S1) return {-sa, sa * p.beta * s * tn + t * p.mu};
  // S0: -|st|^a [1 + i b sgn tan (|st|^(1-a) - 1)] = -sa - i b sgn tan (st - sa)
  return {-sa, -p.beta * s * tn * (st - sa) + t * p.mu};
}

std::complex<double> chf(double t, const StableParams& params) {
  return std::exp(log_chf(t, params));
}

std::complex<double> chf(const Eigen::VectorXd& t, const EllipticalParams& p) {
  if (t.size() != p.dim()) throw DimensionMismatch("probe vector has wrong dimension");
  const double q = t.dot(p.sigma * t);
  return std::exp(std::complex<double>(-std::pow(std::max(q, 0.0), p.alpha / 2.0),
                                       t.dot(p.mu)));
}

std::complex<double> chf(const Eigen::VectorXd& t, const SpectralMeasure& m) {
  if (t.size() != m.dim()) throw DimensionMismatch("probe vector has wrong dimension");
  const double tn = std::tan(kPi * m.alpha / 2.0);
  std::complex<double> acc{0.0, t.dot(m.mu)};
  for (std::size_t j = 0; j < m.points.size(); ++j) {
    const double proj = t.dot(m.points[j]);
    const double a = std::pow(std::abs(proj), m.alpha) * m.masses[j];
    acc += std::complex<double>(-a, a * sgn(proj) * tn);
  }
  return std::exp(acc);
}

std::vector<Eigen::VectorXd> circle_anchors(std::size_t m) {
  std::vector<Eigen::VectorXd> out;
  out.reserve(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double angle = 2.0 * kPi * static_cast<double>(j) / static_cast<double>(m);
    Eigen::VectorXd s(2);
    s << std::cos(angle), std::sin(angle);
    out.push_back(s);
  }
  return out;
}

}  // namespace stablekit
