#pragma once

// Reference computations that do not go through the library's own evaluators.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace oracle {

struct Law {
  double alpha, beta, sigma, mu;
  int param;  // 0 or 1
};

// Phase of the chf at t > 0, written out from the two parameterizations.
inline double phase(double t, const Law& p) {
  const double st = p.sigma * t;
  if (p.alpha == 1.0) {
    const double lg = p.param == 0 ? std::log(st) : std::log(t);
    return p.mu * t - (2.0 / std::numbers::pi) * p.beta * st * lg;
  }
  const double tn = std::tan(std::numbers::pi * p.alpha / 2.0);
  if (p.param == 0) return p.mu * t - p.beta * tn * (st - std::pow(st, p.alpha));
  return p.mu * t + p.beta * tn * std::pow(st, p.alpha);
}

inline double modulus(double t, const Law& p) { return std::exp(-std::pow(p.sigma * t, p.alpha)); }

inline std::complex<double> chf(double t, const Law& p) {
  if (t == 0.0) return 1.0;
  const double a = std::abs(t);
  const double ph = phase(a, p);
  return std::polar(modulus(a, p), t > 0 ? ph : -ph);
}

// Integrates g over (0, T) in panels short enough to resolve cos(t y).
template <class G>
double oscillatory(G g, double y, const Law& p) {
  const double T = std::pow(42.0, 1.0 / p.alpha) / p.sigma;
  const double width = std::min(T / 8.0, 1.5 / std::max(1.0, std::abs(y - p.mu)));
  double first = std::min(width, T);
  boost::math::quadrature::tanh_sinh<double> ts;
  double sum = ts.integrate(g, 0.0, first, 1e-14);
  for (double a = first; a < T; a += width) {
    const double b = std::min(T, a + width);
    sum += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(g, a, b, 0);
  }
  return sum;
}

inline double pdf(double y, const Law& p) {
  auto g = [&](double t) { return modulus(t, p) * std::cos(phase(t, p) - t * y); };
  return oscillatory(g, y, p) / std::numbers::pi;
}

inline double cdf(double y, const Law& p) {
  auto g = [&](double t) { return modulus(t, p) * std::sin(phase(t, p) - t * y) / t; };
  return 0.5 - oscillatory(g, y, p) / std::numbers::pi;
}

// Bivariate chf of sum_j g_j^(1/a) V_j s_j with V_j ~ S1(a, 1, 1, 0).
inline std::complex<double> spectral_chf(const Eigen::Vector2d& t, double alpha,
                                         const std::vector<Eigen::Vector2d>& s,
                                         const std::vector<double>& g) {
  const double tn = std::tan(std::numbers::pi * alpha / 2.0);
  std::complex<double> acc = 0.0;
  for (std::size_t j = 0; j < s.size(); ++j) {
    const double ip = t.dot(s[j]);
    const double sg = ip > 0 ? 1.0 : (ip < 0 ? -1.0 : 0.0);
    acc -= g[j] * std::pow(std::abs(ip), alpha) * std::complex<double>(1.0, -sg * tn);
  }
  return std::exp(acc);
}

inline std::complex<double> elliptical_chf(const Eigen::Vector2d& t, double alpha,
                                           const Eigen::Matrix2d& sigma) {
  return std::exp(-std::pow(t.dot(sigma * t), alpha / 2.0));
}

// Projected gradient descent with a fixed 1/L step, for NNLS.
inline Eigen::VectorXd nnls_projected_gradient(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                                               double tol = 1e-10, int max_iter = 2000000) {
  const Eigen::MatrixXd H = A.transpose() * A;
  const Eigen::VectorXd c = A.transpose() * b;
  const double L = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(H).eigenvalues().maxCoeff();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(A.cols());
  for (int it = 0; it < max_iter; ++it) {
    const Eigen::VectorXd nx = (x - (H * x - c) / L).cwiseMax(0.0);
    const double d = (nx - x).cwiseAbs().maxCoeff();
    x = nx;
    if (d < tol) break;
  }
  return x;
}

}  // namespace oracle
