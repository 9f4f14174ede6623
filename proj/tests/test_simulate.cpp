#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

#include "oracle.hpp"
#include "stablekit/density.hpp"
#include "stablekit/errors.hpp"
#include "stablekit/gof.hpp"
#include "stablekit/simulate.hpp"

using namespace stablekit;

namespace {

std::complex<double> ecf(std::span<const double> y, double t) {
  std::complex<double> s = 0.0;
  for (double v : y) s += std::polar(1.0, t * v);
  return s / static_cast<double>(y.size());
}

std::complex<double> ecf(const Eigen::MatrixXd& z, const Eigen::Vector2d& t) {
  const Eigen::VectorXd p = z * t;
  return ecf(std::span<const double>(p.data(), static_cast<std::size_t>(p.size())), 1.0);
}

double mc_z(std::complex<double> est, std::complex<double> truth, std::size_t n) {
  return std::abs(est - truth) / std::sqrt((1.0 - std::norm(truth)) / static_cast<double>(n));
}

}  // namespace

TEST_CASE("rng streams are reproducible and distinct") {
  RngStream a(42, 0), b(42, 0), c(42, 1), d(43, 0);
  bool differ_c = false, differ_d = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    CHECK(x == b.next_u64());
    differ_c |= x != c.next_u64();
    differ_d |= x != d.next_u64();
  }
  CHECK(differ_c);
  CHECK(differ_d);
  RngStream u(1);
  for (int i = 0; i < 1000; ++i) {
    const double v = u.uniform();
    CHECK(v > 0.0);
    CHECK(v < 1.0);
  }
}

TEST_CASE("rstable is deterministic for a fixed seed") {
  const StableParams p{1.3, 0.5, 2.0, 0.0, Form::S0};
  RngStream r1(7), r2(7);
  CHECK(rstable(5, p, r1) == rstable(5, p, r2));
}

TEST_CASE("rstable Gaussian moments") {
  RngStream rng(1);
  const auto y = rstable(200000, {2.0, 0.0, 1.0, 0.0, Form::S0}, rng);
  const double n = static_cast<double>(y.size());
  const double mean = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : y) ss += (v - mean) * (v - mean);
  CHECK(std::abs(mean) < 0.02);
  CHECK(std::abs(std::sqrt(ss / (n - 1)) - std::sqrt(2.0)) < 0.02);
}

TEST_CASE("rstable empirical chf") {
  const std::size_t n = 200000;
  for (int form : {0, 1}) {
    const oracle::Law law{1.3, 0.5, 2.0, 0.0, form};
    RngStream rng(9, static_cast<std::uint64_t>(form));
    const auto y = rstable(n, {1.3, 0.5, 2.0, 0.0, form ? Form::S1 : Form::S0}, rng);
    for (double t : {0.2, 0.5, 1.0}) CHECK(mc_z(ecf(y, t), oracle::chf(t, law), n) < 4.0);
  }
  const oracle::Law cauchy_skew{1.0, -0.8, 3.0, 1.0, 1};
  RngStream rng(10);
  const auto y = rstable(n, {1.0, -0.8, 3.0, 1.0, Form::S1}, rng);
  for (double t : {0.05, 0.2, 0.5}) CHECK(mc_z(ecf(y, t), oracle::chf(t, cauchy_skew), n) < 4.0);
}

TEST_CASE("scale and shift are applied after the standard draw") {
  for (auto form : {Form::S0, Form::S1}) {
    RngStream r1(3), r2(3);
    const auto base = rstable(50, {1.4, 0.6, 1.0, 0.0, form}, r1);
    const auto moved = rstable(50, {1.4, 0.6, 2.5, -3.0, form}, r2);
    for (std::size_t i = 0; i < base.size(); ++i) CHECK(moved[i] == 2.5 * base[i] + -3.0);
  }
}

TEST_CASE("positive stable draws") {
  RngStream rng(5);
  const auto p = rstable_positive(10000, 0.5, rng);
  CHECK(*std::min_element(p.begin(), p.end()) > 0.0);
  const double ks = ks_statistic(p, [](double x) { return x > 0 ? std::erfc(0.5 / std::sqrt(x)) : 0.0; });
  CHECK(ks < 1.63 / 100.0);
  for (double ah : {0.3, 0.7}) {
    RngStream r(6);
    const auto q = rstable_positive(100000, ah, r);
    double m = 0.0, m2 = 0.0;
    for (double x : q) {
      m += std::exp(-x);
      m2 += std::exp(-2.0 * x);
    }
    m /= 1e5;
    const double se = std::sqrt((m2 / 1e5 - m * m) / 1e5);
    CHECK(std::abs(m - std::exp(-1.0)) < 4.0 * se);
  }
  RngStream r(7);
  const auto q = rstable_positive(10000, 0.8, r);
  CHECK(ks_statistic(q, [](double x) {
          return cdf_univariate(x, positive_stable_params(0.8));
        }) < 1.63 / 100.0);
  CHECK_THROWS_AS(rstable_positive(5, 1.2, r), DomainError);
}

TEST_CASE("truncated draws") {
  RngStream rng(2);
  const StableParams p{1.3, 0.5, 2.0, 0.0, Form::S0};
  const auto y = rstable_truncated(200, p, -5.0, 5.0, rng);
  CHECK(y.size() == 200);
  CHECK(std::all_of(y.begin(), y.end(), [](double v) { return v > -5.0 && v < 5.0; }));

  RngStream r2(3);
  const auto s = rstable_truncated(4000, {1.1, 0.0, 1.0, 2.0, Form::S0}, 0.0, 4.0, r2);
  const double mean = std::accumulate(s.begin(), s.end(), 0.0) / 4000.0;
  double ss = 0.0;
  for (double v : s) ss += (v - mean) * (v - mean);
  CHECK(std::abs(mean - 2.0) < 4.0 * std::sqrt(ss / 3999.0 / 4000.0));

  CHECK_THROWS_AS(rstable_truncated(5, {1.5, 0.0, 1.0, 0.0, Form::S0}, 1e30, 2e30, r2), EmptyTruncationRegion);
  CHECK_THROWS_AS(rstable_truncated(5, p, 1.0, -1.0, r2), DomainError);
}

TEST_CASE("elliptical draws") {
  Eigen::MatrixXd S(2, 2);
  S << 1, 0.5, 0.5, 1;
  RngStream rng(11);
  const auto z = rstable_elliptical(200, {1.3, S, Eigen::VectorXd::Zero(2)}, rng);
  CHECK(z.rows() == 200);
  CHECK(z.cols() == 2);
  CHECK(z.allFinite());

  RngStream g(12);
  const auto x = rstable_elliptical(100000, {2.0, S, Eigen::VectorXd::Zero(2)}, g);
  const Eigen::MatrixXd c = x.rowwise() - x.colwise().mean();
  const Eigen::MatrixXd cov = c.transpose() * c / 99999.0;
  CHECK((cov - 2.0 * S).cwiseAbs().maxCoeff() < 0.04);

  const std::size_t n = 200000;
  RngStream h(13);
  const auto e = rstable_elliptical(n, {1.3, S, Eigen::VectorXd::Zero(2)}, h);
  for (const Eigen::Vector2d t : {Eigen::Vector2d(0.3, 0), Eigen::Vector2d(0.2, 0.5), Eigen::Vector2d(-0.6, 0.4)})
    CHECK(mc_z(ecf(e, t), oracle::elliptical_chf(t, 1.3, S), n) < 4.0);

  Eigen::MatrixXd bad(2, 2);
  bad << 1, 3, 3, 1;
  CHECK_THROWS(rstable_elliptical(5, {1.3, bad, Eigen::VectorXd::Zero(2)}, h));
  CHECK_THROWS_AS(cholesky_factor(bad), NotPositiveDefinite);
  Eigen::MatrixXd semi(2, 2);
  semi << 1, 1, 1, 1;
  const Eigen::MatrixXd L = cholesky_factor(semi);
  CHECK((L * L.transpose() - semi).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("spectral draws") {
  SpectralMeasure m;
  m.alpha = 1.3;
  m.points = circle_anchors(4);
  m.masses = {0.1, 0.5, 0.5, 0.1};
  m.mu = Eigen::VectorXd::Zero(2);
  RngStream rng(21);
  const auto z = rstable_spectral(200, m, rng);
  CHECK(z.rows() == 200);
  CHECK(z.cols() == 2);

  SpectralMeasure ray;
  ray.alpha = 1.5;
  ray.points = {Eigen::Vector2d(1, 0)};
  ray.masses = {1.0};
  ray.mu = Eigen::VectorXd::Zero(2);
  const auto r = rstable_spectral(100, ray, rng);
  CHECK(r.col(1).cwiseAbs().maxCoeff() == 0.0);

  const std::size_t n = 200000;
  RngStream h(22);
  const auto e = rstable_spectral(n, m, h);
  std::vector<Eigen::Vector2d> s;
  for (const auto& v : m.points) s.emplace_back(v);
  for (const Eigen::Vector2d t : {Eigen::Vector2d(0.5, 0), Eigen::Vector2d(0.3, 0.4), Eigen::Vector2d(-0.2, 0.7)})
    CHECK(mc_z(ecf(e, t), oracle::spectral_chf(t, 1.3, s, m.masses), n) < 4.0);

  m.alpha = 1.0;
  CHECK_THROWS_AS(rstable_spectral(5, m, h), UnsupportedAlpha);
}
