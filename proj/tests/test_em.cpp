#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/exp_sinh.hpp>

#include "stablekit/density.hpp"
#include "stablekit/em_fit.hpp"
#include "stablekit/errors.hpp"
#include "stablekit/simulate.hpp"

using namespace stablekit;

namespace {

std::vector<double> draw(std::size_t n, const StableParams& p, std::uint64_t seed) {
  RngStream rng(seed);
  return rstable(n, p, rng);
}

bool nondecreasing(const FitReport& r, std::size_t n) {
  for (std::size_t i = 1; i < r.loglik_trace.size(); ++i)
    if (r.loglik_trace[i] < r.loglik_trace[i - 1] - 1e-6 * static_cast<double>(n)) return false;
  return true;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v.size() % 2 ? v[v.size() / 2] : 0.5 * (v[v.size() / 2 - 1] + v[v.size() / 2]);
}

}  // namespace

TEST_CASE("E-step weights: Cauchy closed form") {
  const std::vector<double> y{-30.0, -2.0, -0.1, 0.0, 0.7, 3.0, 150.0};
  const StableParams p{1.0, 0.0, 1.5, 0.4, Form::S0};
  const auto w = estep_weights(y, p);
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double z = (y[i] - 0.4) / 1.5;
    CHECK(w.w[static_cast<Eigen::Index>(i)] == doctest::Approx(4.0 / (1.0 + z * z)).epsilon(1e-5));
  }
  CHECK_FALSE(w.tau.has_value());
}

TEST_CASE("E-step weights against direct integration") {
  const double alpha = 1.5;
  const std::vector<double> y{-4.0, -0.5, 0.0, 1.2, 9.0};
  const auto w = estep_weights(y, {alpha, 0.0, 1.0, 0.0, Form::S0});
  boost::math::quadrature::exp_sinh<double> es;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double z2 = y[i] * y[i];
    auto kernel = [&](double p, double power) {
      if (p <= 0) return 0.0;
      return std::pow(p, -power) * std::exp(-z2 / (4.0 * p)) / std::sqrt(4.0 * std::numbers::pi * p) *
             pdf_positive_stable(p, alpha / 2.0);
    };
    const double num = es.integrate([&](double p) { return kernel(p, 1.0); }, 1e-12);
    const double den = pdf_univariate(y[i], {alpha, 0.0, 1.0, 0.0, Form::S0});
    CHECK(w.w[static_cast<Eigen::Index>(i)] == doctest::Approx(num / den).epsilon(1e-5));
  }
}

TEST_CASE("E-step weights near the Gaussian limit") {
  const std::vector<double> y{-2.0, -1.0, 0.0, 0.5, 2.5};
  const auto w = estep_weights(y, {1.999, 0.0, 1.0, 0.0, Form::S0});
  for (Eigen::Index i = 0; i < w.w.size(); ++i) CHECK(std::abs(w.w[i] - 1.0) < 0.05);
}

TEST_CASE("E-step weights: duplicates and validation") {
  const std::vector<double> y{1.3, 1.3, -0.2};
  const auto w = estep_weights(y, {0.9, 0.0, 1.0, 0.0, Form::S0});
  CHECK(w.w[0] == w.w[1]);
  for (Eigen::Index i = 0; i < w.w.size(); ++i) CHECK(w.w[i] > 0.0);
  CHECK_THROWS_AS(estep_weights(y, {1.5, 0.3, 1.0, 0.0, Form::S0}), DomainError);
}

TEST_CASE("config and input validation") {
  const auto y = draw(50, {1.5, 0, 1, 0, Form::S0}, 1);
  EmConfig bad;
  bad.tol = 0.0;
  CHECK_THROWS_AS(fit_symmetric(y, {1.5, 1, 0}, bad), DomainError);
  const std::vector<double> few{1, 2, 3};
  CHECK_THROWS_AS(fit_symmetric(few, {1.5, 1, 0}), InvalidInput);
  const std::vector<double> flat(20, 2.0);
  CHECK_THROWS_AS(fit_symmetric(flat, {1.5, 1, 0}), InvalidInput);
  CHECK_THROWS_AS(fit_symmetric(y, {2.5, 1, 0}), DomainError);
  CHECK_THROWS_AS(fit_symmetric_mixture(y, {{0.5, 0.6}, {1.5, 1.5}, {1, 1}, {0, 1}}), DomainError);
  CHECK_THROWS_AS(fit_cauchy_mixture(y, {{0.5, 0.5}, {0.0}, {1, 1}, {0, 1}}), DimensionMismatch);
}

TEST_CASE("fit_symmetric equivariance and determinism") {
  const auto y = draw(300, {1.5, 0.0, 1.0, 0.0, Form::S0}, 2);
  const auto base = fit_symmetric(y, {1.2, 0.8, 0.1});
  const auto p = std::get<StableParams>(base.estimates);
  CHECK(nondecreasing(base, y.size()));
  CHECK(base.iterations <= EmConfig{}.max_iter);

  std::vector<double> shifted = y;
  for (double& v : shifted) v += 10.0;
  const auto s = std::get<StableParams>(fit_symmetric(shifted, {1.2, 0.8, 10.1}).estimates);
  CHECK(s.mu == doctest::Approx(p.mu + 10.0).epsilon(1e-5));
  CHECK(s.alpha == doctest::Approx(p.alpha).epsilon(1e-5));
  CHECK(s.sigma == doctest::Approx(p.sigma).epsilon(1e-5));

  std::vector<double> scaled = y;
  for (double& v : scaled) v *= 3.0;
  const auto c = std::get<StableParams>(fit_symmetric(scaled, {1.2, 2.4, 0.3}).estimates);
  CHECK(c.sigma == doctest::Approx(3.0 * p.sigma).epsilon(1e-5));
  CHECK(c.alpha == doctest::Approx(p.alpha).epsilon(1e-5));
  CHECK(c.mu == doctest::Approx(3.0 * p.mu).epsilon(1e-4));

  const auto again = fit_symmetric(y, {1.2, 0.8, 0.1});
  CHECK(again.loglik_trace == base.loglik_trace);
  CHECK(std::get<StableParams>(again.estimates) == p);
  REQUIRE(base.gof.has_value());
  CHECK(base.gof->n == y.size());
}

TEST_CASE("fit_symmetric recovers alpha") {
  std::vector<double> da;
  for (std::uint64_t r = 0; r < 5; ++r) {
    const auto y = draw(1000, {1.5, 0.0, 1.0, 0.0, Form::S0}, 40 + r);
    const auto f = fit_symmetric(y, {1.2, 1.0, 0.0});
    da.push_back(std::abs(std::get<StableParams>(f.estimates).alpha - 1.5));
  }
  CHECK(median(da) <= 0.1);
}

TEST_CASE("fit_cauchy on exactly symmetric data keeps beta at zero") {
  auto half = draw(60, {1.0, 0.0, 2.0, 0.0, Form::S0}, 3);
  std::vector<double> y = half;
  for (double v : half) y.push_back(-v);
  const auto r = fit_cauchy(y, {0.0, 1.0, 0.0});
  const auto p = std::get<StableParams>(r.estimates);
  CHECK(std::abs(p.beta) < 1e-6);
  CHECK(p.alpha == 1.0);
  CHECK(nondecreasing(r, y.size()));
}

TEST_CASE("fit_cauchy recovers a skewed law") {
  std::vector<double> db, ds, dm;
  for (std::uint64_t r = 0; r < 3; ++r) {
    const auto y = draw(800, {1.0, 0.5, 2.0, 0.0, Form::S0}, 70 + r);
    const auto f = fit_cauchy(y, {0.0, 1.0, 0.5});
    const auto p = std::get<StableParams>(f.estimates);
    CHECK(nondecreasing(f, y.size()));
    db.push_back(std::abs(p.beta - 0.5));
    ds.push_back(std::abs(p.sigma - 2.0));
    dm.push_back(std::abs(p.mu));
  }
  CHECK(median(db) <= 0.1);
  CHECK(median(ds) <= 0.2);
  CHECK(median(dm) <= 0.2);
}

TEST_CASE("fit_skewed") {
  const auto y = draw(400, {1.6, -0.6, 1.0, 0.5, Form::S1}, 5);
  const auto r = fit_skewed(y, {1.3, 0.0, 1.5, 0.0}, Form::S1);
  const auto p = std::get<StableParams>(r.estimates);
  CHECK(p.form == Form::S1);
  CHECK(nondecreasing(r, y.size()));
  CHECK(std::abs(p.alpha - 1.6) < 0.2);
  CHECK(p.beta < 0.0);
  CHECK(r.loglik() >= loglik(y, StableParams{1.6, -0.6, 1.0, 0.5, Form::S1}) - 1e-6);

  const auto s = draw(300, {1.5, 0.0, 1.0, 0.0, Form::S0}, 6);
  const auto sym = std::get<StableParams>(fit_symmetric(s, {1.3, 1.0, 0.0}).estimates);
  const auto sk = std::get<StableParams>(fit_skewed(s, {1.3, 0.0, 1.0, 0.0}, Form::S0).estimates);
  CHECK(std::abs(sk.alpha - sym.alpha) < 0.1);
  CHECK(std::abs(sk.sigma - sym.sigma) < 0.1);
  CHECK(std::abs(sk.mu - sym.mu) < 0.15);
  CHECK(std::abs(sk.beta) < 0.3);
}

TEST_CASE("Cauchy mixture") {
  auto y = draw(300, {1.0, 0.0, 1.0, -20.0, Form::S0}, 7);
  const auto y2 = draw(700, {1.0, 0.0, 1.0, 20.0, Form::S0}, 8);
  y.insert(y.end(), y2.begin(), y2.end());
  const auto r = fit_cauchy_mixture(y, {{0.5, 0.5}, {0.0, 0.0}, {2.0, 2.0}, {-15.0, 15.0}});
  const auto m = std::get<MixtureSpec>(r.estimates);
  REQUIRE(m.size() == 2);
  CHECK(std::abs(m.weights[0] - 0.3) < 0.05);
  CHECK(std::abs(m.weights[1] - 0.7) < 0.05);
  CHECK(m.components[0].mu < m.components[1].mu);
  CHECK(std::abs(m.weights[0] + m.weights[1] - 1.0) < 1e-12);
  CHECK(nondecreasing(r, y.size()));

  const auto small = draw(80, {1.0, 0.3, 1.0, 0.0, Form::S0}, 9);
  const auto one = fit_cauchy_mixture(small, {{1.0}, {0.0}, {1.0}, {0.0}});
  const auto single = fit_cauchy(small, {0.0, 1.0, 0.0});
  CHECK(one.loglik_trace == single.loglik_trace);
  CHECK(std::get<MixtureSpec>(one.estimates).components[0] == std::get<StableParams>(single.estimates));
}

TEST_CASE("symmetric mixture: label symmetry, K = 1 and collapse") {
  auto y = draw(150, {1.7, 0.0, 0.5, 0.0, Form::S0}, 10);
  const auto y2 = draw(150, {1.5, 0.0, 0.5, 6.0, Form::S0}, 11);
  y.insert(y.end(), y2.begin(), y2.end());
  const auto a = fit_symmetric_mixture(y, {{0.4, 0.6}, {1.5, 1.2}, {1.0, 0.7}, {-1.0, 5.0}});
  const auto b = fit_symmetric_mixture(y, {{0.6, 0.4}, {1.2, 1.5}, {0.7, 1.0}, {5.0, -1.0}});
  const auto ma = std::get<MixtureSpec>(a.estimates), mb = std::get<MixtureSpec>(b.estimates);
  CHECK(nondecreasing(a, y.size()));
  for (std::size_t j = 0; j < 2; ++j) {
    CHECK(ma.weights[j] == doctest::Approx(mb.weights[j]).epsilon(1e-3));
    CHECK(ma.components[j].mu == doctest::Approx(mb.components[j].mu).epsilon(1e-3));
    CHECK(ma.components[j].alpha == doctest::Approx(mb.components[j].alpha).epsilon(1e-2));
  }

  const auto one = fit_symmetric_mixture(y2, {{1.0}, {1.3}, {1.0}, {5.0}});
  const auto single = fit_symmetric(y2, {1.3, 1.0, 5.0});
  CHECK(one.loglik_trace == single.loglik_trace);
  CHECK(std::get<MixtureSpec>(one.estimates).components[0] == std::get<StableParams>(single.estimates));

  const auto c = fit_symmetric_mixture(y2, {{0.5, 0.5}, {1.5, 1.5}, {1.0, 1e-3}, {6.0, 1e6}});
  CHECK(c.status == FitStatus::ComponentCollapse);
  CHECK_FALSE(c.converged);
}

TEST_CASE("elliptical fit") {
  Eigen::MatrixXd S(2, 2);
  S << 1.0, 0.3, 0.3, 0.5;
  RngStream rng(12);
  const auto z = rstable_elliptical(250, {2.0, S, Eigen::VectorXd::Zero(2)}, rng);
  const auto r = fit_elliptical(z, {1.5, Eigen::MatrixXd::Identity(2, 2), Eigen::VectorXd::Zero(2)});
  const auto p = std::get<EllipticalParams>(r.estimates);
  CHECK(p.alpha > 1.9);
  const Eigen::MatrixXd c = z.rowwise() - z.colwise().mean();
  const Eigen::MatrixXd half_cov = c.transpose() * c / (2.0 * 250.0);
  CHECK((p.sigma - half_cov).cwiseAbs().maxCoeff() < 0.1);
  CHECK(nondecreasing(r, 250));
  CHECK(r.sigma_trace.size() == r.loglik_trace.size());
  for (const auto& s : r.sigma_trace) {
    CHECK((s - s.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(Eigen::LLT<Eigen::MatrixXd>(s).info() == Eigen::Success);
  }

  Eigen::MatrixXd line(50, 2);
  for (int i = 0; i < 50; ++i) line.row(i) << i, 2.0 * i;
  CHECK_THROWS_AS(fit_elliptical(line, {1.5, Eigen::MatrixXd::Identity(2, 2), Eigen::VectorXd::Zero(2)}),
                  RankDeficientData);
  Eigen::MatrixXd bad(2, 2);
  bad << 1, 2, 2, 1;
  CHECK_THROWS_AS(fit_elliptical(z, {1.5, bad, Eigen::VectorXd::Zero(2)}), NotPositiveDefinite);
  CHECK_THROWS_AS(fit_elliptical(z, {1.5, Eigen::MatrixXd::Identity(3, 3), Eigen::VectorXd::Zero(3)}),
                  DimensionMismatch);
}
