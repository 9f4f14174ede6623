#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "stablekit/errors.hpp"
#include "stablekit/params.hpp"

using namespace stablekit;

TEST_CASE("validate accepts a typical simulation setting") {
  CHECK_NOTHROW(validate(StableParams{1.3, 0.5, 2.0, 0.0, Form::S0}));
}

TEST_CASE("validate rejects out-of-range fields") {
  CHECK_THROWS_AS(validate(StableParams{2.1, 0.0, 1.0, 0.0, Form::S0}), DomainError);
  CHECK_THROWS_AS(validate(StableParams{1.0, 0.0, -1.0, 0.0, Form::S1}), DomainError);
  CHECK_THROWS_AS(validate(StableParams{1.0, 1.5, 1.0, 0.0, Form::S1}), DomainError);
  CHECK_THROWS_AS(validate(StableParams{0.0, 0.0, 1.0, 0.0, Form::S1}), DomainError);
  CHECK_THROWS_AS(validate(StableParams{1.0, 0.0, 1.0, NAN, Form::S1}), DomainError);
  try {
    validate(StableParams{2.1, 0.0, 1.0, 0.0, Form::S0});
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("alpha") != std::string::npos);
  }
  try {
    validate(StableParams{1.0, 0.0, -1.0, 0.0, Form::S0});
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("sigma") != std::string::npos);
  }
}

TEST_CASE("validate accepts exactly the declared box") {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> U(-3.0, 3.0);
  for (int i = 0; i < 2000; ++i) {
    const StableParams p{U(gen), U(gen), U(gen), U(gen), i % 2 ? Form::S0 : Form::S1};
    const bool inside = p.alpha > 0 && p.alpha <= 2 && std::abs(p.beta) <= 1 && p.sigma > 0;
    if (inside)
      CHECK_NOTHROW(validate(p));
    else
      CHECK_THROWS_AS(validate(p), DomainError);
  }
}

TEST_CASE("convert_form shifts the location only") {
  const StableParams p{1.3, 0.5, 2.0, 0.0, Form::S0};
  const StableParams q = convert_form(p, Form::S1);
  CHECK(q.form == Form::S1);
  CHECK(q.alpha == p.alpha);
  CHECK(q.beta == p.beta);
  CHECK(q.sigma == p.sigma);
  CHECK(q.mu == doctest::Approx(-2.0 * 0.5 * std::tan(0.65 * std::numbers::pi)).epsilon(1e-14));
}

TEST_CASE("convert_form special cases") {
  for (double a : {0.4, 1.0, 1.7}) {
    const StableParams p{a, 0.0, 3.0, 1.25, Form::S0};
    CHECK(convert_form(p, Form::S1).mu == 1.25);
  }
  for (double b : {-1.0, 0.3, 1.0}) {
    const StableParams p{1.0, b, 1.0, -2.0, Form::S0};
    CHECK(convert_form(p, Form::S1).mu == doctest::Approx(-2.0).epsilon(1e-15));
  }
  const StableParams c{1.0, 0.5, 3.0, 0.0, Form::S0};
  CHECK(convert_form(c, Form::S1).mu ==
        doctest::Approx(-0.5 * (2.0 / std::numbers::pi) * 3.0 * std::log(3.0)).epsilon(1e-14));
}

TEST_CASE("convert_form is an involution") {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> A(0.1, 2.0), B(-1.0, 1.0), S(0.1, 10.0), M(-10.0, 10.0);
  for (int i = 0; i < 500; ++i) {
    const StableParams p{i % 7 == 0 ? 1.0 : A(gen), B(gen), S(gen), M(gen), Form::S0};
    const StableParams back = convert_form(convert_form(p, Form::S1), Form::S0);
    CHECK(back.alpha == p.alpha);
    CHECK(back.beta == p.beta);
    CHECK(back.sigma == p.sigma);
    CHECK(std::abs(back.mu - p.mu) <= 1e-12 * std::max(1.0, std::abs(p.mu)) + 1e-12);
  }
}

TEST_CASE("special_case classification") {
  CHECK(special_case({2.0, 0.3, 1.0, 0.0, Form::S0}) == SpecialCase::Gaussian);
  CHECK(special_case({1.0, 0.0, 1.0, 0.0, Form::S0}) == SpecialCase::Cauchy);
  CHECK(special_case({0.5, 1.0, 1.0, 0.0, Form::S1}) == SpecialCase::Levy);
  CHECK(special_case({0.5, -1.0, 1.0, 0.0, Form::S1}) == SpecialCase::Levy);
  CHECK(special_case({0.7, 1.0, 1.0, 0.0, Form::S0}) == SpecialCase::PositiveStable);
  CHECK(special_case({1.5, 0.2, 1.0, 0.0, Form::S0}) == SpecialCase::General);
}

TEST_CASE("normalization snaps alpha near 1 and drops beta at 2") {
  const StableParams p = normalized({1.0 + 1e-10, 0.4, 1.0, 0.0, Form::S0});
  CHECK(p.alpha == 1.0);
  CHECK(normalized({2.0, 0.7, 1.0, 0.0, Form::S1}).beta == 0.0);
}

TEST_CASE("chf of the two forms agree after conversion") {
  const StableParams p{1.3, 0.5, 2.0, 0.7, Form::S0};
  const StableParams q = convert_form(p, Form::S1);
  for (double t : {-2.0, -0.3, 0.1, 1.0, 4.0}) {
    CHECK(std::abs(chf(t, p) - chf(t, q)) < 1e-13);
  }
}

TEST_CASE("elliptical and spectral validation") {
  Eigen::MatrixXd S(2, 2);
  S << 1, 0.5, 0.5, 1;
  CHECK_NOTHROW(validate(EllipticalParams{1.2, S, Eigen::VectorXd::Zero(2)}));
  Eigen::MatrixXd bad(2, 2);
  bad << 1, 2, 2, 1;
  CHECK_THROWS(validate(EllipticalParams{1.2, bad, Eigen::VectorXd::Zero(2)}));
  CHECK_THROWS_AS(validate(EllipticalParams{1.2, S, Eigen::VectorXd::Zero(3)}), DimensionMismatch);

  SpectralMeasure m;
  m.alpha = 1.3;
  m.points = circle_anchors(4);
  m.masses = {0.1, 0.5, 0.5, 0.1};
  m.mu = Eigen::VectorXd::Zero(2);
  CHECK_NOTHROW(validate(m));
  m.alpha = 1.0;
  CHECK_THROWS(validate(m));
  m.alpha = 1.3;
  m.masses = {0, 0, 0, 0};
  CHECK_THROWS_AS(validate(m), DomainError);
}

TEST_CASE("mixture weights must lie on the simplex") {
  MixtureSpec s{{0.3, 0.7}, {{1, 0, 1, 0, Form::S0}, {1, 0, 1, 5, Form::S0}}};
  CHECK_NOTHROW(validate(s));
  s.weights = {0.3, 0.6};
  CHECK_THROWS_AS(validate(s), DomainError);
  s.weights = {-0.1, 1.1};
  CHECK_THROWS_AS(validate(s), DomainError);
}

TEST_CASE("circle anchors") {
  const auto a = circle_anchors(4);
  REQUIRE(a.size() == 4);
  CHECK(a[0][0] == doctest::Approx(1.0));
  CHECK(a[1][1] == doctest::Approx(1.0));
  for (const auto& v : a) CHECK(std::abs(v.norm() - 1.0) < 1e-12);
}
