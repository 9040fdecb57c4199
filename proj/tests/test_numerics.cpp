#include <cmath>
#include <numbers>

#include "crn/errors.hpp"
#include "crn/numerics.hpp"
#include "crn/rng.hpp"
#include "doctest.h"

using namespace crn;
using namespace crn::numerics;

TEST_CASE("log_gamma examples") {
  CHECK(log_gamma(5.0) == doctest::Approx(std::log(24.0)).epsilon(1e-13));
  CHECK(log_gamma(0.5) == doctest::Approx(0.5 * std::log(std::numbers::pi)).epsilon(1e-13));
  double g = std::sqrt(std::numbers::pi);
  for (double x = 0.5; x < 10.5; x += 1.0) g *= x;
  CHECK(log_gamma(10.5) == doctest::Approx(std::log(g)).epsilon(1e-13));
  CHECK(log_gamma(1.0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
  for (double x : {0.1, 1.7, 3.3, 25.0, 171.5}) {
    CHECK(log_gamma(x) == doctest::Approx(std::lgamma(x)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(log_gamma(0.0), DomainError);
  CHECK_THROWS_AS(log_gamma(-1.0), DomainError);
}

TEST_CASE("incomplete gamma identities") {
  CHECK(reg_inc_gamma_lower(1, 1) == doctest::Approx(1 - std::exp(-1.0)).epsilon(1e-13));
  CHECK(reg_inc_gamma_lower(3.7, 0) == 0.0);
  CHECK(reg_inc_gamma_lower(2, 2) == doctest::Approx(1 - 3 * std::exp(-2.0)).epsilon(1e-13));
  for (double a : {0.3, 1.0, 4.5, 30.0}) {
    for (double x : {0.01, 0.7, 3.0, 12.0, 60.0}) {
      CHECK(reg_inc_gamma_lower(a, x) + reg_inc_gamma_upper(a, x) == doctest::Approx(1.0).epsilon(1e-13));
    }
  }
  CHECK_THROWS_AS(reg_inc_gamma_lower(0, 1), DomainError);
  CHECK_THROWS_AS(reg_inc_gamma_lower(1, -1), DomainError);
}

TEST_CASE("incomplete gamma is monotone with limits 0 and 1") {
  for (double a : {0.5, 2.0, 10.5}) {
    double prev = 0.0;
    for (double x = 0.0; x < 200.0; x += 0.25) {
      const double p = reg_inc_gamma_lower(a, x);
      CHECK(p >= prev);
      prev = p;
    }
    CHECK(prev == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("incomplete beta identities") {
  CHECK(reg_inc_beta(1, 1, 0.3) == doctest::Approx(0.3).epsilon(1e-14));
  CHECK(reg_inc_beta(2, 1, 0.5) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(reg_inc_beta(2, 3, 0.0) == 0.0);
  CHECK(reg_inc_beta(2, 3, 1.0) == 1.0);
  UniformStream s(3, 0);
  double worst = 0;
  for (int i = 0; i < 1000; ++i) {
    const double a = 0.1 + 20 * s.next();
    const double b = 0.1 + 20 * s.next();
    const double x = s.next();
    worst = std::max(worst, std::abs(reg_inc_beta(a, b, x) - (1 - reg_inc_beta(b, a, 1 - x))));
  }
  CHECK(worst <= 1e-12);
  CHECK_THROWS_AS(reg_inc_beta(0, 1, 0.5), DomainError);
  CHECK_THROWS_AS(reg_inc_beta(1, 1, 1.5), DomainError);
}

TEST_CASE("normal CDF and survival function") {
  CHECK(normal_cdf(0.0) == 0.5);
  CHECK(normal_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-14));
  CHECK(normal_sf(10.0) == doctest::Approx(7.619853024160527e-24).epsilon(1e-12));
}

TEST_CASE("cholesky examples") {
  const Matrix id = Matrix::identity(4);
  const Matrix l = cholesky(id);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) CHECK(l(i, j) == id(i, j));

  const SpdMatrix m(Matrix{{4, 2}, {2, 3}});
  const Matrix& f = m.cholesky_factor();
  CHECK(f(0, 0) == doctest::Approx(2.0));
  CHECK(f(0, 1) == 0.0);
  CHECK(f(1, 0) == doctest::Approx(1.0));
  CHECK(f(1, 1) == doctest::Approx(std::sqrt(2.0)));
  CHECK(m.log_determinant() == doctest::Approx(std::log(4.0 * 3.0 - 2.0 * 2.0)).epsilon(1e-14));
}

TEST_CASE("cholesky rejects non-SPD input") {
  CHECK_THROWS_AS(SpdMatrix(Matrix{{1, 2}, {2, 1}}), NumericError);
  CHECK_THROWS_AS(SpdMatrix(Matrix{{1, 0.5}, {0.4, 1}}), NumericError);
  CHECK_THROWS_AS(SpdMatrix(Matrix{{0, 0}, {0, 1}}), NumericError);
}

TEST_CASE("random SPD reconstruction, solve and inverse") {
  UniformStream s(21, 0);
  for (std::size_t q : {1u, 2u, 4u, 9u, 16u}) {
    Matrix b(q, q);
    for (std::size_t i = 0; i < q; ++i)
      for (std::size_t j = 0; j < q; ++j) b(i, j) = 2 * s.next() - 1;
    const Matrix a = b * b.transpose() + Matrix::identity(q).scaled(static_cast<double>(q));
    const SpdMatrix m(a);
    const Matrix& l = m.cholesky_factor();
    CHECK((l * l.transpose() - a).norm_inf() <= 1e-9 * a.norm_inf());

    std::vector<double> rhs(q);
    for (auto& v : rhs) v = s.next();
    const auto x = m.solve(rhs);
    const auto back = a.apply(x);
    for (std::size_t i = 0; i < q; ++i) CHECK(back[i] == doctest::Approx(rhs[i]).epsilon(1e-10));
    CHECK((a * m.inverse() - Matrix::identity(q)).norm_inf() <= 1e-10);
  }
}

TEST_CASE("adaptive quadrature") {
  auto r = integrate([](double x) { return std::exp(-x); }, 0, 50);
  CHECK(r.value == doctest::Approx(1 - std::exp(-50.0)).epsilon(1e-12));
  r = integrate([](double x) { return 1.0 / std::sqrt(x); }, 1e-12, 1, 1e-8, 5000);
  CHECK(r.value == doctest::Approx(2 - 2e-6).epsilon(1e-7));
  r = integrate([](double x) { return std::exp(-0.5 * (x - 60) * (x - 60) / 4.0); }, 0.1, 1e4, 1e-10);
  CHECK(r.value == doctest::Approx(std::sqrt(2 * std::numbers::pi * 4.0)).epsilon(1e-9));
  CHECK_THROWS_AS(integrate([](double x) { return std::sin(1.0 / x) / x; }, 1e-9, 1, 1e-14, 20),
                  NumericError);
}

TEST_CASE("golden section maximum") {
  const auto m = golden_section_max([](double x) { return -(x - 0.3) * (x - 0.3); }, 0, 1);
  CHECK(m.argmax == doctest::Approx(0.3).epsilon(1e-7));
  const auto edge = golden_section_max([](double x) { return x; }, 0, 1);
  CHECK(edge.value == 1.0);
}
