#include <doctest.h>

#include <cmath>
#include <random>

#include "heun/special.hpp"

using namespace heun;

TEST_SUITE("special") {
  TEST_CASE("pochhammer values") {
    CHECK(pochhammer(3.7, 0) == 1.0);
    CHECK(pochhammer(3, 2) == 12.0);
    CHECK(pochhammer(-2, 4) == 0.0);
    CHECK(pochhammer(0.5, 3) == doctest::Approx(0.5 * 1.5 * 2.5));
  }

  TEST_CASE("pochhammer composition law") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-5, 5);
    for (int t = 0; t < 50; ++t) {
      const double x = u(rng);
      for (unsigned m = 0; m <= 20; m += 4) {
        for (unsigned n = 0; n <= 20; n += 5) {
          const double lhs = pochhammer(x, m + n);
          const double rhs = pochhammer(x, m) * pochhammer(x + m, n);
          CHECK(std::abs(lhs - rhs) <= 1e-13 * std::max(std::abs(lhs), 1e-300));
        }
      }
    }
  }

  TEST_CASE("2F1 special values") {
    CHECK(gauss_2f1(1.3, -0.4, 2.2, 0.0).value == 1.0);
    CHECK(gauss_2f1(2, 0.7, 0.7, 0.5).value == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(gauss_2f1(1, 1, 2, 0.5).value == doctest::Approx(2 * std::log(2.0)).epsilon(1e-14));
    CHECK(gauss_2f1(1, 1, 2, 0.5).status == EvalStatus::Converged);
  }

  TEST_CASE("2F1 terminating series") {
    // ₂F₁(−2, b; c; z) = 1 − 2bz/c + b(b+1)z²/(c(c+1)).
    const double b = 1.5, c = 2.5, z = 0.3;
    const double want = 1 - 2 * b * z / c + b * (b + 1) * z * z / (c * (c + 1));
    CHECK(gauss_2f1(-2, b, c, z).value == doctest::Approx(want).epsilon(1e-15));
  }

  TEST_CASE("2F1 errors") {
    CHECK_THROWS_AS((void)gauss_2f1(1, 1, 2, 1.0), DomainError);
    CHECK_THROWS_AS((void)gauss_2f1(1, 1, 2, -1.2), DomainError);
    CHECK_THROWS_AS((void)gauss_2f1(1, 1, -3, 0.2), PoleError);
    CHECK_THROWS_AS((void)gauss_2f1(1, 1, 0, 0.2), PoleError);
    SeriesControl tiny;
    tiny.max_terms = 5;
    CHECK_THROWS_AS((void)gauss_2f1(1, 1, 2, 0.9, tiny), NonConvergence);
  }

  TEST_CASE("SeriesControl validation") {
    SeriesControl c;
    c.rel_tol = 0;
    CHECK_THROWS_AS(c.check(), PreconditionViolation);
    c = {};
    c.consecutive_small = 0;
    CHECK_THROWS_AS(c.check(), PreconditionViolation);
  }

  TEST_CASE("2F1 is symmetric in a, b") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-3, 3), uz(-0.8, 0.8), uc(0.5, 4);
    for (int t = 0; t < 100; ++t) {
      const double a = u(rng), b = u(rng), c = uc(rng), z = uz(rng);
      const double x = gauss_2f1(a, b, c, z).value, y = gauss_2f1(b, a, c, z).value;
      CHECK(std::abs(x - y) <= 1e-14 * std::max(1.0, std::abs(x)));
    }
  }

  TEST_CASE("binomial identity") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> ua(-3, 3), ub(0.2, 4), uz(-0.9, 0.9);
    for (int t = 0; t < 200; ++t) {
      const double a = ua(rng), b = ub(rng), z = uz(rng);
      const double want = std::pow(1 - z, -a);
      CHECK(std::abs(gauss_2f1(a, b, b, z).value - want) <= 1e-12 * std::abs(want));
    }
  }

  TEST_CASE("derivative identities") {
    CHECK(gauss_2f1_deriv(1.5, 2.5, 3.5, 0.0, 1) == doctest::Approx(1.5 * 2.5 / 3.5));
    CHECK(gauss_2f1_deriv(2, 0.9, 0.9, 0.5, 1) == doctest::Approx(16.0).epsilon(1e-13));
    // d²/dz² (1−z)^{−2} = 6(1−z)^{−4}
    CHECK(gauss_2f1_deriv(2, 0.9, 0.9, 0.5, 2) == doctest::Approx(96.0).epsilon(1e-13));
    const double h = 1e-5;
    const double fd = (gauss_2f1(1, 1, 2, 0.25 + h).value - gauss_2f1(1, 1, 2, 0.25 - h).value) / (2 * h);
    CHECK(std::abs(gauss_2f1_deriv(1, 1, 2, 0.25, 1) - fd) < 1e-7);
    CHECK_THROWS_AS((void)gauss_2f1_deriv(1, 1, 2, 0.25, 3), PreconditionViolation);
  }

  TEST_CASE("derivative matches finite differences at random points") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-3, 3), uz(-0.8, 0.8), uc(0.5, 4);
    const double h = 1e-5;
    for (int t = 0; t < 200; ++t) {
      const double a = u(rng), b = u(rng), c = uc(rng), z = uz(rng);
      const double fd = (gauss_2f1(a, b, c, z + h).value - gauss_2f1(a, b, c, z - h).value) / (2 * h);
      const double d = gauss_2f1_deriv(a, b, c, z, 1);
      CHECK(std::abs(d - fd) <= 1e-6 * std::max(1.0, std::abs(d)));
    }
  }
}
