#include <doctest.h>

#include <cmath>

#include "heun/recurrence.hpp"
#include "support.hpp"

using namespace heun;

TEST_SUITE("recurrence") {
  TEST_CASE("coefficients of the anchor") {
    const auto p = testing::anchor_params();
    CHECK(coeff_R(0, p) == 0.0);
    CHECK(coeff_R(1, p) == -4.0);
    CHECK(coeff_R(2, p) == -10.0);
    CHECK(coeff_Q(0, p) == 2.0);
    CHECK(coeff_Q(1, p) == 12.0);
    CHECK(coeff_P(0, p) == doctest::Approx(-3.0).epsilon(1e-15));
    CHECK(coeff_P(1, p) == doctest::Approx(-9.6).epsilon(1e-15));
  }

  TEST_CASE("constructed zeros") {
    // q = aαβ + a(1−δ)ε makes Q_0 vanish.
    const double a = 2, al = 3, be = 2, ga = 1, de = 2, ep = 3;
    const auto p = require_valid({a, a * al * be + a * (1 - de) * ep, al, be, ga, de, ep});
    CHECK(coeff_Q(0, p) == 0.0);
    // ε + γ = α − n zeroes P_n: α = 4, ε + γ = 2, n = 2.
    const auto p2 = require_valid({2, 1, 4, 0.5, 0.5, 3.5, 1.5});
    CHECK(coeff_P(2, p2) == 0.0);
  }

  TEST_CASE("coeff_P rejects a zero denominator") {
    // n + ε + γ = 0 only at negative n for valid params; use real n.
    const auto p = testing::anchor_params();
    CHECK_THROWS_AS((void)coeff_P(-4.0, p), DivisionByZero);
  }

  TEST_CASE("R_0 vanishes for any params") {
    std::mt19937_64 rng(2);
    for (int i = 0; i < 50; ++i) {
      PartialParams pp;
      if (!testing::draw_partial(rng, i % 3, pp)) continue;
      CHECK(coeff_R(0, require_valid(pp.with_q(0.3))) == 0.0);
    }
  }

  TEST_CASE("three-term stream of the anchor") {
    const auto p = testing::anchor_params();
    CHECK(three_term_coefficients(p, 0).values == std::vector<double>{1.0});
    const auto s = three_term_coefficients(p, 2);
    REQUIRE(s.values.size() == 3);
    CHECK(s.values[1] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(s.values[2] == doctest::Approx(0.3).epsilon(1e-14));
    CHECK(s.source == CoefficientSource::ThreeTerm);
    CHECK(recurrence_residual(three_term_coefficients(p, 50), p) < 1e-13);
  }

  TEST_CASE("two-term stream of the anchor") {
    const auto p = testing::anchor_params();
    const auto s = two_term_coefficients(p, {}, 60);
    CHECK(s.values[0] == 1.0);
    CHECK(s.values[1] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(s.values[2] == doctest::Approx(0.3).epsilon(1e-15));
    // c_n = 6 / ((n+2)(n+3)) for this case.
    for (std::size_t n = 0; n <= 60; ++n) {
      CHECK(testing::rel_diff(s.values[n], 6.0 / ((n + 2.0) * (n + 3.0))) < 1e-14);
    }
    CHECK(recurrence_residual(s, p) < 1e-12);
  }

  TEST_CASE("broken constraint is detected") {
    const auto p = require_valid({2, 4.1, 3, 2, 1, 2, 3});
    CHECK(recurrence_residual(two_term_coefficients(p, {}, 20), p) > 1e-3);
  }

  TEST_CASE("recurrence_residual needs three entries") {
    const auto p = testing::anchor_params();
    CHECK_THROWS_AS((void)recurrence_residual(three_term_coefficients(p, 1), p),
                    PreconditionViolation);
  }

  TEST_CASE("closed form agrees with the ratio up to n = 200") {
    for (const auto& c : testing::random_cases(101, 40)) {
      const auto r = two_term_coefficients(c.params(), c.e_list(), 200);
      const auto g = closed_form_coefficients(c.params(), c.e_list(), 200);
      CHECK(g.source == CoefficientSource::GammaClosedForm);
      double worst = 0;
      for (std::size_t n = 0; n <= 200; ++n) worst = std::max(worst, testing::rel_diff(r.values[n], g.values[n]));
      CHECK(worst < 1e-13);
      CHECK(testing::rel_diff(closed_form_coefficient(c.params(), c.e_list(), 37), g.values[37]) < 1e-14);
    }
  }

  TEST_CASE("two-term and three-term streams agree for accepted reductions") {
    for (const auto& c : testing::random_cases(202, 60)) {
      const auto t = three_term_coefficients(c.params(), 50);
      const auto g = closed_form_coefficients(c.params(), c.e_list(), 50);
      double worst = 0;
      for (std::size_t n = 0; n <= 50; ++n) worst = std::max(worst, testing::rel_diff(t.values[n], g.values[n]));
      const double limit = std::max(1e-11, 4.0 * testing::q_rounding_bound(c, 50));
      CHECK_MESSAGE(worst < limit, "a = " << c.params().a() << ", N = " << c.N() << ", limit " << limit);
    }
  }

  TEST_CASE("coefficients decay like n^-2") {
    for (const auto& c : testing::random_cases(303, 60)) {
      const auto g = closed_form_coefficients(c.params(), c.e_list(), 50);
      CHECK(std::abs(g.values[50] * 2500.0) < 1e6 * std::max(std::abs(g.values[1]), 1e-300) + 1e-300);
    }
  }

  TEST_CASE("terminating stream: beta a positive integer <= N+1") {
    // N = 1 and β = 2 give γ+ε−α = β−1−N = 0, so c_n = 0 for n >= 1.
    PartialParams pp{0.4, 1.7, 2.0, 0.8, 3.0, 0.0};
    pp.epsilon = delta_from_fuchsian(pp.alpha, pp.beta, pp.gamma, pp.delta);
    const auto out = find_reductions(pp, 1, false);
    REQUIRE_FALSE(out.cases.empty());
    for (const auto& c : out.cases) {
      const auto s = closed_form_coefficients(c.params(), c.e_list(), 10);
      const double A = c.params().gamma() + c.params().epsilon() - c.params().alpha();
      const auto n0 = static_cast<std::size_t>(1 - std::round(A));
      for (std::size_t n = n0; n <= 10; ++n) CHECK(s.values[n] == 0.0);
      CHECK(s.values[n0 - 1] != 0.0);
    }
  }

  TEST_CASE("terminating closed form leaves no spurious recurrence residual") {
    const auto p = require_valid({1.7, 2.38, 1.0, 2.3, 1.4, 2.0, 0.9});
    const auto s = closed_form_coefficients(p, {}, 20);
    REQUIRE(first_vanishing_index(p) == std::optional<std::size_t>(1));
    for (std::size_t n = 1; n <= 20; ++n) CHECK(s.values[n] == 0.0);
    CHECK(recurrence_residual(s, p) < 1e-12);
    auto off = p.raw();
    off.q += 0.1;
    CHECK(recurrence_residual(closed_form_coefficients(require_valid(off), {}, 20), require_valid(off)) > 1e-3);
  }

  TEST_CASE("pole in the ansatz") {
    const auto p = testing::anchor_params();
    const std::vector<double> bad{-2.0};
    CHECK_THROWS_AS((void)two_term_coefficients(p, bad, 5), PoleError);
    CHECK_THROWS_AS((void)closed_form_coefficients(p, bad, 5), PoleError);
  }

  TEST_CASE("forward recursion is chosen only when stable") {
    CHECK(forward_recursion_stable(require_valid({0.3, 1, 3, 2, 1, 2, 3}), 50));
    CHECK_FALSE(forward_recursion_stable(testing::anchor_params(), 50));
  }
}
