#include <doctest.h>

#include <cmath>

#include "heun/evaluator.hpp"
#include "heun/recurrence.hpp"
#include "support.hpp"

using namespace heun;

namespace {

/// Γ(γ+ε) / (Γ(γ+ε−α) Γ(γ+ε−β) Π e_k): the n → ∞ limit of c_n n².
double decay_constant(const Ansatz& a) {
  const auto& p = a.params;
  const double C = p.gamma() + p.epsilon();
  double k = std::tgamma(C) / (std::tgamma(C - p.alpha()) * std::tgamma(C - p.beta()));
  for (double e : a.e_list) k /= e;
  return k;
}

/// z(z−1)(z−a) · (u'' + (γ/z + δ/(z−1) + ε/(z−a)) u' + (αβz − q) u / (z(z−1)(z−a))).
double scaled_operator(const Ansatz& a, double z) {
  const auto o = ode_evaluate(a, z);
  const auto& p = a.params;
  const double s = z * (z - 1) * (z - p.a());
  const double c1 = p.gamma() / z + p.delta() / (z - 1) + p.epsilon() / (z - p.a());
  return s * (o.d2u.value + c1 * o.du.value) + (p.alpha() * p.beta() * z - p.q()) * o.u.value;
}

}  // namespace

TEST_SUITE("evaluator") {
  TEST_CASE("anchor at z = 0 is the coefficient sum") {
    const auto c = testing::anchor_case();
    const auto r = evaluate_expansion(c, 0.0);
    // c_n = 6/((n+2)(n+3)) telescopes to 3.
    CHECK(r.value == doctest::Approx(3.0).epsilon(1e-13));
    CHECK(r.status == EvalStatus::Converged);
    CHECK(r.tail_estimate <= 1e-14 * 3.0);
  }

  TEST_CASE("anchor sums to 3/(1-z)") {
    const auto c = testing::anchor_case();
    for (double z : {-0.5, 0.1, 0.25, 0.4, 0.9}) {
      CHECK(testing::rel_diff(evaluate_expansion(c, z).value, 3.0 / (1.0 - z)) < 1e-12);
      CHECK(testing::rel_diff(evaluate_expansion_deriv(c, z, 1).value, 3.0 / std::pow(1.0 - z, 2)) < 1e-11);
      CHECK(testing::rel_diff(evaluate_expansion_deriv(c, z, 2).value, 6.0 / std::pow(1.0 - z, 3)) < 1e-10);
    }
  }

  TEST_CASE("single-term truncation is a 2F1") {
    const auto c = testing::anchor_case();
    const auto& p = c.params();
    const double z = 0.3;
    CHECK(evaluate_partial_sum(c.ansatz(), z, 0, 1) ==
          doctest::Approx(gauss_2f1(p.alpha(), p.beta(), p.gamma() + p.epsilon(), z).value).epsilon(1e-15));
  }

  TEST_CASE("derivative at z = 0 from the coefficient sum") {
    for (const auto& c : testing::random_cases(12, 15)) {
      const auto& p = c.params();
      const auto s = closed_form_coefficients(p, c.e_list(), 20000);
      long double want = 0;
      for (std::size_t n = 0; n < s.values.size(); ++n)
        want += s.values[n] * p.alpha() * p.beta() / (p.gamma() + p.epsilon() + n);
      const auto got = evaluate_expansion_deriv(c, 0.0, 1);
      // Terms decay like n^-3, so the plain sum to 20000 is good to ~1e-9 of the scale.
      CHECK(std::abs(got.value - static_cast<double>(want)) < 1e-7 * std::max(1.0, std::abs(got.value)));
    }
  }

  TEST_CASE("derivatives match finite differences") {
    for (const auto& c : testing::random_cases(13, 30)) {
      const double z = 0.3, h = 1e-5;
      const double up = evaluate_expansion(c, z + h).value, dn = evaluate_expansion(c, z - h).value;
      const double mid = evaluate_expansion(c, z).value;
      const double d1 = evaluate_expansion_deriv(c, z, 1).value;
      const double d2 = evaluate_expansion_deriv(c, z, 2).value;
      const double scale = std::max({std::abs(mid), std::abs(d1), std::abs(d2), 1e-3});
      CHECK(std::abs(d1 - (up - dn) / (2 * h)) < 1e-6 * std::max(std::abs(d1), scale * 1e-2));
      const double h2 = 1e-4;
      const double fd2 = (evaluate_expansion(c, z + h2).value - 2 * mid + evaluate_expansion(c, z - h2).value) / (h2 * h2);
      CHECK(std::abs(d2 - fd2) < 1e-4 * std::max(std::abs(d2), scale * 1e-2));
    }
  }

  TEST_CASE("domain and singular-point guards") {
    const auto c = testing::anchor_case();
    CHECK_THROWS_AS((void)evaluate_expansion(c, 1.0), DomainError);
    CHECK_THROWS_AS((void)evaluate_expansion(c, 0.97), DomainError);
    ExpansionOptions wide;
    wide.z_guard = 0.99;
    CHECK_NOTHROW((void)evaluate_expansion(c, 0.97, wide));
    CHECK_THROWS_AS((void)ode_residual(c, 0.0), SingularPoint);
    CHECK_THROWS_AS((void)ode_residual(c, 5e-9), SingularPoint);
    CHECK_THROWS_AS((void)evaluate_expansion_deriv(c, 0.2, 3), PreconditionViolation);
  }

  TEST_CASE("non-terminating expansions satisfy L[u] = -K / (z(z-1)(z-a))") {
    // The truncation boundary term of the expansion tends to a constant because
    // c_n ~ K n^-2, so the summed series solves the equation with that constant
    // as a source term.
    for (const auto& c : testing::random_cases(14, 20)) {
      if (detect_truncation(c)) continue;
      const double K = decay_constant(c.ansatz());
      for (double z : {0.1, 0.25, 0.4}) {
        if (std::abs(z - c.params().a()) < 0.05) continue;
        const double lhs = scaled_operator(c.ansatz(), z);
        CHECK(std::abs(lhs + K) < 1e-7 * std::max(1.0, std::abs(K)));
      }
    }
    // u = 3/(1−z) and K = Γ(4)/(Γ(1)Γ(2)) = 6.
    CHECK(std::abs(scaled_operator(testing::anchor_case().ansatz(), 0.25) + 6.0) < 1e-10);
  }

  TEST_CASE("perturbed q raises the residual") {
    const auto c = testing::anchor_case();
    HeunParams p = c.params().raw();
    p.q += 0.01;
    const Ansatz broken{require_valid(p), {}};
    CHECK(std::abs(ode_residual(broken, 0.25) - ode_residual(c, 0.25)) > 1e-4);
  }

  TEST_CASE("detect_truncation") {
    CHECK_FALSE(detect_truncation(testing::anchor_case()).has_value());
    // N = 0, α = 1: γ+ε−β = α − 1 = 0, so only c_0 survives.
    PartialParams pp{0.5, 1.0, 2.3, 1.4, 2.0, 0.0};
    pp.epsilon = delta_from_fuchsian(pp.alpha, pp.beta, pp.gamma, pp.delta);
    const auto out = find_reductions(pp, 0, false);
    REQUIRE(out.cases.size() == 1);
    const auto n0 = detect_truncation(out.cases[0]);
    REQUIRE(n0.has_value());
    CHECK(*n0 == 1);
    CHECK(ode_residual_partial(out.cases[0].ansatz(), 0.3, *n0) < 1e-10);
  }

  TEST_CASE("rational cases: finite sum equals the adaptive sum") {
    // N = 2 and β = 2 give γ+ε−α = β−1−N = −1, so c_n = 0 for n >= 2.
    PartialParams pp{0.3, 1.45, 2.0, 0.6, 4.0, 0.0};
    pp.epsilon = delta_from_fuchsian(pp.alpha, pp.beta, pp.gamma, pp.delta);
    const auto out = find_reductions(pp, 2, false);
    REQUIRE_FALSE(out.cases.empty());
    for (const auto& c : out.cases) {
      const auto n0 = detect_truncation(c);
      REQUIRE(n0.has_value());
      CHECK(*n0 == 2);
      for (double z : {0.1, 0.25}) {
        const double finite = evaluate_partial_sum(c.ansatz(), z, 0, *n0);
        CHECK(testing::rel_diff(finite, evaluate_partial_sum(c.ansatz(), z, 0, 400)) < 1e-13);
        CHECK(ode_residual(c, z) < 1e-10);
      }
    }
  }

  TEST_CASE("outer terms decay") {
    const auto c = testing::anchor_case();
    const auto s = closed_form_coefficients(c.params(), c.e_list(), 60);
    const auto& p = c.params();
    for (std::size_t n = 21; n + 10 <= 60; ++n) {
      const double t0 = s.values[n] * gauss_2f1(p.alpha(), p.beta(), p.gamma() + p.epsilon() + n, 0.4).value;
      const double t1 = s.values[n + 10] * gauss_2f1(p.alpha(), p.beta(), p.gamma() + p.epsilon() + n + 10, 0.4).value;
      CHECK(std::abs(t1 / t0) < 1.0);
    }
  }
}
