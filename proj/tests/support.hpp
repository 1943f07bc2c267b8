#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "heun/core.hpp"
#include "heun/recurrence.hpp"
#include "heun/reduction.hpp"

namespace testing {

/// a = 2, α = 3, β = 2, γ = 1, δ = 2, ε = 3 (q = 4 for the N = 0 reduction).
inline heun::PartialParams anchor_partial() { return {2.0, 3.0, 2.0, 1.0, 2.0, 3.0}; }

inline heun::ValidatedHeunParams anchor_params() {
  return heun::require_valid({2.0, 4.0, 3.0, 2.0, 1.0, 2.0, 3.0});
}

inline heun::ReductionCase anchor_case() {
  auto c = heun::ReductionCase::create({anchor_params(), {}}, 0);
  return *c;
}

/// α, β, γ, a uniform in [−3, 3]; δ = N + 2; ε from the Fuchsian relation.
/// Returns false when the draw is not a valid parameter set.
inline bool draw_partial(std::mt19937_64& rng, int N, heun::PartialParams& out) {
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  out.a = u(rng);
  out.alpha = u(rng);
  out.beta = u(rng);
  out.gamma = u(rng);
  out.delta = heun::delta_for_reduction(N);
  out.epsilon = heun::delta_from_fuchsian(out.alpha, out.beta, out.gamma, out.delta);
  return std::holds_alternative<heun::ValidatedHeunParams>(
      heun::validate_params(out.with_q(0.0)));
}

/// Accepted closed-form reductions with N cycling through {0, 1, 2}.
inline std::vector<heun::ReductionCase> random_cases(std::uint64_t seed, std::size_t count) {
  std::mt19937_64 rng(seed);
  std::vector<heun::ReductionCase> out;
  for (int draw = 0; out.size() < count && draw < 100 * static_cast<int>(count); ++draw) {
    const int N = draw % 3;
    heun::PartialParams pp;
    if (!draw_partial(rng, N, pp)) continue;
    try {
      auto found = heun::find_reductions(pp, N, false);
      for (auto& c : found.cases) {
        if (out.size() < count) out.push_back(std::move(c));
      }
    } catch (const heun::Error&) {
    }
  }
  return out;
}

/// Relative difference with an absolute floor of 1.
inline double rel_diff(double x, double y) {
  return std::abs(x - y) / std::max({1e-300, std::abs(x), std::abs(y)});
}

/// Largest relative change of c_0..c_{n_max} caused by moving q a few ulps,
/// for the stream defined by forward recursion from c_0 = 1. The derivative
/// c' = dc/dq obeys the same recurrence driven by c_{n−1}, since dQ/dq = −1.
/// Relative to the closed form, which does not depend on q directly.
inline double q_rounding_bound(const heun::ReductionCase& c, std::size_t n_max) {
  const auto& p = c.params();
  const auto g = heun::closed_form_coefficients(p, c.e_list(), n_max).values;
  std::vector<double> v(n_max + 1, 0.0), dv(n_max + 1, 0.0);
  v[0] = 1.0;
  const double dq = 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(p.q()));
  double worst = 0.0;
  for (std::size_t n = 1; n <= n_max; ++n) {
    const double k = static_cast<double>(n);
    double acc = heun::coeff_Q(k - 1.0, p) * v[n - 1];
    double dacc = heun::coeff_Q(k - 1.0, p) * dv[n - 1] - v[n - 1];
    if (n >= 2) {
      acc += heun::coeff_P(k - 2.0, p) * v[n - 2];
      dacc += heun::coeff_P(k - 2.0, p) * dv[n - 2];
    }
    const double r = heun::coeff_R(k, p);
    v[n] = -acc / r;
    dv[n] = -dacc / r;
    if (!std::isfinite(dv[n])) return std::numeric_limits<double>::infinity();
    worst = std::max(worst, std::abs(dv[n]) * dq / std::max(1e-300, std::abs(g[n])));
  }
  return worst;
}

}  // namespace testing
