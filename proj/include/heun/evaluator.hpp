#pragma once

#include <cstddef>
#include <optional>

#include "heun/reduction.hpp"
#include "heun/special.hpp"

namespace heun {

/// Default bound on |z| for evaluating the expansion.
inline constexpr double kDefaultZGuard = 0.95;

/// Distance below which z counts as sitting on a singular point.
inline constexpr double kSingularProximity = 1e-8;

struct ExpansionOptions {
  SeriesControl control{};
  double z_guard = kDefaultZGuard;
};

/// u(z) = Σ c_n ₂F₁(α, β; γ+ε+n; z) with c_n from the gamma closed form.
///
/// A terminating coefficient stream is summed exactly. Otherwise the terms
/// decay algebraically (c_n ~ n^{N−δ}), so partial sums are taken at
/// n = 16, 32, 64, ... and extrapolated in 1/n (Richardson); tail_estimate is
/// the difference of the last two diagonal entries and terms_used the number
/// of terms behind the returned estimate.
[[nodiscard]] EvalResult evaluate_expansion(const Ansatz& ansatz, double z,
                                            const ExpansionOptions& opts = {});
[[nodiscard]] EvalResult evaluate_expansion(const ReductionCase& rc, double z,
                                            const ExpansionOptions& opts = {});

/// Term-wise first or second derivative of the expansion.
[[nodiscard]] EvalResult evaluate_expansion_deriv(const Ansatz& ansatz, double z, int order,
                                                  const ExpansionOptions& opts = {});
[[nodiscard]] EvalResult evaluate_expansion_deriv(const ReductionCase& rc, double z, int order,
                                                  const ExpansionOptions& opts = {});

/// Σ_{n < term_limit} c_n d^order/dz^order ₂F₁(α, β; γ+ε+n; z), no extrapolation.
[[nodiscard]] double evaluate_partial_sum(const Ansatz& ansatz, double z, int order,
                                          std::size_t term_limit,
                                          const ExpansionOptions& opts = {});

struct OdeEvaluation {
  EvalResult u, du, d2u;
  double residual = 0.0;
};

/// Evaluates u, u', u'' and the scale-free residual of the Heun equation
///   |u'' + (γ/z + δ/(z−1) + ε/(z−a)) u' + (αβz − q) u / (z(z−1)(z−a))|
///   / (|u''| + |(...) u'| + |(...) u| + tiny).
/// Throws SingularPoint when z is within 1e-8 of 0, 1 or a.
[[nodiscard]] OdeEvaluation ode_evaluate(const Ansatz& ansatz, double z,
                                         const ExpansionOptions& opts = {});
[[nodiscard]] OdeEvaluation ode_evaluate(const ReductionCase& rc, double z,
                                         const ExpansionOptions& opts = {});

[[nodiscard]] double ode_residual(const Ansatz& ansatz, double z, const ExpansionOptions& opts = {});
[[nodiscard]] double ode_residual(const ReductionCase& rc, double z,
                                  const ExpansionOptions& opts = {});

/// Residual of the finite sum over n < term_limit, for terminating streams.
[[nodiscard]] double ode_residual_partial(const Ansatz& ansatz, double z, std::size_t term_limit,
                                          const ExpansionOptions& opts = {});

/// Largest n₀ examined by detect_truncation.
inline constexpr std::size_t kTruncationSearchLimit = 500;

/// Smallest n₀ ≤ 500 with c_{n₀} = 0 because a Pochhammer factor
/// (γ+ε−α)_n or (γ+ε−β)_n hits zero; the expansion is then a finite sum.
[[nodiscard]] std::optional<std::size_t> detect_truncation(const Ansatz& ansatz);
[[nodiscard]] std::optional<std::size_t> detect_truncation(const ReductionCase& rc);

}  // namespace heun
