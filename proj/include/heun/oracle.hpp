#pragma once

#include <cstddef>
#include <vector>

#include "heun/core.hpp"
#include "heun/evaluator.hpp"
#include "heun/special.hpp"

namespace heun {

/// Exponent-0 power-series solution Σ b_n z^n of the Heun equation about z = 0,
/// normalized to b_0 = 1.
struct FrobeniusSeries {
  std::vector<long double> coefficients;
  double radius_hint = 1.0;  ///< min(1, |a|): distance to the nearest other singular point
  HeunParams params;
};

/// The safe evaluation radius is this fraction of radius_hint.
inline constexpr double kOracleRadiusFraction = 0.9;

/// Coefficients b_0..b_{n_max}. The recurrence is not hard-coded: the equation
/// is multiplied by z(z−1)(z−a), its polynomial coefficients are expanded, and
/// the coefficient of each power of z is solved for the newest b.
/// Throws PoleError when γ is zero or a negative integer.
[[nodiscard]] FrobeniusSeries frobenius_coefficients(const ValidatedHeunParams& p,
                                                     std::size_t n_max);

/// Same for parameters the expansion would reject (α or β zero, say); only
/// γ and a ∉ {0, 1} matter here. Throws DomainError for a degenerate a.
[[nodiscard]] FrobeniusSeries frobenius_coefficients(const HeunParams& p, std::size_t n_max);

/// Coefficients of z^0..z^{count−1} in z(z−1)(z−a)·L[Σ_{n ≤ n_max} b_n z^n], each
/// divided by the sum of magnitudes of its contributions. Entries through
/// z^{n_max−1} vanish up to rounding.
[[nodiscard]] std::vector<double> frobenius_residual_coefficients(const FrobeniusSeries& s,
                                                                  std::size_t count);

/// Horner evaluation; tail_estimate is the largest of the last three terms.
/// Throws DomainError unless |z| < 0.9 · radius_hint.
[[nodiscard]] EvalResult frobenius_eval(const FrobeniusSeries& s, double z);

/// Truncation order giving terms below ~1e-18 at |z| for this series' radius.
[[nodiscard]] std::size_t frobenius_order_for(const ValidatedHeunParams& p, double z);

/// Largest |z| the oracle accepts for these parameters.
[[nodiscard]] double oracle_safe_radius(const ValidatedHeunParams& p);

struct CrossCheckReport {
  std::vector<double> z_points;
  std::vector<double> expansion_values;
  std::vector<double> oracle_values;  ///< Frobenius values scaled by u(0)
  std::vector<double> deviations;     ///< |u(z) − u(0)·f(z)| / |u(z)|
  double u0 = 0.0;
  double max_deviation = 0.0;
};

/// Compares the expansion with the Frobenius solution scaled to match at z = 0.
/// Every point must lie inside both evaluation domains.
[[nodiscard]] CrossCheckReport cross_check_report(const Ansatz& ansatz,
                                                  const std::vector<double>& z_points,
                                                  const ExpansionOptions& opts = {});

[[nodiscard]] double cross_check(const Ansatz& ansatz, const std::vector<double>& z_points,
                                 const ExpansionOptions& opts = {});
[[nodiscard]] double cross_check(const ReductionCase& rc, const std::vector<double>& z_points,
                                 const ExpansionOptions& opts = {});

}  // namespace heun
