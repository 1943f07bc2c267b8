#pragma once

#include <optional>
#include <span>
#include <vector>

#include "heun/core.hpp"

namespace heun {

// Coefficients of the three-term recurrence
//   R_n c_n + Q_{n−1} c_{n−1} + P_{n−2} c_{n−2} = 0
// obeyed by the expansion u = Σ c_n ₂F₁(α, β; γ+ε+n; z).
// They are polynomial (R, Q) or rational (P) in n, so real n is accepted.

/// R_n = (1−a) n (ε+γ+n−1).
[[nodiscard]] double coeff_R(double n, const ValidatedHeunParams& p);

/// Q_n = −R_n + a(1+n−δ)(n+ε) + (aαβ − q).
[[nodiscard]] double coeff_Q(double n, const ValidatedHeunParams& p);

/// P_n = −a (n+ε)(n+ε+γ−α)(n+ε+γ−β) / (n+ε+γ). Throws DivisionByZero when n+ε+γ ≈ 0.
[[nodiscard]] double coeff_P(double n, const ValidatedHeunParams& p);

enum class CoefficientSource { ThreeTerm, TwoTermRatio, GammaClosedForm };

[[nodiscard]] const char* to_string(CoefficientSource s);

/// Expansion coefficients c_0..c_nmax, normalized to c_0 = 1.
struct CoefficientStream {
  std::vector<double> values;
  CoefficientSource source;
  ValidatedHeunParams params;
  std::vector<double> e_list;  // empty for ThreeTerm
};

/// Solves the three-term recurrence with c_0 = 1, c_1 = −Q_0/R_1.
///
/// The solution that decays like n^{−2} is dominant for a < 1/2 and minimal
/// for a > 1/2 (the competing solution grows like (a/(a−1))^n). Forward
/// recursion is used when it is well conditioned over [0, n_max]; otherwise
/// the minimal solution of rows n ≥ 2 is obtained by backward (Miller)
/// recursion from a start index far enough beyond n_max, and row n = 1 is
/// left to recurrence_residual.
[[nodiscard]] CoefficientStream three_term_coefficients(const ValidatedHeunParams& p,
                                                        std::size_t n_max);

/// True when three_term_coefficients(p, n_max) would recurse forward.
[[nodiscard]] bool forward_recursion_stable(const ValidatedHeunParams& p, std::size_t n_max);

/// Iterates the two-term ratio
///   c_n / c_{n−1} = (γ+ε−α−1+n)(γ+ε−β−1+n) / ((γ+ε−1+n) n) · Π_k (e_k+n)/(e_k−1+n).
/// Throws PoleError on a zero denominator (e_k or γ+ε a non-positive integer).
[[nodiscard]] CoefficientStream two_term_coefficients(const ValidatedHeunParams& p,
                                                      std::span<const double> e_list,
                                                      std::size_t n_max);

/// Gamma-ratio closed form
///   c_n = (γ+ε−α)_n (γ+ε−β)_n / ((γ+ε)_n n!) · Π_k (e_k+n)/e_k
/// with the Pochhammer ratio accumulated as a product (no Γ quotients).
[[nodiscard]] CoefficientStream closed_form_coefficients(const ValidatedHeunParams& p,
                                                         std::span<const double> e_list,
                                                         std::size_t n_max);

/// Smallest n with (γ+ε−α)_n or (γ+ε−β)_n zero, when either base is a
/// non-positive integer (to kIntegerProximity). The closed form returns exact
/// zeros from there on.
[[nodiscard]] std::optional<std::size_t> first_vanishing_index(const ValidatedHeunParams& p);

/// Single closed-form coefficient, recomputed from scratch.
[[nodiscard]] double closed_form_coefficient(const ValidatedHeunParams& p,
                                             std::span<const double> e_list, std::size_t n);

/// Guard added to residual denominators for rows where every term vanishes.
inline constexpr double kResidualTiny = 1e-300;

/// Relative residual of each recurrence row n = 1..size−1 (row 0 is trivially 0):
///   |R_n c_n + Q_{n−1} c_{n−1} + P_{n−2} c_{n−2}| / (|R_n c_n| + |Q_{n−1} c_{n−1}| + |P_{n−2} c_{n−2}| + tiny)
/// with c_{−1} = 0. The Q and P summands in the denominator are at least the
/// absolute sums of their constituent terms, so rows that vanish only up to
/// rounding inside Q or P read as small.
[[nodiscard]] std::vector<double> recurrence_row_residuals(const CoefficientStream& stream,
                                                           const ValidatedHeunParams& p);

/// Maximum of recurrence_row_residuals. Requires at least 3 entries.
[[nodiscard]] double recurrence_residual(const CoefficientStream& stream,
                                         const ValidatedHeunParams& p);

}  // namespace heun
