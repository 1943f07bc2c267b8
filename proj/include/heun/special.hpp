#pragma once

#include <cstddef>

#include "heun/errors.hpp"

namespace heun {

/// Truncation rule for adaptive series: stop once `consecutive_small`
/// successive terms fall below rel_tol × |partial sum|.
struct SeriesControl {
  double rel_tol = 1e-14;
  std::size_t max_terms = 10000;
  std::size_t consecutive_small = 3;

  /// Throws PreconditionViolation when a field is out of range.
  void check() const;
};

enum class EvalStatus { Converged, MaxTermsReached };

[[nodiscard]] const char* to_string(EvalStatus s);

struct EvalResult {
  double value = 0.0;
  std::size_t terms_used = 0;
  /// Magnitude of the truncation error estimate (last term, or the
  /// extrapolation difference for algebraically convergent series).
  double tail_estimate = 0.0;
  EvalStatus status = EvalStatus::Converged;
};

/// Sums whose magnitude drops below this are treated as zero by the stopping rule.
inline constexpr double kAbsoluteFloor = 1e-280;

/// Rising factorial (x)_n = x(x+1)...(x+n−1); finite even where Γ(x) has a pole.
[[nodiscard]] double pochhammer(double x, unsigned n);

/// Gauss hypergeometric series ₂F₁(a, b; c; z) for |z| < 1.
/// Throws DomainError (|z| ≥ 1), PoleError (c a non-positive integer),
/// NonConvergence (max_terms exhausted).
[[nodiscard]] EvalResult gauss_2f1(double a, double b, double c, double z,
                                   const SeriesControl& ctl = {});

/// First or second z-derivative of ₂F₁ via
///   d/dz ₂F₁(a,b;c;z) = (ab/c) ₂F₁(a+1,b+1;c+1;z).
[[nodiscard]] double gauss_2f1_deriv(double a, double b, double c, double z, int order,
                                     const SeriesControl& ctl = {});

namespace detail {

/// Extended-precision series used by gauss_2f1 and by the expansion evaluator.
[[nodiscard]] long double hyp2f1_series(long double a, long double b, long double c, long double z,
                                        const SeriesControl& ctl, std::size_t* terms_used,
                                        long double* last_term);

/// order-th derivative in extended precision.
[[nodiscard]] long double hyp2f1_deriv_series(long double a, long double b, long double c,
                                              long double z, int order, const SeriesControl& ctl);

}  // namespace detail

}  // namespace heun
