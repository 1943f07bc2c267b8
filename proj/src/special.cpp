#include "heun/special.hpp"

#include <cmath>
#include <string>

#include "heun/core.hpp"

namespace heun {

void SeriesControl::check() const {
  if (!(rel_tol > 0.0)) throw PreconditionViolation("SeriesControl: rel_tol must be positive");
  if (max_terms < 1) throw PreconditionViolation("SeriesControl: max_terms must be >= 1");
  if (consecutive_small < 1) {
    throw PreconditionViolation("SeriesControl: consecutive_small must be >= 1");
  }
}

const char* to_string(EvalStatus s) {
  switch (s) {
    case EvalStatus::Converged:
      return "converged";
    case EvalStatus::MaxTermsReached:
      return "max_terms_reached";
  }
  return "unknown";
}

double pochhammer(double x, unsigned n) {
  long double p = 1.0L;
  for (unsigned k = 0; k < n; ++k) p *= static_cast<long double>(x) + k;
  return static_cast<double>(p);
}

namespace detail {

long double hyp2f1_series(long double a, long double b, long double c, long double z,
                          const SeriesControl& ctl, std::size_t* terms_used,
                          long double* last_term) {
  ctl.check();
  if (!(std::abs(z) < 1.0L)) {
    throw DomainError("gauss_2f1: |z| must be < 1, got z = " + std::to_string(double(z)));
  }
  if (is_nonpositive_integer(static_cast<double>(c))) {
    throw PoleError("gauss_2f1: c = " + std::to_string(double(c)) +
                    " is zero or a negative integer");
  }

  long double sum = 1.0L;
  long double term = 1.0L;
  std::size_t small = 0;
  const long double tol = ctl.rel_tol;
  for (std::size_t n = 0; n < ctl.max_terms; ++n) {
    term *= (a + n) * (b + n) / ((c + n) * (n + 1)) * z;
    sum += term;
    const long double mag = std::abs(sum);
    const bool is_small = std::abs(term) <= tol * mag ||
                          (mag < kAbsoluteFloor && std::abs(term) < kAbsoluteFloor);
    small = is_small ? small + 1 : 0;
    if (small >= ctl.consecutive_small) {
      if (terms_used) *terms_used = n + 2;
      if (last_term) *last_term = std::abs(term);
      return sum;
    }
    if (!std::isfinite(static_cast<double>(sum))) {
      throw NumericalError("gauss_2f1: non-finite partial sum");
    }
  }
  throw NonConvergence("gauss_2f1: no convergence within " + std::to_string(ctl.max_terms) +
                       " terms");
}

long double hyp2f1_deriv_series(long double a, long double b, long double c, long double z,
                                int order, const SeriesControl& ctl) {
  if (order < 0 || order > 2) throw PreconditionViolation("derivative order must be 0, 1 or 2");
  if (is_nonpositive_integer(static_cast<double>(c))) {
    throw PoleError("gauss_2f1: c = " + std::to_string(double(c)) +
                    " is zero or a negative integer");
  }
  long double factor = 1.0L;
  for (int k = 0; k < order; ++k) factor *= (a + k) * (b + k) / (c + k);
  if (factor == 0.0L) {
    if (!(std::abs(z) < 1.0L)) throw DomainError("gauss_2f1: |z| must be < 1");
    return 0.0L;
  }
  return factor * hyp2f1_series(a + order, b + order, c + order, z, ctl, nullptr, nullptr);
}

}  // namespace detail

EvalResult gauss_2f1(double a, double b, double c, double z, const SeriesControl& ctl) {
  std::size_t used = 0;
  long double last = 0.0L;
  const long double v = detail::hyp2f1_series(a, b, c, z, ctl, &used, &last);
  return {static_cast<double>(v), used, static_cast<double>(last), EvalStatus::Converged};
}

double gauss_2f1_deriv(double a, double b, double c, double z, int order,
                       const SeriesControl& ctl) {
  if (order != 1 && order != 2) throw PreconditionViolation("gauss_2f1_deriv: order must be 1 or 2");
  return static_cast<double>(detail::hyp2f1_deriv_series(a, b, c, z, order, ctl));
}

}  // namespace heun
