#include "heun/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "heun/recurrence.hpp"

namespace heun {

namespace {

constexpr std::size_t kFirstCheckpoint = 16;
constexpr std::size_t kMinExtrapolationLevels = 3;

void check_z(double z, const ExpansionOptions& opts) {
  if (!std::isfinite(z) || !(std::abs(z) < 1.0)) {
    throw DomainError("expansion: |z| must be < 1, got z = " + std::to_string(z));
  }
  if (std::abs(z) > opts.z_guard) {
    throw DomainError("expansion: |z| = " + std::to_string(std::abs(z)) +
                      " exceeds the evaluation guard " + std::to_string(opts.z_guard));
  }
}

/// Generates c_n from (γ+ε−α)_n (γ+ε−β)_n / ((γ+ε)_n n!) · Π (e_k+n)/e_k.
class CoefficientGenerator {
 public:
  explicit CoefficientGenerator(const Ansatz& a)
      : e_(a.e_list),
        A_(static_cast<long double>(a.params.gamma()) + a.params.epsilon() - a.params.alpha()),
        B_(static_cast<long double>(a.params.gamma()) + a.params.epsilon() - a.params.beta()),
        C_(static_cast<long double>(a.params.gamma()) + a.params.epsilon()) {
    for (double e : e_) {
      if (is_nonpositive_integer(e)) {
        throw PoleError("expansion: e = " + std::to_string(e) + " is zero or a negative integer");
      }
    }
  }

  /// c_n for n = 0, 1, 2, ... on successive calls.
  long double next() {
    if (n_ > 0) {
      const long double m = static_cast<long double>(n_) - 1.0L;
      poch_ *= (A_ + m) * (B_ + m) / ((C_ + m) * (m + 1.0L));
    }
    long double poly = 1.0L;
    for (double e : e_) poly *= (e + static_cast<long double>(n_)) / e;
    ++n_;
    return poch_ * poly;
  }

 private:
  std::vector<double> e_;
  long double A_, B_, C_;
  long double poch_ = 1.0L;
  std::size_t n_ = 0;
};

/// Each ₂F₁ gets a tenth of the outer tolerance and its own term budget.
SeriesControl inner_control(const SeriesControl& outer) {
  SeriesControl inner;
  inner.rel_tol = outer.rel_tol / 10.0;
  inner.consecutive_small = outer.consecutive_small;
  return inner;
}

long double term_function(const Ansatz& a, std::size_t n, long double z, int order,
                          const SeriesControl& inner) {
  const long double c = static_cast<long double>(a.params.gamma()) + a.params.epsilon() + n;
  return detail::hyp2f1_deriv_series(a.params.alpha(), a.params.beta(), c, z, order, inner);
}

long double finite_sum(const Ansatz& a, long double z, int order, std::size_t terms,
                       const SeriesControl& inner) {
  CoefficientGenerator gen(a);
  long double s = 0.0L;
  for (std::size_t n = 0; n < terms; ++n) {
    const long double c = gen.next();
    if (c != 0.0L) s += c * term_function(a, n, z, order, inner);
  }
  return s;
}

EvalResult sum_expansion(const Ansatz& a, double z, int order, const ExpansionOptions& opts) {
  opts.control.check();
  check_z(z, opts);
  const SeriesControl inner = inner_control(opts.control);

  if (const auto n0 = detect_truncation(a)) {
    EvalResult r;
    r.value = static_cast<double>(finite_sum(a, z, order, *n0, inner));
    r.terms_used = *n0;
    r.tail_estimate = 0.0;
    r.status = EvalStatus::Converged;
    return r;
  }

  // Partial sums S_M − S behave like Σ_j a_j M^{−(p+j)} with p the tail exponent.
  const double p = a.params.delta() - static_cast<double>(a.order()) - 1.0 + order;
  std::vector<std::size_t> checkpoints;
  for (std::size_t m = kFirstCheckpoint; m <= opts.control.max_terms; m *= 2) {
    checkpoints.push_back(m);
  }

  CoefficientGenerator gen(a);
  long double s = 0.0L;
  long double last = 0.0L;
  std::size_t n = 0;
  if (checkpoints.empty()) {
    for (; n < opts.control.max_terms; ++n) {
      const long double c = gen.next();
      if (c != 0.0L) s += (last = c * term_function(a, n, z, order, inner));
    }
    return {static_cast<double>(s), n, static_cast<double>(std::abs(last)),
            EvalStatus::MaxTermsReached};
  }
  std::vector<long double> prev_row;
  long double best_value = 0.0L;
  long double best_error = std::numeric_limits<long double>::infinity();
  std::size_t best_terms = 0;

  for (std::size_t level = 0; level < checkpoints.size(); ++level) {
    for (; n < checkpoints[level]; ++n) {
      const long double c = gen.next();
      if (c != 0.0L) s += (last = c * term_function(a, n, z, order, inner));
    }
    if (!std::isfinite(static_cast<double>(s))) {
      throw NumericalError("expansion: non-finite partial sum at n = " + std::to_string(n));
    }
    std::vector<long double> row{s};
    for (std::size_t j = 1; j <= level; ++j) {
      const long double f = std::pow(2.0L, static_cast<long double>(p + j - 1));
      row.push_back((f * row[j - 1] - prev_row[j - 1]) / (f - 1.0L));
    }
    if (level + 1 >= kMinExtrapolationLevels) {
      const long double est = row[level];
      const long double err = std::abs(row[level] - prev_row[level - 1]);
      if (err < best_error) {
        best_error = err;
        best_value = est;
        best_terms = n;
      }
      const bool small = err <= opts.control.rel_tol * std::abs(est) ||
                         (std::abs(est) < kAbsoluteFloor && err < kAbsoluteFloor);
      if (small) {
        return {static_cast<double>(est), n, static_cast<double>(err), EvalStatus::Converged};
      }
    }
    prev_row = std::move(row);
  }

  EvalResult r;
  if (best_terms == 0) {
    r.value = static_cast<double>(s);
    r.terms_used = n;
    r.tail_estimate = static_cast<double>(std::abs(last));
  } else {
    r.value = static_cast<double>(best_value);
    r.terms_used = best_terms;
    r.tail_estimate = static_cast<double>(best_error);
  }
  r.status = EvalStatus::MaxTermsReached;
  return r;
}

void check_not_singular(const ValidatedHeunParams& p, double z) {
  for (double s : {0.0, 1.0, p.a()}) {
    if (std::abs(z - s) < kSingularProximity) {
      throw SingularPoint("ode residual: z = " + std::to_string(z) +
                          " is at the singular point " + std::to_string(s));
    }
  }
}

double residual_from(const ValidatedHeunParams& p, double z, double u, double du, double d2u) {
  const double coef1 = p.gamma() / z + p.delta() / (z - 1.0) + p.epsilon() / (z - p.a());
  const double coef0 = (p.alpha() * p.beta() * z - p.q()) / (z * (z - 1.0) * (z - p.a()));
  const double t2 = d2u, t1 = coef1 * du, t0 = coef0 * u;
  return std::abs(t2 + t1 + t0) / (std::abs(t2) + std::abs(t1) + std::abs(t0) + kResidualTiny);
}

}  // namespace

EvalResult evaluate_expansion(const Ansatz& ansatz, double z, const ExpansionOptions& opts) {
  return sum_expansion(ansatz, z, 0, opts);
}

EvalResult evaluate_expansion(const ReductionCase& rc, double z, const ExpansionOptions& opts) {
  return sum_expansion(rc.ansatz(), z, 0, opts);
}

EvalResult evaluate_expansion_deriv(const Ansatz& ansatz, double z, int order,
                                    const ExpansionOptions& opts) {
  if (order != 1 && order != 2) {
    throw PreconditionViolation("evaluate_expansion_deriv: order must be 1 or 2");
  }
  return sum_expansion(ansatz, z, order, opts);
}

EvalResult evaluate_expansion_deriv(const ReductionCase& rc, double z, int order,
                                    const ExpansionOptions& opts) {
  return evaluate_expansion_deriv(rc.ansatz(), z, order, opts);
}

double evaluate_partial_sum(const Ansatz& ansatz, double z, int order, std::size_t term_limit,
                            const ExpansionOptions& opts) {
  if (order < 0 || order > 2) {
    throw PreconditionViolation("evaluate_partial_sum: order must be 0, 1 or 2");
  }
  opts.control.check();
  check_z(z, opts);
  return static_cast<double>(
      finite_sum(ansatz, z, order, term_limit, inner_control(opts.control)));
}

OdeEvaluation ode_evaluate(const Ansatz& ansatz, double z, const ExpansionOptions& opts) {
  check_not_singular(ansatz.params, z);
  OdeEvaluation out;
  out.u = sum_expansion(ansatz, z, 0, opts);
  out.du = sum_expansion(ansatz, z, 1, opts);
  out.d2u = sum_expansion(ansatz, z, 2, opts);
  out.residual = residual_from(ansatz.params, z, out.u.value, out.du.value, out.d2u.value);
  return out;
}

OdeEvaluation ode_evaluate(const ReductionCase& rc, double z, const ExpansionOptions& opts) {
  return ode_evaluate(rc.ansatz(), z, opts);
}

double ode_residual(const Ansatz& ansatz, double z, const ExpansionOptions& opts) {
  return ode_evaluate(ansatz, z, opts).residual;
}

double ode_residual(const ReductionCase& rc, double z, const ExpansionOptions& opts) {
  return ode_evaluate(rc.ansatz(), z, opts).residual;
}

double ode_residual_partial(const Ansatz& ansatz, double z, std::size_t term_limit,
                            const ExpansionOptions& opts) {
  check_not_singular(ansatz.params, z);
  const double u = evaluate_partial_sum(ansatz, z, 0, term_limit, opts);
  const double du = evaluate_partial_sum(ansatz, z, 1, term_limit, opts);
  const double d2u = evaluate_partial_sum(ansatz, z, 2, term_limit, opts);
  return residual_from(ansatz.params, z, u, du, d2u);
}

std::optional<std::size_t> detect_truncation(const Ansatz& ansatz) {
  const auto n0 = first_vanishing_index(ansatz.params);
  if (n0 && *n0 <= kTruncationSearchLimit) return n0;
  return std::nullopt;
}

std::optional<std::size_t> detect_truncation(const ReductionCase& rc) {
  return detect_truncation(rc.ansatz());
}

}  // namespace heun
