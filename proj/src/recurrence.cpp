#include "heun/recurrence.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace heun {

namespace {

constexpr double kZeroDenominator = 1e-12;
// Forward recursion is accepted while the estimated error growth stays below this.
constexpr double kForwardGrowthLimit = 1e3;
constexpr std::size_t kMaxBackwardExtra = 100000;

void require_finite(long double v, const char* where, std::size_t n) {
  if (!std::isfinite(static_cast<double>(v))) {
    throw NumericalError(std::string(where) + ": non-finite coefficient at n = " +
                         std::to_string(n));
  }
}

long double R_ld(long double n, const ValidatedHeunParams& p) {
  return (1.0L - p.a()) * n * (static_cast<long double>(p.epsilon()) + p.gamma() + n - 1.0L);
}

long double Q_ld(long double n, const ValidatedHeunParams& p) {
  const long double a = p.a();
  return -R_ld(n, p) + a * (1.0L + n - p.delta()) * (n + p.epsilon()) +
         (a * p.alpha() * p.beta() - p.q());
}

long double P_ld(long double n, const ValidatedHeunParams& p) {
  const long double s = n + p.epsilon() + p.gamma();
  if (std::abs(s) < kZeroDenominator) {
    throw DivisionByZero("coeff_P: n + epsilon + gamma vanishes at n = " +
                         std::to_string(static_cast<double>(n)));
  }
  return -static_cast<long double>(p.a()) / s * (n + p.epsilon()) * (s - p.alpha()) *
         (s - p.beta());
}

// Sums of the absolute values of the pieces of Q_n and P_n. A row whose Q or P
// cancels to rounding level is measured against these instead.
long double Q_magnitude(long double n, const ValidatedHeunParams& p) {
  const long double a = p.a();
  return std::abs(R_ld(n, p)) + std::abs(a * (1.0L + n - p.delta()) * (n + p.epsilon())) +
         std::abs(a * p.alpha() * p.beta()) + std::abs(static_cast<long double>(p.q()));
}

long double P_magnitude(long double n, const ValidatedHeunParams& p) {
  const long double s = n + p.epsilon() + p.gamma();
  const long double s_abs = std::abs(n) + std::abs(p.epsilon()) + std::abs(p.gamma());
  return std::abs(p.a() / s * (n + p.epsilon())) * (s_abs + std::abs(p.alpha())) *
         (s_abs + std::abs(p.beta()));
}

CoefficientStream forward(const ValidatedHeunParams& p, std::size_t n_max) {
  std::vector<long double> c(n_max + 1, 0.0L);
  c[0] = 1.0L;
  for (std::size_t n = 1; n <= n_max; ++n) {
    const long double r = R_ld(n, p);
    if (std::abs(r) < kZeroDenominator) {
      throw DivisionByZero("three_term_coefficients: R_n vanishes at n = " + std::to_string(n));
    }
    long double acc = Q_ld(n - 1.0L, p) * c[n - 1];
    if (n >= 2) acc += P_ld(n - 2.0L, p) * c[n - 2];
    c[n] = -acc / r;
    require_finite(c[n], "three_term_coefficients", n);
  }
  return {std::vector<double>(c.begin(), c.end()), CoefficientSource::ThreeTerm, p, {}};
}

double growth_ratio(const ValidatedHeunParams& p) { return std::abs(p.a() / (p.a() - 1.0)); }

}  // namespace

double coeff_R(double n, const ValidatedHeunParams& p) { return static_cast<double>(R_ld(n, p)); }
double coeff_Q(double n, const ValidatedHeunParams& p) { return static_cast<double>(Q_ld(n, p)); }
double coeff_P(double n, const ValidatedHeunParams& p) { return static_cast<double>(P_ld(n, p)); }

const char* to_string(CoefficientSource s) {
  switch (s) {
    case CoefficientSource::ThreeTerm:
      return "three_term";
    case CoefficientSource::TwoTermRatio:
      return "two_term_ratio";
    case CoefficientSource::GammaClosedForm:
      return "gamma_closed_form";
  }
  return "unknown";
}

bool forward_recursion_stable(const ValidatedHeunParams& p, std::size_t n_max) {
  const double r = growth_ratio(p);
  if (r <= 1.0) return true;
  const double log_growth = n_max * std::log(r) + 2.0 * std::log(n_max + 1.0);
  return log_growth <= std::log(kForwardGrowthLimit);
}

CoefficientStream three_term_coefficients(const ValidatedHeunParams& p, std::size_t n_max) {
  if (forward_recursion_stable(p, n_max)) return forward(p, n_max);

  // Miller: c_{M+1} = 0, c_M = 1, recurse rows n = M+1..2 downward, normalize c_0.
  const double r = growth_ratio(p);
  const auto extra = static_cast<std::size_t>(
      std::min<double>(std::ceil(17.0 * std::log(10.0) / std::log(r)) + 10.0, kMaxBackwardExtra));
  const std::size_t top = n_max + extra;
  std::vector<long double> c(top + 2, 0.0L);
  c[top] = 1.0L;
  for (std::size_t n = top + 1; n >= 2; --n) {
    const long double pn = P_ld(n - 2.0L, p);
    if (pn == 0.0L) return forward(p, n_max);  // terminating P: minimal solution undefined here
    c[n - 2] = -(R_ld(n, p) * c[n] + Q_ld(n - 1.0L, p) * c[n - 1]) / pn;
    if (std::abs(c[n - 2]) > 1e200L) {
      for (std::size_t k = n - 2; k <= top; ++k) c[k] *= 1e-200L;
    }
  }
  if (c[0] == 0.0L) return forward(p, n_max);
  std::vector<double> out(n_max + 1);
  for (std::size_t n = 0; n <= n_max; ++n) {
    const long double v = c[n] / c[0];
    require_finite(v, "three_term_coefficients", n);
    out[n] = static_cast<double>(v);
  }
  out[0] = 1.0;
  return {std::move(out), CoefficientSource::ThreeTerm, p, {}};
}

namespace {

struct PochhammerBases {
  long double upper1, upper2, lower;  // γ+ε−α, γ+ε−β, γ+ε
};

PochhammerBases bases(const ValidatedHeunParams& p) {
  const long double ge = static_cast<long double>(p.gamma()) + p.epsilon();
  return {ge - p.alpha(), ge - p.beta(), ge};
}

void check_e_list(std::span<const double> e_list, const char* where) {
  for (double e : e_list) {
    if (is_nonpositive_integer(e)) {
      throw PoleError(std::string(where) + ": ansatz parameter e = " + std::to_string(e) +
                      " is zero or a negative integer");
    }
  }
}

long double lower_factor(const PochhammerBases& b, std::size_t j, const char* where) {
  const long double d = b.lower + j;
  if (std::abs(d) < kZeroDenominator) {
    throw PoleError(std::string(where) + ": gamma+epsilon+" + std::to_string(j) + " vanishes");
  }
  return d;
}

}  // namespace

CoefficientStream two_term_coefficients(const ValidatedHeunParams& p,
                                        std::span<const double> e_list, std::size_t n_max) {
  check_e_list(e_list, "two_term_coefficients");
  const auto b = bases(p);
  std::vector<double> out(n_max + 1);
  out[0] = 1.0;
  long double c = 1.0L;
  for (std::size_t n = 1; n <= n_max; ++n) {
    const long double m = n;
    long double ratio = (b.upper1 - 1.0L + m) * (b.upper2 - 1.0L + m) /
                        (lower_factor(b, n - 1, "two_term_coefficients") * m);
    for (double e : e_list) ratio *= (e + m) / (e - 1.0L + m);
    c *= ratio;
    require_finite(c, "two_term_coefficients", n);
    out[n] = static_cast<double>(c);
  }
  return {std::move(out), CoefficientSource::TwoTermRatio, p,
          std::vector<double>(e_list.begin(), e_list.end())};
}

std::optional<std::size_t> first_vanishing_index(const ValidatedHeunParams& p) {
  const double ge = p.gamma() + p.epsilon();
  std::optional<std::size_t> best;
  for (double x : {ge - p.alpha(), ge - p.beta()}) {
    if (!is_nonpositive_integer(x)) continue;
    // (x)_n first vanishes at n = 1 − x.
    const auto n0 = static_cast<std::size_t>(1.0 - std::round(x));
    if (!best || n0 < *best) best = n0;
  }
  return best;
}

CoefficientStream closed_form_coefficients(const ValidatedHeunParams& p,
                                           std::span<const double> e_list, std::size_t n_max) {
  check_e_list(e_list, "closed_form_coefficients");
  const auto b = bases(p);
  const auto n0 = first_vanishing_index(p);
  std::vector<double> out(n_max + 1, 0.0);
  long double poch = 1.0L;  // (A)_n (B)_n / ((C)_n n!)
  for (std::size_t n = 0; n <= n_max && (!n0 || n < *n0); ++n) {
    if (n > 0) {
      const std::size_t j = n - 1;
      poch *= (b.upper1 + j) * (b.upper2 + j) /
              (lower_factor(b, j, "closed_form_coefficients") * static_cast<long double>(n));
    }
    long double poly = 1.0L;
    for (double e : e_list) poly *= (e + static_cast<long double>(n)) / e;
    const long double c = poch * poly;
    require_finite(c, "closed_form_coefficients", n);
    out[n] = static_cast<double>(c);
  }
  return {std::move(out), CoefficientSource::GammaClosedForm, p,
          std::vector<double>(e_list.begin(), e_list.end())};
}

double closed_form_coefficient(const ValidatedHeunParams& p, std::span<const double> e_list,
                               std::size_t n) {
  check_e_list(e_list, "closed_form_coefficient");
  if (const auto n0 = first_vanishing_index(p); n0 && n >= *n0) return 0.0;
  const auto b = bases(p);
  long double poch = 1.0L;
  for (std::size_t j = 0; j < n; ++j) {
    poch *= (b.upper1 + j) * (b.upper2 + j) /
            (lower_factor(b, j, "closed_form_coefficient") * static_cast<long double>(j + 1));
  }
  long double poly = 1.0L;
  for (double e : e_list) poly *= (e + static_cast<long double>(n)) / e;
  return static_cast<double>(poch * poly);
}

std::vector<double> recurrence_row_residuals(const CoefficientStream& stream,
                                             const ValidatedHeunParams& p) {
  const auto& c = stream.values;
  std::vector<double> rows(c.size(), 0.0);
  for (std::size_t n = 1; n < c.size(); ++n) {
    const long double t_r = R_ld(n, p) * c[n];
    const long double t_q = Q_ld(n - 1.0L, p) * c[n - 1];
    const long double t_p = n >= 2 ? P_ld(n - 2.0L, p) * c[n - 2] : 0.0L;
    const long double scale_q = Q_magnitude(n - 1.0L, p) * std::abs(c[n - 1]);
    const long double scale_p = n >= 2 ? P_magnitude(n - 2.0L, p) * std::abs(c[n - 2]) : 0.0L;
    const long double denom = std::abs(t_r) + std::max(std::abs(t_q), scale_q) +
                              std::max(std::abs(t_p), scale_p) + kResidualTiny;
    rows[n] = static_cast<double>(std::abs(t_r + t_q + t_p) / denom);
  }
  return rows;
}

double recurrence_residual(const CoefficientStream& stream, const ValidatedHeunParams& p) {
  if (stream.values.size() < 3) {
    throw PreconditionViolation("recurrence_residual: stream needs at least 3 entries");
  }
  const auto rows = recurrence_row_residuals(stream, p);
  return *std::max_element(rows.begin(), rows.end());
}

}  // namespace heun
