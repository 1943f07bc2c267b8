#include "heun/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace heun {

namespace {

using Poly = std::vector<long double>;  // ascending powers of z

Poly mul(const Poly& x, const Poly& y) {
  Poly r(x.size() + y.size() - 1, 0.0L);
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < y.size(); ++j) r[i + j] += x[i] * y[j];
  return r;
}

Poly add(const Poly& x, const Poly& y) {
  Poly r(std::max(x.size(), y.size()), 0.0L);
  for (std::size_t i = 0; i < x.size(); ++i) r[i] += x[i];
  for (std::size_t i = 0; i < y.size(); ++i) r[i] += y[i];
  return r;
}

Poly scale(long double s, const Poly& x) {
  Poly r = x;
  for (auto& v : r) v *= s;
  return r;
}

/// Polynomial coefficients of z(z−1)(z−a) u'' + P1 u' + P0 u = 0.
struct OdePolys {
  Poly p2, p1, p0;
};

OdePolys ode_polys(const HeunParams& p) {
  const Poly z{0.0L, 1.0L};
  const Poly zm1{-1.0L, 1.0L};
  const Poly zma{-static_cast<long double>(p.a), 1.0L};
  OdePolys o;
  o.p2 = mul(mul(z, zm1), zma);
  o.p1 = add(add(scale(p.gamma, mul(zm1, zma)), scale(p.delta, mul(z, zma))),
             scale(p.epsilon, mul(z, zm1)));
  o.p0 = {-static_cast<long double>(p.q), static_cast<long double>(p.alpha) * p.beta};
  return o;
}

long double at(const std::vector<long double>& b, long long j) {
  return (j >= 0 && static_cast<std::size_t>(j) < b.size()) ? b[static_cast<std::size_t>(j)]
                                                             : 0.0L;
}

/// Contributions to the z^m coefficient of p2 u'' + p1 u' + p0 u, split into the
/// part multiplying b_{m+1} (returned as `lead`) and everything else.
struct PowerCoefficient {
  long double lead = 0.0L;
  long double rest = 0.0L;
  long double magnitude = 0.0L;
};

PowerCoefficient power_coefficient(const OdePolys& o, const std::vector<long double>& b,
                                   long long m, bool split_newest) {
  PowerCoefficient pc;
  auto accumulate = [&](long long j, long double weight) {
    if (weight == 0.0L || j < 0) return;
    if (split_newest && j == m + 1) {
      pc.lead += weight;
      return;
    }
    const long double v = weight * at(b, j);
    pc.rest += v;
    pc.magnitude += std::abs(v);
  };
  for (std::size_t k = 0; k < o.p2.size(); ++k) {
    const long long j = m - static_cast<long long>(k) + 2;
    accumulate(j, o.p2[k] * static_cast<long double>(j) * static_cast<long double>(j - 1));
  }
  for (std::size_t k = 0; k < o.p1.size(); ++k) {
    const long long j = m - static_cast<long long>(k) + 1;
    accumulate(j, o.p1[k] * static_cast<long double>(j));
  }
  for (std::size_t k = 0; k < o.p0.size(); ++k) {
    accumulate(m - static_cast<long long>(k), o.p0[k]);
  }
  return pc;
}

}  // namespace

FrobeniusSeries frobenius_coefficients(const ValidatedHeunParams& p, std::size_t n_max) {
  return frobenius_coefficients(p.raw(), n_max);
}

FrobeniusSeries frobenius_coefficients(const HeunParams& p, std::size_t n_max) {
  if (!std::isfinite(p.a) || std::abs(p.a) < kIntegerProximity ||
      std::abs(p.a - 1.0) < kIntegerProximity) {
    throw DomainError("frobenius_coefficients: a must differ from 0 and 1");
  }
  if (is_nonpositive_integer(p.gamma)) {
    throw PoleError("frobenius_coefficients: gamma = " + std::to_string(p.gamma) +
                    " is zero or a negative integer");
  }
  const OdePolys o = ode_polys(p);
  std::vector<long double> b{1.0L};
  b.reserve(n_max + 1);
  for (std::size_t m = 0; m < n_max; ++m) {
    const auto pc = power_coefficient(o, b, static_cast<long long>(m), true);
    if (pc.lead == 0.0L) {
      throw PoleError("frobenius_coefficients: vanishing leading coefficient at order " +
                      std::to_string(m + 1));
    }
    b.push_back(-pc.rest / pc.lead);
  }
  return {std::move(b), std::min(1.0, std::abs(p.a)), p};
}

std::vector<double> frobenius_residual_coefficients(const FrobeniusSeries& s, std::size_t count) {
  const OdePolys o = ode_polys(s.params);
  std::vector<double> out;
  for (std::size_t m = 0; m < count; ++m) {
    const auto pc = power_coefficient(o, s.coefficients, static_cast<long long>(m), false);
    out.push_back(static_cast<double>(std::abs(pc.rest) / (pc.magnitude + 1e-300L)));
  }
  return out;
}

double oracle_safe_radius(const ValidatedHeunParams& p) {
  return kOracleRadiusFraction * std::min(1.0, std::abs(p.a()));
}

EvalResult frobenius_eval(const FrobeniusSeries& s, double z) {
  const double limit = kOracleRadiusFraction * s.radius_hint;
  if (!(std::abs(z) < limit)) {
    throw DomainError("frobenius_eval: |z| must be < " + std::to_string(limit) + ", got " +
                      std::to_string(z));
  }
  const auto& b = s.coefficients;
  long double v = 0.0L;
  for (std::size_t i = b.size(); i-- > 0;) v = v * z + b[i];
  long double tail = 0.0L;
  for (std::size_t i = b.size() >= 3 ? b.size() - 3 : 0; i < b.size(); ++i) {
    tail = std::max(tail, std::abs(b[i] * std::pow(static_cast<long double>(z),
                                                   static_cast<long double>(i))));
  }
  EvalResult r;
  r.value = static_cast<double>(v);
  r.terms_used = b.size();
  r.tail_estimate = static_cast<double>(tail);
  r.status = (tail <= 1e-14L * std::abs(v) || std::abs(v) < kAbsoluteFloor)
                 ? EvalStatus::Converged
                 : EvalStatus::MaxTermsReached;
  return r;
}

std::size_t frobenius_order_for(const ValidatedHeunParams& p, double z) {
  const double ratio = std::abs(z) / std::min(1.0, std::abs(p.a()));
  if (ratio <= 0.0) return 8;
  const double n = std::log(1e-18) / std::log(std::min(ratio, 0.999));
  return std::min<std::size_t>(static_cast<std::size_t>(std::ceil(n)) + 40, 20000);
}

CrossCheckReport cross_check_report(const Ansatz& ansatz, const std::vector<double>& z_points,
                                    const ExpansionOptions& opts) {
  CrossCheckReport r;
  r.z_points = z_points;
  r.u0 = evaluate_expansion(ansatz, 0.0, opts).value;
  if (r.u0 == 0.0) throw PreconditionViolation("cross_check: expansion vanishes at z = 0");
  double zmax = 0.0;
  for (double z : z_points) zmax = std::max(zmax, std::abs(z));
  const auto series = frobenius_coefficients(ansatz.params, frobenius_order_for(ansatz.params, zmax));
  for (double z : z_points) {
    const double u = evaluate_expansion(ansatz, z, opts).value;
    const double f = r.u0 * frobenius_eval(series, z).value;
    const double dev = std::abs(u - f) / std::max(std::abs(u), kAbsoluteFloor);
    r.expansion_values.push_back(u);
    r.oracle_values.push_back(f);
    r.deviations.push_back(dev);
    r.max_deviation = std::max(r.max_deviation, dev);
  }
  return r;
}

double cross_check(const Ansatz& ansatz, const std::vector<double>& z_points,
                   const ExpansionOptions& opts) {
  return cross_check_report(ansatz, z_points, opts).max_deviation;
}

double cross_check(const ReductionCase& rc, const std::vector<double>& z_points,
                   const ExpansionOptions& opts) {
  return cross_check_report(rc.ansatz(), z_points, opts).max_deviation;
}

}  // namespace heun
