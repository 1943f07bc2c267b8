#include "heun/poly.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <unsupported/Eigen/Polynomials>

namespace heun::poly {

double eval(std::span<const double> c, double x) {
  long double acc = 0.0L;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
  return static_cast<double>(acc);
}

double eval_deriv(std::span<const double> c, double x) {
  long double acc = 0.0L;
  for (std::size_t k = c.size(); k-- > 1;) acc = acc * x + static_cast<long double>(k) * c[k];
  return static_cast<double>(acc);
}

double polish(std::span<const double> c, double x) {
  const double d = eval_deriv(c, x);
  if (d == 0.0 || !std::isfinite(d)) return x;
  const double f = eval(c, x);
  const double y = x - f / d;
  return std::abs(eval(c, y)) <= std::abs(f) ? y : x;
}

std::vector<std::complex<double>> quadratic_roots(double c0, double c1, double c2) {
  const double disc = c1 * c1 - 4.0 * c2 * c0;
  if (disc >= 0.0) {
    const double s = std::sqrt(disc);
    const double t = -0.5 * (c1 + std::copysign(s, c1));
    if (t == 0.0) return {0.0, 0.0};
    return {t / c2, c0 / t};
  }
  const double re = -c1 / (2.0 * c2);
  const double im = std::sqrt(-disc) / (2.0 * std::abs(c2));
  return {{re, -im}, {re, im}};
}

std::vector<std::complex<double>> cubic_roots(double c0, double c1, double c2, double c3) {
  // Monic x^3 + b x^2 + c x + d, depressed by x = t − b/3.
  const double b = c2 / c3, c = c1 / c3, d = c0 / c3;
  const double shift = b / 3.0;
  const double p = c - b * b / 3.0;
  const double q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
  const double disc = q * q / 4.0 + p * p * p / 27.0;

  if (disc <= 0.0 && p < 0.0) {
    const double m = 2.0 * std::sqrt(-p / 3.0);
    const double arg = std::clamp(3.0 * q / (p * m), -1.0, 1.0);
    const double theta = std::acos(arg) / 3.0;
    std::vector<std::complex<double>> out;
    for (int k = 0; k < 3; ++k) {
      out.emplace_back(m * std::cos(theta - 2.0 * std::numbers::pi * k / 3.0) - shift, 0.0);
    }
    return out;
  }
  const double s = std::sqrt(std::max(disc, 0.0));
  const double u = std::cbrt(-q / 2.0 + s);
  const double v = std::cbrt(-q / 2.0 - s);
  const double t1 = u + v;
  const std::complex<double> w(-0.5 * (u + v), std::sqrt(3.0) / 2.0 * (u - v));
  return {{t1 - shift, 0.0}, w - shift, std::conj(w) - shift};
}

std::vector<std::complex<double>> roots(std::span<const double> c) {
  std::size_t deg = c.size();
  while (deg > 0 && c[deg - 1] == 0.0) --deg;
  if (deg <= 1) return {};
  if (deg == 2) return {std::complex<double>(-c[0] / c[1], 0.0)};
  Eigen::VectorXd coeffs(deg);
  for (std::size_t k = 0; k < deg; ++k) coeffs[static_cast<Eigen::Index>(k)] = c[k];
  Eigen::PolynomialSolver<double, Eigen::Dynamic> solver(coeffs);
  const auto& r = solver.roots();
  return std::vector<std::complex<double>>(r.data(), r.data() + r.size());
}

void split_real(const std::vector<std::complex<double>>& all, double tol, std::vector<double>& real,
                std::vector<std::complex<double>>& complex) {
  for (const auto& z : all) {
    if (std::abs(z.imag()) <= tol * std::max(1.0, std::abs(z))) {
      real.push_back(z.real());
    } else {
      complex.push_back(z);
    }
  }
  std::sort(real.begin(), real.end());
}

}  // namespace heun::poly
