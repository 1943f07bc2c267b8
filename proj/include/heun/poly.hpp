#pragma once

#include <complex>
#include <span>
#include <vector>

namespace heun::poly {

// Coefficient vectors are in ascending order: c[0] + c[1] x + c[2] x^2 + ...

[[nodiscard]] double eval(std::span<const double> c, double x);
[[nodiscard]] double eval_deriv(std::span<const double> c, double x);

/// One Newton step on the exact polynomial. Returns x unchanged when p'(x) = 0
/// or when the step does not reduce |p|.
[[nodiscard]] double polish(std::span<const double> c, double x);

/// Roots of c0 + c1 x + c2 x^2 (c2 ≠ 0), cancellation-free form.
[[nodiscard]] std::vector<std::complex<double>> quadratic_roots(double c0, double c1, double c2);

/// Roots of c0 + c1 x + c2 x^2 + c3 x^3 (c3 ≠ 0): trigonometric form for
/// three real roots, Cardano otherwise.
[[nodiscard]] std::vector<std::complex<double>> cubic_roots(double c0, double c1, double c2,
                                                            double c3);

/// All roots of a real polynomial of any degree (companion matrix eigenvalues).
[[nodiscard]] std::vector<std::complex<double>> roots(std::span<const double> c);

/// Splits roots into real ones (|Im| ≤ tol·max(1,|z|)), sorted ascending, and the rest.
void split_real(const std::vector<std::complex<double>>& all, double tol, std::vector<double>& real,
                std::vector<std::complex<double>>& complex);

}  // namespace heun::poly
