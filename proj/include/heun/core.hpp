#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "heun/errors.hpp"

namespace heun {

/// Absolute tolerance (scaled by the magnitude of the terms) for 1+α+β = γ+δ+ε.
inline constexpr double kFuchsianTolerance = 1e-12;

/// |x − round(x)| below this counts as "is an integer".
inline constexpr double kIntegerProximity = 1e-9;

/// Parameters of the general Heun equation
///   u'' + (γ/z + δ/(z−1) + ε/(z−a)) u' + (αβz − q) / (z(z−1)(z−a)) u = 0.
/// Real-valued for now; the field layout mirrors the complex case.
struct HeunParams {
  double a = 0.0;
  double q = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double delta = 0.0;
  double epsilon = 0.0;
};

enum class IssueCode { FuchsianViolated, DegenerateSingularity, ForbiddenIntegerParameter };

[[nodiscard]] const char* to_string(IssueCode code);

struct ValidationIssue {
  IssueCode code;
  std::string detail;
  double offending_value;
};

/// HeunParams that passed validate_params. Immutable.
class ValidatedHeunParams {
 public:
  [[nodiscard]] const HeunParams& raw() const { return p_; }

  [[nodiscard]] double a() const { return p_.a; }
  [[nodiscard]] double q() const { return p_.q; }
  [[nodiscard]] double alpha() const { return p_.alpha; }
  [[nodiscard]] double beta() const { return p_.beta; }
  [[nodiscard]] double gamma() const { return p_.gamma; }
  [[nodiscard]] double delta() const { return p_.delta; }
  [[nodiscard]] double epsilon() const { return p_.epsilon; }

 private:
  explicit ValidatedHeunParams(const HeunParams& p) : p_(p) {}
  friend std::variant<ValidatedHeunParams, std::vector<ValidationIssue>> validate_params(
      const HeunParams& p);

  HeunParams p_;
};

using ValidationResult = std::variant<ValidatedHeunParams, std::vector<ValidationIssue>>;

/// Checks the Fuchsian relation, a ∉ {0, 1}, and that α, β, γ+ε are not
/// zero or negative integers. Every violated condition is reported.
[[nodiscard]] ValidationResult validate_params(const HeunParams& p);

/// Thrown by require_valid; carries the full issue list.
class InvalidParams : public Error {
 public:
  explicit InvalidParams(std::vector<ValidationIssue> issues);
  [[nodiscard]] const std::vector<ValidationIssue>& issues() const { return issues_; }

 private:
  std::vector<ValidationIssue> issues_;
};

/// validate_params, throwing InvalidParams on failure.
[[nodiscard]] ValidatedHeunParams require_valid(const HeunParams& p);

/// 1 + α + β − γ − ε.
[[nodiscard]] double delta_from_fuchsian(double alpha, double beta, double gamma, double epsilon);

/// True when x is within kIntegerProximity of an integer ≤ 0.
[[nodiscard]] bool is_nonpositive_integer(double x);

}  // namespace heun
