#include "heun/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace heun {

const char* to_string(IssueCode code) {
  switch (code) {
    case IssueCode::FuchsianViolated:
      return "FuchsianViolated";
    case IssueCode::DegenerateSingularity:
      return "DegenerateSingularity";
    case IssueCode::ForbiddenIntegerParameter:
      return "ForbiddenIntegerParameter";
  }
  return "unknown";
}

double delta_from_fuchsian(double alpha, double beta, double gamma, double epsilon) {
  return 1.0 + alpha + beta - gamma - epsilon;
}

bool is_nonpositive_integer(double x) {
  const double r = std::round(x);
  return std::abs(x - r) < kIntegerProximity && r <= 0.0;
}

namespace {

std::string describe(std::string_view what, double value) {
  std::ostringstream os;
  os.precision(17);
  os << what << " = " << value;
  return os.str();
}

}  // namespace

ValidationResult validate_params(const HeunParams& p) {
  std::vector<ValidationIssue> issues;

  const double lhs = 1.0 + p.alpha + p.beta;
  const double rhs = p.gamma + p.delta + p.epsilon;
  const double scale = std::max({1.0, 1.0 + std::abs(p.alpha) + std::abs(p.beta),
                                 std::abs(p.gamma) + std::abs(p.delta) + std::abs(p.epsilon)});
  // Written so that NaN inputs fail the check.
  if (!(std::abs(lhs - rhs) <= kFuchsianTolerance * scale)) {
    issues.push_back({IssueCode::FuchsianViolated,
                      describe("1+alpha+beta-(gamma+delta+epsilon)", lhs - rhs), lhs - rhs});
  }

  if (!std::isfinite(p.a) || std::abs(p.a) < kIntegerProximity ||
      std::abs(p.a - 1.0) < kIntegerProximity) {
    issues.push_back({IssueCode::DegenerateSingularity,
                      describe("a", p.a) + " merges with the singular point at 0 or 1", p.a});
  }
  if (!std::isfinite(p.q)) {
    issues.push_back({IssueCode::DegenerateSingularity, describe("q", p.q), p.q});
  }

  const std::pair<const char*, double> restricted[] = {
      {"alpha", p.alpha}, {"beta", p.beta}, {"gamma+epsilon", p.gamma + p.epsilon}};
  for (const auto& [name, value] : restricted) {
    if (is_nonpositive_integer(value)) {
      issues.push_back({IssueCode::ForbiddenIntegerParameter,
                        describe(name, value) + " is zero or a negative integer", value});
    }
  }

  if (!issues.empty()) return issues;
  return ValidatedHeunParams(p);
}

InvalidParams::InvalidParams(std::vector<ValidationIssue> issues)
    : Error([&] {
        std::string msg = "invalid Heun parameters:";
        for (const auto& i : issues) msg += std::string(" [") + to_string(i.code) + "] " + i.detail;
        return msg;
      }()),
      issues_(std::move(issues)) {}

ValidatedHeunParams require_valid(const HeunParams& p) {
  auto result = validate_params(p);
  if (auto* issues = std::get_if<std::vector<ValidationIssue>>(&result)) {
    throw InvalidParams(std::move(*issues));
  }
  return std::get<ValidatedHeunParams>(std::move(result));
}

}  // namespace heun
