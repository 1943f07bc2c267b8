#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "heun/core.hpp"

namespace heun {

/// Heun parameters without the accessory parameter q, which the reduction determines.
struct PartialParams {
  double a = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double delta = 0.0;
  double epsilon = 0.0;

  [[nodiscard]] HeunParams with_q(double q) const {
    return {a, q, alpha, beta, gamma, delta, epsilon};
  }
  [[nodiscard]] static PartialParams from(const HeunParams& p) {
    return {p.a, p.alpha, p.beta, p.gamma, p.delta, p.epsilon};
  }
};

/// Validated parameters plus auxiliary constants e_1..e_N: the data that fixes
/// the two-term coefficient ratio. Not required to be a valid reduction.
struct Ansatz {
  ValidatedHeunParams params;
  std::vector<double> e_list;

  [[nodiscard]] std::size_t order() const { return e_list.size(); }
};

/// The three summands of the polynomial identity at (real) n:
///   (1−a)(γ+ε−α−1+n)(γ+ε−β−1+n) Π(e_k+n),  Q_{n−1} Π(e_k−1+n),  −a(ε+n−2)(n−1) Π(e_k−2+n).
[[nodiscard]] std::array<double, 3> identity_terms(const ValidatedHeunParams& p,
                                                   std::span<const double> e_list, double n);

/// Sum of identity_terms; identically zero in n exactly when the two-term
/// ratio satisfies the three-term recurrence.
[[nodiscard]] double identity_lhs(const ValidatedHeunParams& p, std::span<const double> e_list,
                                  double n);

/// δ = N + 2.
[[nodiscard]] double delta_for_reduction(int N);

struct VerifyOptions {
  double tolerance = 1e-9;      ///< |identity| ≤ tolerance × (sum of |summands|)
  double a_top_tolerance = 1e-8;
  /// Off-grid collocation point in (0, 10); drawn from a fixed-seed generator when unset.
  std::optional<double> off_grid_n;
};

struct ConstraintReport {
  std::vector<double> collocation_points;
  std::vector<double> identity_values;
  std::vector<double> scales;       ///< sum of |summands| at each point
  std::vector<double> extracted_A;  ///< A_0..A_{N+1}, interpolated from n = 0..N+1
  double a_top = 0.0;               ///< A_{N+1} from the (N+1)-th finite difference
  double a_top_expected = 0.0;      ///< 2 + N − δ
  bool identity_passed = false;
  bool a_top_passed = false;
  bool passed = false;
  double tolerance_used = 0.0;
  double a_top_tolerance_used = 0.0;
};

/// Collocation certificate: evaluates the identity at n = 1..N+3 and one
/// off-grid point, and checks the n^{N+1} coefficient against 2 + N − δ.
[[nodiscard]] ConstraintReport verify_reduction(const Ansatz& ansatz,
                                                const VerifyOptions& opts = {});

/// k-th forward difference of identity_lhs over n = start..start+k.
[[nodiscard]] double identity_finite_difference(const ValidatedHeunParams& p,
                                                std::span<const double> e_list, int order,
                                                double start = 0.0);

/// An accepted two-term reduction. Construction runs verify_reduction and
/// enforces δ = N + 2 and admissible e_k.
class ReductionCase {
 public:
  /// Returns nullopt (and fills *report when given) if any invariant fails.
  [[nodiscard]] static std::optional<ReductionCase> create(Ansatz ansatz, int q_root_index,
                                                           const VerifyOptions& opts = {},
                                                           ConstraintReport* report = nullptr);

  [[nodiscard]] std::size_t N() const { return ansatz_.order(); }
  [[nodiscard]] const Ansatz& ansatz() const { return ansatz_; }
  [[nodiscard]] const ValidatedHeunParams& params() const { return ansatz_.params; }
  [[nodiscard]] const std::vector<double>& e_list() const { return ansatz_.e_list; }
  [[nodiscard]] double q() const { return ansatz_.params.q(); }
  [[nodiscard]] int q_root_index() const { return q_root_index_; }
  [[nodiscard]] const ConstraintReport& report() const { return report_; }

  /// (1+e_1, ..., 1+e_N, γ+ε−α, γ+ε−β)
  [[nodiscard]] std::vector<double> ansatz_upper() const;
  /// (e_1, ..., e_N, γ+ε)
  [[nodiscard]] std::vector<double> ansatz_lower() const;

 private:
  ReductionCase(Ansatz a, int idx, ConstraintReport r)
      : ansatz_(std::move(a)), q_root_index_(idx), report_(std::move(r)) {}

  Ansatz ansatz_;
  int q_root_index_;
  ConstraintReport report_;
};

enum class SearchIssueCode {
  NoRealRoot,
  DegenerateConstraint,
  ComplexAnsatz,
  ForbiddenAnsatz,
  InvalidParams,
  VerificationFailed,
  JacobianSingular,
  NoSolutionFound,
};

[[nodiscard]] const char* to_string(SearchIssueCode c);

struct SearchIssue {
  SearchIssueCode code;
  std::string detail;
};

/// Result of a reduction search: accepted cases sorted by (q, sorted e_list),
/// plus everything that was rejected along the way.
struct SearchOutcome {
  std::vector<ReductionCase> cases;
  std::vector<SearchIssue> issues;
  std::vector<std::complex<double>> complex_q_roots;
  double best_residual = 0.0;  ///< general solver: smallest scaled residual seen
};

/// q = aγ + (α−1)(β−1). Requires δ = 2.
[[nodiscard]] double q_for_N0(const PartialParams& pp);

/// Coefficients (ascending) of the quadratic condition on q for N = 1.
[[nodiscard]] std::array<double, 3> q_polynomial_N1(const PartialParams& pp);

/// Coefficients (ascending) of the cubic condition on q for N = 2.
[[nodiscard]] std::array<double, 4> q_polynomial_N2(const PartialParams& pp);

/// e_1 = −q + a(1+γ) − 1 + (α−1)(β−1).
[[nodiscard]] double e1_for_N1(const PartialParams& pp, double q);

/// e_1 + e_2 = −q + a(2+γ) − 3 + (α−1)(β−1).
[[nodiscard]] double e_sum_for_N2(const PartialParams& pp, double q);

/// (e_1+1)(e_2+1)/(e_1 e_2) = (−q + a(α−3)(β−3) + 3aγ) / ((a−1)(α−3)(β−3)).
[[nodiscard]] double e_ratio_for_N2(const PartialParams& pp, double q);

[[nodiscard]] SearchOutcome reduce_N0(const PartialParams& pp, const VerifyOptions& opts = {});
[[nodiscard]] SearchOutcome q_candidates_N1(const PartialParams& pp,
                                            const VerifyOptions& opts = {});
/// Throws PreconditionViolation when α = 3, β = 3 or a = 1.
[[nodiscard]] SearchOutcome q_candidates_N2(const PartialParams& pp,
                                            const VerifyOptions& opts = {});

struct SolverOptions {
  std::size_t max_seeds = 200;
  std::size_t max_iterations = 100;
  double residual_tolerance = 1e-13;  ///< scaled collocation residual for convergence
  double dedup_tolerance = 1e-8;
  bool use_grid_seeds = true;
  VerifyOptions verify;
};

/// Finds (q, e_1..e_N) making the identity vanish at n = 1..N+1 by damped
/// Newton from multiple seeds. Seeds come from the collocation eigenproblem
/// (exact in exact arithmetic) and from a coarse grid; each converged point is
/// deduplicated and certified by verify_reduction.
[[nodiscard]] SearchOutcome solve_reduction_general(const PartialParams& pp, int N,
                                                    const SolverOptions& opts = {});

/// Closed forms for N ≤ 2, general solver otherwise.
[[nodiscard]] SearchOutcome find_reductions(const PartialParams& pp, int N, bool force_general,
                                            const SolverOptions& opts = {});

}  // namespace heun
