#include "heun/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include <Eigen/Dense>

#include "heun/poly.hpp"
#include "heun/recurrence.hpp"

namespace heun {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

long double product_shifted(std::span<const double> e, long double shift, std::size_t skip) {
  long double p = 1.0L;
  for (std::size_t k = 0; k < e.size(); ++k) {
    if (k != skip) p *= static_cast<long double>(e[k]) + shift;
  }
  return p;
}

constexpr std::size_t kNoSkip = std::numeric_limits<std::size_t>::max();

constexpr double kRowScaleFloor = 1.5e-8;  // ~sqrt(DBL_EPSILON)

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

bool near(double x, double target) { return std::abs(x - target) < kIntegerProximity; }

void require_delta(const PartialParams& pp, int N, const char* where) {
  const double want = delta_for_reduction(N);
  if (std::abs(pp.delta - want) > kFuchsianTolerance * std::max(1.0, want)) {
    throw PreconditionViolation(std::string(where) + ": requires delta = " + fmt(want) +
                                ", got " + fmt(pp.delta));
  }
}

double default_off_grid_point() {
  static const double point = [] {
    std::mt19937_64 gen(0x5eedULL);
    std::uniform_real_distribution<double> dist(0.0, 10.0);
    double n = dist(gen);
    while (std::abs(n - std::round(n)) < 0.05) n = dist(gen);
    return n;
  }();
  return point;
}

/// Monomial coefficients of the degree-d interpolant through (k, f_k), k = 0..d.
std::vector<double> interpolate_integer_nodes(const std::vector<double>& f) {
  const std::size_t d = f.size() - 1;
  std::vector<double> diff = f;  // becomes Δ^k f(0) in place
  for (std::size_t k = 1; k <= d; ++k) {
    for (std::size_t i = d; i >= k; --i) diff[i] -= diff[i - 1];
  }
  std::vector<double> coeffs(d + 1, 0.0);
  std::vector<double> falling{1.0};  // n(n−1)...(n−k+1), ascending monomials
  for (std::size_t k = 0; k <= d; ++k) {
    const double w = diff[k] / factorial(static_cast<int>(k));
    for (std::size_t m = 0; m < falling.size(); ++m) coeffs[m] += w * falling[m];
    std::vector<double> next(falling.size() + 1, 0.0);
    for (std::size_t m = 0; m < falling.size(); ++m) {
      next[m + 1] += falling[m];
      next[m] -= static_cast<double>(k) * falling[m];
    }
    falling = std::move(next);
  }
  return coeffs;
}

}  // namespace

std::array<double, 3> identity_terms(const ValidatedHeunParams& p, std::span<const double> e_list,
                                     double n) {
  const long double ge = static_cast<long double>(p.gamma()) + p.epsilon();
  const long double ln = n;
  const long double t1 = (1.0L - p.a()) * (ge - p.alpha() - 1.0L + ln) *
                         (ge - p.beta() - 1.0L + ln) * product_shifted(e_list, ln, kNoSkip);
  const long double t2 = static_cast<long double>(coeff_Q(n - 1.0, p)) *
                         product_shifted(e_list, ln - 1.0L, kNoSkip);
  const long double t3 = -static_cast<long double>(p.a()) * (p.epsilon() + ln - 2.0L) *
                         (ln - 1.0L) * product_shifted(e_list, ln - 2.0L, kNoSkip);
  return {static_cast<double>(t1), static_cast<double>(t2), static_cast<double>(t3)};
}

double identity_lhs(const ValidatedHeunParams& p, std::span<const double> e_list, double n) {
  const auto t = identity_terms(p, e_list, n);
  return static_cast<double>(static_cast<long double>(t[0]) + t[1] + t[2]);
}

double delta_for_reduction(int N) {
  if (N < 0) throw PreconditionViolation("delta_for_reduction: N must be >= 0");
  return N + 2.0;
}

double identity_finite_difference(const ValidatedHeunParams& p, std::span<const double> e_list,
                                  int order, double start) {
  long double acc = 0.0L;
  for (int j = 0; j <= order; ++j) {
    const double sign = ((order - j) % 2 == 0) ? 1.0 : -1.0;
    acc += sign * binomial(order, j) * static_cast<long double>(identity_lhs(p, e_list, start + j));
  }
  return static_cast<double>(acc);
}

ConstraintReport verify_reduction(const Ansatz& ansatz, const VerifyOptions& opts) {
  const auto& p = ansatz.params;
  const auto& e = ansatz.e_list;
  const int N = static_cast<int>(e.size());

  ConstraintReport r;
  r.tolerance_used = opts.tolerance;
  r.a_top_tolerance_used = opts.a_top_tolerance;
  for (int n = 1; n <= N + 3; ++n) r.collocation_points.push_back(n);
  r.collocation_points.push_back(opts.off_grid_n.value_or(default_off_grid_point()));

  double largest = 0.0;
  for (double n : r.collocation_points) {
    const auto t = identity_terms(p, e, n);
    r.identity_values.push_back(static_cast<double>(static_cast<long double>(t[0]) + t[1] + t[2]));
    r.scales.push_back(std::abs(t[0]) + std::abs(t[1]) + std::abs(t[2]));
    largest = std::max(largest, r.scales.back());
  }
  // A row whose summands all vanish analytically carries only rounding noise,
  // so its scale is floored relative to the largest row.
  r.identity_passed = true;
  for (std::size_t i = 0; i < r.scales.size(); ++i) {
    r.scales[i] = std::max(r.scales[i], kRowScaleFloor * largest);
    if (!(std::abs(r.identity_values[i]) <= opts.tolerance * r.scales[i])) r.identity_passed = false;
  }

  std::vector<double> samples;
  for (int n = 0; n <= N + 1; ++n) samples.push_back(identity_lhs(p, e, n));
  r.extracted_A = interpolate_integer_nodes(samples);
  r.a_top = identity_finite_difference(p, e, N + 1) / factorial(N + 1);
  r.a_top_expected = 2.0 + N - p.delta();
  r.a_top_passed = std::abs(r.a_top - r.a_top_expected) <= opts.a_top_tolerance;
  r.passed = r.identity_passed && r.a_top_passed;
  return r;
}

std::optional<ReductionCase> ReductionCase::create(Ansatz ansatz, int q_root_index,
                                                   const VerifyOptions& opts,
                                                   ConstraintReport* report) {
  auto r = verify_reduction(ansatz, opts);
  if (report) *report = r;
  const double want = static_cast<double>(ansatz.order()) + 2.0;
  if (std::abs(ansatz.params.delta() - want) > kFuchsianTolerance * want) return std::nullopt;
  for (double e : ansatz.e_list) {
    if (!std::isfinite(e) || is_nonpositive_integer(e)) return std::nullopt;
  }
  if (!r.passed) return std::nullopt;
  return ReductionCase(std::move(ansatz), q_root_index, std::move(r));
}

std::vector<double> ReductionCase::ansatz_upper() const {
  std::vector<double> out;
  for (double e : e_list()) out.push_back(1.0 + e);
  const double ge = params().gamma() + params().epsilon();
  out.push_back(ge - params().alpha());
  out.push_back(ge - params().beta());
  return out;
}

std::vector<double> ReductionCase::ansatz_lower() const {
  std::vector<double> out = e_list();
  out.push_back(params().gamma() + params().epsilon());
  return out;
}

const char* to_string(SearchIssueCode c) {
  switch (c) {
    case SearchIssueCode::NoRealRoot:
      return "NoRealRoot";
    case SearchIssueCode::DegenerateConstraint:
      return "DegenerateConstraint";
    case SearchIssueCode::ComplexAnsatz:
      return "ComplexAnsatz";
    case SearchIssueCode::ForbiddenAnsatz:
      return "ForbiddenAnsatz";
    case SearchIssueCode::InvalidParams:
      return "InvalidParams";
    case SearchIssueCode::VerificationFailed:
      return "VerificationFailed";
    case SearchIssueCode::JacobianSingular:
      return "JacobianSingular";
    case SearchIssueCode::NoSolutionFound:
      return "NoSolutionFound";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Closed forms, N = 0, 1, 2.

double q_for_N0(const PartialParams& pp) {
  require_delta(pp, 0, "q_for_N0");
  return pp.a * pp.gamma + (pp.alpha - 1.0) * (pp.beta - 1.0);
}

std::array<double, 3> q_polynomial_N1(const PartialParams& pp) {
  const double a = pp.a, al = pp.alpha, be = pp.beta, ga = pp.gamma;
  const double c0 = (al - 2.0) * (al - 1.0) * (be - 2.0) * (be - 1.0) +
                    a * (4.0 + 2.0 * a - 4.0 * al - 4.0 * be + 3.0 * al * be) * ga +
                    2.0 * a * a * ga * ga;
  const double c1 = -(4.0 + a - 3.0 * al - 3.0 * be + 2.0 * al * be + 3.0 * a * ga);
  return {c0, c1, 1.0};
}

std::array<double, 4> q_polynomial_N2(const PartialParams& pp) {
  const double a = pp.a, al = pp.alpha, be = pp.beta, ga = pp.gamma;
  const double c2 = -(10.0 + 3.0 * al * (be - 2.0) - 6.0 * be + a * (4.0 + 6.0 * ga));
  const double c1 =
      33.0 - 2.0 * al * (2.0 * be - 5.0) * (3.0 * be - 4.0) + be * (11.0 * be - 40.0) +
      al * al * (11.0 + 3.0 * (be - 4.0) * be) + a * a * (4.0 + ga * (18.0 + 11.0 * ga)) +
      2.0 * a *
          (6.0 - 4.0 * be + 15.0 * ga - 11.0 * be * ga +
           al * (2.0 * be + 6.0 * be * ga - 11.0 * ga - 4.0));
  const double c0 =
      -(al - 1.0) * (al - 2.0) * (al - 3.0) * (be - 1.0) * (be - 2.0) * (be - 3.0) -
      2.0 * a *
          (18.0 + 6.0 * a * a + 9.0 * (al - 3.0) * al - 27.0 * be + (37.0 - 11.0 * al) * al * be +
           (9.0 + al * (3.0 * al - 11.0)) * be * be +
           a * (9.0 - 9.0 * al - 9.0 * be + 5.0 * al * be)) *
          ga +
      a * a * (18.0 * al + 18.0 * be - 18.0 - 18.0 * a - 11.0 * al * be) * ga * ga -
      6.0 * a * a * a * ga * ga * ga;
  return {c0, c1, c2, 1.0};
}

double e1_for_N1(const PartialParams& pp, double q) {
  return -q + pp.a * (1.0 + pp.gamma) - 1.0 + (pp.alpha - 1.0) * (pp.beta - 1.0);
}

double e_sum_for_N2(const PartialParams& pp, double q) {
  return -q + pp.a * (2.0 + pp.gamma) - 3.0 + (pp.alpha - 1.0) * (pp.beta - 1.0);
}

double e_ratio_for_N2(const PartialParams& pp, double q) {
  const double num = -q + pp.a * (pp.alpha - 3.0) * (pp.beta - 3.0) + 3.0 * pp.a * pp.gamma;
  const double den = (pp.a - 1.0) * (pp.alpha - 3.0) * (pp.beta - 3.0);
  return num / den;
}

namespace {

/// Newton refinement of a closed-form (q, e) on the collocation equations.
void refine(const PartialParams& pp, double& q, std::vector<double>& e);

void sort_cases(std::vector<ReductionCase>& cases) {
  std::sort(cases.begin(), cases.end(), [](const ReductionCase& x, const ReductionCase& y) {
    if (x.q() != y.q()) return x.q() < y.q();
    return x.e_list() < y.e_list();
  });
}

/// Builds and certifies a case, recording the reason on rejection.
void try_accept(const PartialParams& pp, double q, std::vector<double> e, int index,
                const VerifyOptions& opts, SearchOutcome& out) {
  for (double ek : e) {
    if (is_nonpositive_integer(ek)) {
      out.issues.push_back({SearchIssueCode::ForbiddenAnsatz,
                            "q = " + fmt(q) + ": e = " + fmt(ek) + " is zero or a negative integer"});
      return;
    }
  }
  auto validated = validate_params(pp.with_q(q));
  if (auto* issues = std::get_if<std::vector<ValidationIssue>>(&validated)) {
    out.issues.push_back({SearchIssueCode::InvalidParams,
                          "q = " + fmt(q) + ": " + issues->front().detail});
    return;
  }
  std::sort(e.begin(), e.end());
  ConstraintReport report;
  auto c = ReductionCase::create({std::get<ValidatedHeunParams>(validated), std::move(e)}, index,
                                 opts, &report);
  if (!c) {
    out.issues.push_back({SearchIssueCode::VerificationFailed,
                          "q = " + fmt(q) + ": collocation check failed"});
    return;
  }
  out.cases.push_back(std::move(*c));
}

}  // namespace

SearchOutcome reduce_N0(const PartialParams& pp, const VerifyOptions& opts) {
  (void)require_valid(pp.with_q(0.0));
  SearchOutcome out;
  try_accept(pp, q_for_N0(pp), {}, 0, opts, out);
  return out;
}

SearchOutcome q_candidates_N1(const PartialParams& pp, const VerifyOptions& opts) {
  require_delta(pp, 1, "q_candidates_N1");
  (void)require_valid(pp.with_q(0.0));
  const auto c = q_polynomial_N1(pp);
  SearchOutcome out;
  std::vector<double> real;
  poly::split_real(poly::quadratic_roots(c[0], c[1], c[2]), 0.0, real, out.complex_q_roots);
  if (real.empty()) {
    out.issues.push_back({SearchIssueCode::NoRealRoot,
                          "discriminant " + fmt(c[1] * c[1] - 4.0 * c[0]) + " < 0"});
    return out;
  }
  for (std::size_t i = 0; i < real.size(); ++i) {
    double q = poly::polish(c, real[i]);
    std::vector<double> e{e1_for_N1(pp, q)};
    refine(pp, q, e);
    try_accept(pp, q, std::move(e), static_cast<int>(i), opts, out);
  }
  sort_cases(out.cases);
  return out;
}

SearchOutcome q_candidates_N2(const PartialParams& pp, const VerifyOptions& opts) {
  require_delta(pp, 2, "q_candidates_N2");
  if (near(pp.alpha, 3.0) || near(pp.beta, 3.0) || near(pp.a, 1.0)) {
    throw PreconditionViolation("q_candidates_N2: requires alpha != 3, beta != 3, a != 1");
  }
  (void)require_valid(pp.with_q(0.0));
  const auto c = q_polynomial_N2(pp);
  SearchOutcome out;
  std::vector<double> real;
  poly::split_real(poly::cubic_roots(c[0], c[1], c[2], c[3]), 1e-10, real, out.complex_q_roots);
  if (real.empty()) {
    out.issues.push_back({SearchIssueCode::NoRealRoot, "cubic in q has no real root"});
    return out;
  }
  for (std::size_t i = 0; i < real.size(); ++i) {
    const double q = poly::polish(c, real[i]);
    const double S = e_sum_for_N2(pp, q);
    const double K = e_ratio_for_N2(pp, q);
    if (std::abs(K - 1.0) < 1e-12) {
      out.issues.push_back({SearchIssueCode::DegenerateConstraint,
                            "q = " + fmt(q) + ": (e1+1)(e2+1)/(e1 e2) = 1, product undetermined"});
      continue;
    }
    const double P = (S + 1.0) / (K - 1.0);
    const auto t = poly::quadratic_roots(P, -S, 1.0);
    if (t[0].imag() != 0.0) {
      out.issues.push_back({SearchIssueCode::ComplexAnsatz,
                            "q = " + fmt(q) + ": e1, e2 form a complex pair"});
      continue;
    }
    double qr = q;
    std::vector<double> e{t[0].real(), t[1].real()};
    refine(pp, qr, e);
    try_accept(pp, qr, std::move(e), static_cast<int>(i), opts, out);
  }
  sort_cases(out.cases);
  return out;
}

// ---------------------------------------------------------------------------
// General N: damped Newton on the collocation residual.

namespace {

struct Collocation {
  const PartialParams& pp;
  int N;

  /// Residuals at n = 1..N+1 and their scales, for x = (q, e_1..e_N).
  void residual(const Eigen::VectorXd& x, Eigen::VectorXd& f, Eigen::VectorXd& scale) const {
    const auto p = require_valid(pp.with_q(x[0]));
    std::vector<double> e(x.data() + 1, x.data() + 1 + N);
    f.resize(N + 1);
    scale.resize(N + 1);
    for (int i = 0; i <= N; ++i) {
      const auto t = identity_terms(p, e, i + 1.0);
      f[i] = t[0] + t[1] + t[2];
      scale[i] = std::abs(t[0]) + std::abs(t[1]) + std::abs(t[2]);
    }
  }

  Eigen::MatrixXd jacobian(const Eigen::VectorXd& x) const {
    const auto p = require_valid(pp.with_q(x[0]));
    std::vector<double> e(x.data() + 1, x.data() + 1 + N);
    const double ge = p.gamma() + p.epsilon();
    Eigen::MatrixXd J(N + 1, N + 1);
    for (int i = 0; i <= N; ++i) {
      const long double n = i + 1.0L;
      const long double lead = (1.0L - p.a()) * (ge - p.alpha() - 1.0L + n) * (ge - p.beta() - 1.0L + n);
      const long double q_prev = coeff_Q(static_cast<double>(n - 1.0L), p);
      const long double tail = -static_cast<long double>(p.a()) * (p.epsilon() + n - 2.0L) * (n - 1.0L);
      J(i, 0) = static_cast<double>(-product_shifted(e, n - 1.0L, kNoSkip));
      for (int j = 0; j < N; ++j) {
        const auto sj = static_cast<std::size_t>(j);
        J(i, j + 1) = static_cast<double>(lead * product_shifted(e, n, sj) +
                                          q_prev * product_shifted(e, n - 1.0L, sj) +
                                          tail * product_shifted(e, n - 2.0L, sj));
      }
    }
    return J;
  }

  static double scaled_norm(const Eigen::VectorXd& f, const Eigen::VectorXd& scale) {
    double m = 0.0;
    for (Eigen::Index i = 0; i < f.size(); ++i) {
      m = std::max(m, std::abs(f[i]) / (scale[i] + kResidualTiny));
    }
    return m;
  }
};

struct NewtonResult {
  Eigen::VectorXd x;
  double residual = std::numeric_limits<double>::infinity();
  bool singular = false;
};

NewtonResult damped_newton(const Collocation& col, Eigen::VectorXd x, const SolverOptions& opts) {
  NewtonResult best;
  Eigen::VectorXd f, scale;
  try {
    col.residual(x, f, scale);
  } catch (const Error&) {
    return best;
  }
  double norm = Collocation::scaled_norm(f, scale);
  best.x = x;
  best.residual = norm;

  for (std::size_t it = 0; it < opts.max_iterations && norm > opts.residual_tolerance; ++it) {
    Eigen::MatrixXd J = col.jacobian(x);
    // Row scaling leaves the Newton step unchanged but equilibrates the solve.
    for (Eigen::Index i = 0; i < J.rows(); ++i) {
      const double s = 1.0 / (scale[i] + kResidualTiny);
      J.row(i) *= s;
      f[i] *= s;
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(J);
    if (lu.rank() < J.cols() || lu.rcond() < 1e-15) {
      best.singular = true;
      return best;
    }
    const Eigen::VectorXd step = lu.solve(-f);
    if (!step.allFinite()) {
      best.singular = true;
      return best;
    }

    double lambda = 1.0;
    bool improved = false;
    Eigen::VectorXd trial, ft, st;
    for (int k = 0; k < 30; ++k, lambda *= 0.5) {
      trial = x + lambda * step;
      try {
        col.residual(trial, ft, st);
      } catch (const Error&) {
        continue;
      }
      const double tn = Collocation::scaled_norm(ft, st);
      if (std::isfinite(tn) && tn < norm) {
        improved = true;
        break;
      }
    }
    if (!improved) break;
    const double step_size = (trial - x).cwiseAbs().maxCoeff();
    x = trial;
    f = ft;
    scale = st;
    norm = Collocation::scaled_norm(f, scale);
    if (norm < best.residual) {
      best.x = x;
      best.residual = norm;
    }
    if (step_size <= 1e-15 * std::max(1.0, x.cwiseAbs().maxCoeff())) break;
  }
  return best;
}

void refine(const PartialParams& pp, double& q, std::vector<double>& e) {
  const int N = static_cast<int>(e.size());
  Eigen::VectorXd x(N + 1);
  x[0] = q;
  for (int k = 0; k < N; ++k) x[k + 1] = e[static_cast<std::size_t>(k)];
  SolverOptions opts;
  opts.max_iterations = 8;
  opts.residual_tolerance = 0.0;
  const auto r = damped_newton(Collocation{pp, N}, x, opts);
  if (r.x.size() != x.size() || !r.x.allFinite()) return;
  q = r.x[0];
  for (int k = 0; k < N; ++k) e[static_cast<std::size_t>(k)] = r.x[k + 1];
}

/// Exact-arithmetic elimination: with σ the elementary symmetric functions of
/// the e_k, the identity at n = 1..N+1 reads (U − qV)σ = 0, σ_0 = 1, so the
/// admissible q are the eigenvalues of V⁻¹U and σ its eigenvectors.
void eigen_seeds(const PartialParams& pp, int N, std::vector<Eigen::VectorXd>& seeds,
                 std::vector<double>& real_q, std::vector<std::complex<double>>& complex_q,
                 std::vector<SearchIssue>& issues) {
  const auto p0 = require_valid(pp.with_q(0.0));
  const double ge = pp.gamma + pp.epsilon;
  Eigen::MatrixXd U(N + 1, N + 1), V(N + 1, N + 1);
  for (int i = 0; i <= N; ++i) {
    const double n = i + 1.0;
    const double lead = (1.0 - pp.a) * (ge - pp.alpha - 1.0 + n) * (ge - pp.beta - 1.0 + n);
    const double q_base = coeff_Q(n - 1.0, p0);
    const double tail = -pp.a * (pp.epsilon + n - 2.0) * (n - 1.0);
    for (int j = 0; j <= N; ++j) {
      const int pw = N - j;
      U(i, j) = lead * std::pow(n, pw) + q_base * std::pow(n - 1.0, pw) +
                tail * std::pow(n - 2.0, pw);
      V(i, j) = std::pow(n - 1.0, pw);  // pow(0, 0) == 1
    }
  }
  const Eigen::MatrixXd M = V.fullPivLu().solve(U);
  Eigen::EigenSolver<Eigen::MatrixXd> es(M);
  if (es.info() != Eigen::Success) return;

  const auto values = es.eigenvalues();
  const auto vectors = es.eigenvectors();
  std::vector<std::complex<double>> all(values.data(), values.data() + values.size());
  std::vector<double> reals;
  poly::split_real(all, 1e-9, reals, complex_q);
  real_q = reals;

  for (Eigen::Index k = 0; k < values.size(); ++k) {
    const std::complex<double> lam = values[k];
    if (std::abs(lam.imag()) > 1e-9 * std::max(1.0, std::abs(lam))) continue;
    Eigen::VectorXcd sigma = vectors.col(k);
    if (std::abs(sigma[0]) < 1e-14 * sigma.cwiseAbs().maxCoeff()) continue;
    sigma /= sigma[0];
    // Π(x + e_k) = Σ_j σ_j x^{N−j}; its roots are −e_k.
    std::vector<double> c(N + 1);
    for (int j = 0; j <= N; ++j) c[N - j] = sigma[j].real();
    Eigen::VectorXd x(N + 1);
    x[0] = lam.real();
    bool complex_pair = false;
    const auto r = poly::roots(c);
    for (int j = 0; j < N; ++j) {
      if (std::abs(r[j].imag()) > 1e-7 * std::max(1.0, std::abs(r[j]))) complex_pair = true;
      x[j + 1] = -r[j].real();
    }
    if (complex_pair) {
      issues.push_back({SearchIssueCode::ComplexAnsatz,
                        "q = " + fmt(lam.real()) + ": e_k include a complex pair"});
      continue;
    }
    seeds.push_back(x);
  }
}

void grid_seeds(const PartialParams& pp, int N, std::size_t limit,
                std::vector<Eigen::VectorXd>& seeds) {
  const auto c = q_polynomial_N1(pp);
  std::vector<double> q0;
  for (const auto& r : poly::quadratic_roots(c[0], c[1], c[2])) q0.push_back(r.real());
  const double shifts[] = {0.0, -1.0, 1.0, -3.0, 3.0, -10.0, 10.0, -30.0, 30.0};
  const double e_scales[] = {1.0, -1.0, 4.0};
  for (double base : q0) {
    for (double s : shifts) {
      for (double es : e_scales) {
        if (seeds.size() >= limit) return;
        Eigen::VectorXd x(N + 1);
        x[0] = base + s * std::max(1.0, 0.1 * std::abs(base));
        for (int k = 0; k < N; ++k) x[k + 1] = es * (k + 0.5);
        seeds.push_back(x);
      }
    }
  }
}

bool same_solution(const Eigen::VectorXd& x, const Eigen::VectorXd& y, double tol) {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (std::abs(x[i] - y[i]) > tol * std::max(1.0, std::abs(x[i]))) return false;
  }
  return true;
}

}  // namespace

SearchOutcome solve_reduction_general(const PartialParams& pp, int N, const SolverOptions& opts) {
  if (N < 0) throw PreconditionViolation("solve_reduction_general: N must be >= 0");
  require_delta(pp, N, "solve_reduction_general");
  (void)require_valid(pp.with_q(0.0));

  SearchOutcome out;
  std::vector<Eigen::VectorXd> seeds;
  std::vector<double> real_q;
  std::vector<SearchIssue> seed_issues;
  eigen_seeds(pp, N, seeds, real_q, out.complex_q_roots, seed_issues);
  if (opts.use_grid_seeds) grid_seeds(pp, N, opts.max_seeds, seeds);
  if (seeds.size() > opts.max_seeds) seeds.resize(opts.max_seeds);

  const Collocation col{pp, N};
  std::vector<Eigen::VectorXd> found;
  out.best_residual = std::numeric_limits<double>::infinity();
  std::size_t singular = 0;
  for (const auto& seed : seeds) {
    auto res = damped_newton(col, seed, opts);
    if (res.singular) ++singular;
    out.best_residual = std::min(out.best_residual, res.residual);
    if (!(res.residual <= opts.verify.tolerance)) continue;
    Eigen::VectorXd x = res.x;
    std::sort(x.data() + 1, x.data() + x.size());
    const bool dup = std::any_of(found.begin(), found.end(), [&](const Eigen::VectorXd& y) {
      return same_solution(x, y, opts.dedup_tolerance);
    });
    if (!dup) found.push_back(x);
  }
  if (singular > 0) {
    out.issues.push_back({SearchIssueCode::JacobianSingular,
                          std::to_string(singular) + " seed(s) skipped: singular Jacobian"});
  }

  std::sort(found.begin(), found.end(), [](const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    return std::lexicographical_compare(x.data(), x.data() + x.size(), y.data(),
                                        y.data() + y.size());
  });
  for (const auto& x : found) {
    int index = -1;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < real_q.size(); ++k) {
      const double d = std::abs(real_q[k] - x[0]);
      if (d < best && d <= 1e-6 * std::max(1.0, std::abs(x[0]))) {
        best = d;
        index = static_cast<int>(k);
      }
    }
    try_accept(pp, x[0], std::vector<double>(x.data() + 1, x.data() + x.size()), index,
               opts.verify, out);
  }
  if (out.cases.empty()) {
    out.issues.insert(out.issues.end(), seed_issues.begin(), seed_issues.end());
    out.issues.push_back({SearchIssueCode::NoSolutionFound,
                          "no admissible real solution from " + std::to_string(seeds.size()) +
                              " seeds; best scaled residual " + fmt(out.best_residual)});
  }
  sort_cases(out.cases);
  return out;
}

SearchOutcome find_reductions(const PartialParams& pp, int N, bool force_general,
                              const SolverOptions& opts) {
  if (force_general || N >= 3) return solve_reduction_general(pp, N, opts);
  if (N == 0) return reduce_N0(pp, opts.verify);
  if (N == 1) return q_candidates_N1(pp, opts.verify);
  if (near(pp.alpha, 3.0) || near(pp.beta, 3.0) || near(pp.a, 1.0)) {
    auto out = solve_reduction_general(pp, N, opts);
    out.issues.insert(out.issues.begin(),
                      {SearchIssueCode::DegenerateConstraint,
                       "closed form for N = 2 needs alpha, beta != 3; used the general solver"});
    return out;
  }
  return q_candidates_N2(pp, opts.verify);
}

}  // namespace heun
