#include "heun/cli.hpp"

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "heun/evaluator.hpp"
#include "heun/io.hpp"
#include "heun/oracle.hpp"
#include "heun/recurrence.hpp"
#include "heun/reduction.hpp"

namespace heun::cli {

namespace {

using io::format_number;
using io::Json;

struct Config {
  std::string params_file;
  std::string format;
  int N = -1;
  bool force_general = false;
  std::string e_text;
  std::string z_text;
  std::size_t n_max = 20;
  std::string source = "closed";
  std::size_t case_index = 0;

  double rel_tol = SeriesControl{}.rel_tol;
  std::size_t max_terms = SeriesControl{}.max_terms;
  double z_guard = kDefaultZGuard;
  double identity_tol = VerifyOptions{}.tolerance;
  double a_top_tol = VerifyOptions{}.a_top_tolerance;
  double recurrence_tol = 1e-10;
  double ode_tol = 1e-7;
  double cross_tol = 1e-7;
  std::size_t verify_n_max = 50;
};

ExpansionOptions expansion_options(const Config& cfg) {
  ExpansionOptions o;
  o.control.rel_tol = cfg.rel_tol;
  o.control.max_terms = cfg.max_terms;
  o.z_guard = cfg.z_guard;
  return o;
}

VerifyOptions verify_options(const Config& cfg) {
  VerifyOptions v;
  v.tolerance = cfg.identity_tol;
  v.a_top_tolerance = cfg.a_top_tol;
  return v;
}

Json tolerances_json(const Config& cfg) {
  return Json{{"rel_tol", cfg.rel_tol},         {"max_terms", cfg.max_terms},
              {"z_guard", cfg.z_guard},         {"identity_tol", cfg.identity_tol},
              {"a_top_tol", cfg.a_top_tol},     {"recurrence_tol", cfg.recurrence_tol},
              {"ode_tol", cfg.ode_tol},         {"cross_tol", cfg.cross_tol}};
}

std::vector<double> z_list(const Config& cfg, bool allow_default) {
  auto z = io::parse_number_list(cfg.z_text);
  if (z.empty()) {
    if (!allow_default) throw io::InputError("--z: at least one point is required");
    z = {0.1, 0.25, 0.4};
  }
  for (double v : z) {
    if (!(std::abs(v) <= cfg.z_guard) || !(std::abs(v) < 1.0)) {
      throw io::InputError("--z: " + format_number(v) + " is outside the evaluation domain |z| <= " +
                           format_number(cfg.z_guard));
    }
  }
  return z;
}

Ansatz full_ansatz(const Config& cfg) {
  const auto p = require_valid(io::require_full(io::read_params_file(cfg.params_file)));
  auto e = io::parse_number_list(cfg.e_text);
  for (double v : e) {
    if (is_nonpositive_integer(v)) {
      throw io::InputError("--e: " + format_number(v) + " is zero or a negative integer");
    }
  }
  return {p, std::move(e)};
}

std::string join(const std::vector<double>& v, char sep) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += sep;
    s += format_number(v[i]);
  }
  return s;
}

int cmd_reduce(const Config& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.N < 0) throw io::InputError("--n must be >= 0");
  const auto in = io::read_params_file(cfg.params_file);
  const auto pp = io::require_partial(in, delta_for_reduction(cfg.N));
  if (std::abs(pp.delta - delta_for_reduction(cfg.N)) > kFuchsianTolerance * (cfg.N + 2.0)) {
    throw io::InputError("delta = " + format_number(pp.delta) + " is inconsistent with N = " +
                         std::to_string(cfg.N) + " (needs " +
                         format_number(delta_for_reduction(cfg.N)) + ")");
  }
  SolverOptions so;
  so.verify = verify_options(cfg);
  const auto outcome = find_reductions(pp, cfg.N, cfg.force_general, so);

  if (cfg.format == "csv") {
    out << io::csv_line({"N", "q", "q_root_index", "e", "passed"});
    for (const auto& c : outcome.cases) {
      out << io::csv_line({std::to_string(c.N()), format_number(c.q()),
                           std::to_string(c.q_root_index()), join(c.e_list(), ';'),
                           c.report().passed ? "true" : "false"});
    }
  } else {
    Json cases = Json::array(), issues = Json::array(), complex = Json::array();
    for (const auto& c : outcome.cases) cases.push_back(io::to_json(c));
    for (const auto& i : outcome.issues) issues.push_back(io::to_json(i));
    for (const auto& z : outcome.complex_q_roots) {
      complex.push_back(Json::array({io::number(z.real()), io::number(z.imag())}));
    }
    Json doc{{"command", "reduce"},
             {"N", cfg.N},
             {"solver", (cfg.force_general || cfg.N >= 3) ? "general" : "closed_form"},
             {"cases", cases},
             {"issues", issues},
             {"complex_q_roots", complex},
             {"tolerances", tolerances_json(cfg)}};
    out << doc.dump(2) << '\n';
  }
  if (outcome.cases.empty()) {
    for (const auto& i : outcome.issues) err << "heunx: " << to_string(i.code) << ": " << i.detail << '\n';
    return kNoSolution;
  }
  return kOk;
}

int cmd_coeffs(const Config& cfg, std::ostream& out) {
  const auto an = full_ansatz(cfg);
  CoefficientStream s = [&] {
    if (cfg.source == "three-term") return three_term_coefficients(an.params, cfg.n_max);
    if (cfg.source == "ratio") return two_term_coefficients(an.params, an.e_list, cfg.n_max);
    return closed_form_coefficients(an.params, an.e_list, cfg.n_max);
  }();
  const auto rows = recurrence_row_residuals(s, an.params);
  const auto& c = s.values;

  if (cfg.format == "json") {
    Json arr = Json::array();
    for (std::size_t n = 0; n < c.size(); ++n) {
      Json ratio = (n > 0 && c[n - 1] != 0.0) ? io::number(c[n] / c[n - 1]) : Json(nullptr);
      arr.push_back(Json{{"n", n}, {"c", io::number(c[n])}, {"ratio", ratio},
                         {"residual", io::number(rows[n])}});
    }
    Json doc{{"command", "coeffs"}, {"source", to_string(s.source)},
             {"e", an.e_list},      {"rows", arr}};
    out << doc.dump(2) << '\n';
    return kOk;
  }
  out << io::csv_line({"n", "c_n", "ratio", "residual_n"});
  for (std::size_t n = 0; n < c.size(); ++n) {
    const std::string ratio = (n > 0 && c[n - 1] != 0.0) ? format_number(c[n] / c[n - 1]) : "";
    out << io::csv_line({std::to_string(n), format_number(c[n]), ratio, format_number(rows[n])});
  }
  return kOk;
}

int cmd_eval(const Config& cfg, std::ostream& out, bool with_residual) {
  const auto an = full_ansatz(cfg);
  const auto zs = z_list(cfg, false);
  const auto opts = expansion_options(cfg);

  struct Row {
    double z;
    EvalResult u, du, d2u;
    double residual;
  };
  std::vector<Row> rows;
  for (double z : zs) {
    if (with_residual) {
      const auto o = ode_evaluate(an, z, opts);
      rows.push_back({z, o.u, o.du, o.d2u, o.residual});
    } else {
      rows.push_back({z, evaluate_expansion(an, z, opts), evaluate_expansion_deriv(an, z, 1, opts),
                      evaluate_expansion_deriv(an, z, 2, opts), 0.0});
    }
  }

  auto status = [](const Row& r) {
    const bool ok = r.u.status == EvalStatus::Converged && r.du.status == EvalStatus::Converged &&
                    r.d2u.status == EvalStatus::Converged;
    return ok ? to_string(EvalStatus::Converged) : to_string(EvalStatus::MaxTermsReached);
  };

  if (cfg.format == "json") {
    Json arr = Json::array();
    for (const auto& r : rows) {
      Json j{{"z", r.z},
             {"u", io::to_json(r.u)},
             {"du", io::to_json(r.du)},
             {"d2u", io::to_json(r.d2u)}};
      if (with_residual) j["residual"] = io::number(r.residual);
      arr.push_back(j);
    }
    Json doc{{"command", with_residual ? "residual" : "eval"},
             {"e", an.e_list},
             {"points", arr},
             {"tolerances", tolerances_json(cfg)}};
    out << doc.dump(2) << '\n';
    return kOk;
  }
  if (with_residual) {
    out << io::csv_line({"z", "u", "du", "d2u", "residual", "terms_used"});
  } else {
    out << io::csv_line({"z", "u", "du", "d2u", "terms_used", "status"});
  }
  for (const auto& r : rows) {
    std::vector<std::string> f{format_number(r.z), format_number(r.u.value),
                               format_number(r.du.value), format_number(r.d2u.value)};
    if (with_residual) {
      f.push_back(format_number(r.residual));
      f.push_back(std::to_string(r.u.terms_used));
    } else {
      f.push_back(std::to_string(r.u.terms_used));
      f.emplace_back(status(r));
    }
    out << io::csv_line(f);
  }
  return kOk;
}

struct Check {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string detail;
};

/// Uses --e when given; otherwise derives the ansatz with reduce when --n is set.
std::optional<Ansatz> verify_target(const Config& cfg, std::ostream& err) {
  const auto in = io::read_params_file(cfg.params_file);
  if (!cfg.e_text.empty() || cfg.N < 0) {
    if (!in.q) throw io::InputError("verify: q is required unless --n is given");
    return full_ansatz(cfg);
  }
  const auto pp = io::require_partial(in, delta_for_reduction(cfg.N));
  SolverOptions so;
  so.verify = verify_options(cfg);
  auto outcome = find_reductions(pp, cfg.N, cfg.force_general, so);
  if (in.q) {
    std::erase_if(outcome.cases, [&](const ReductionCase& c) {
      return std::abs(c.q() - *in.q) > 1e-8 * std::max(1.0, std::abs(*in.q));
    });
  }
  if (cfg.case_index >= outcome.cases.size()) {
    err << "heunx: verify: no reduction case #" << cfg.case_index << " for N = " << cfg.N << '\n';
    for (const auto& i : outcome.issues) err << "heunx: " << to_string(i.code) << ": " << i.detail << '\n';
    return std::nullopt;
  }
  return outcome.cases[cfg.case_index].ansatz();
}

int cmd_verify(const Config& cfg, std::ostream& out, std::ostream& err) {
  const auto zs = z_list(cfg, true);
  const auto target = verify_target(cfg, err);
  if (!target) return kNoSolution;
  const Ansatz& an = *target;
  const auto opts = expansion_options(cfg);

  std::vector<Check> checks;
  {
    const auto s = closed_form_coefficients(an.params, an.e_list, cfg.verify_n_max);
    const double r = recurrence_residual(s, an.params);
    checks.push_back({"recurrence_residual", r, cfg.recurrence_tol, r <= cfg.recurrence_tol,
                      "n_max = " + std::to_string(cfg.verify_n_max)});
  }
  {
    const auto rep = verify_reduction(an, verify_options(cfg));
    double worst = 0.0;
    for (std::size_t i = 0; i < rep.identity_values.size(); ++i) {
      worst = std::max(worst, std::abs(rep.identity_values[i]) / (rep.scales[i] + kResidualTiny));
    }
    checks.push_back({"verify_reduction", worst, cfg.identity_tol, rep.passed,
                      "A_top = " + format_number(rep.a_top) + ", expected " +
                          format_number(rep.a_top_expected)});
  }
  {
    double worst = 0.0;
    for (double z : zs) worst = std::max(worst, ode_residual(an, z, opts));
    checks.push_back({"ode_residual", worst, cfg.ode_tol, worst <= cfg.ode_tol,
                      "z = " + join(zs, ';')});
  }
  {
    Check c{"cross_check", 0.0, cfg.cross_tol, false, "z = " + join(zs, ';')};
    try {
      c.value = cross_check(an, zs, opts);
      c.passed = c.value <= cfg.cross_tol;
    } catch (const DomainError& e) {
      c.value = std::numeric_limits<double>::quiet_NaN();
      c.detail = e.what();
    }
    checks.push_back(c);
  }

  std::optional<std::string> first_failure;
  for (const auto& c : checks) {
    if (!c.passed && !first_failure) first_failure = c.name;
  }

  if (cfg.format == "csv") {
    out << io::csv_line({"check", "value", "tolerance", "passed"});
    for (const auto& c : checks) {
      out << io::csv_line({c.name, format_number(c.value), format_number(c.tolerance),
                           c.passed ? "true" : "false"});
    }
  } else {
    Json arr = Json::array();
    for (const auto& c : checks) {
      arr.push_back(Json{{"name", c.name},
                         {"value", io::number(c.value)},
                         {"tolerance", c.tolerance},
                         {"passed", c.passed},
                         {"detail", c.detail}});
    }
    Json doc{{"command", "verify"},
             {"params", io::to_json(an.params.raw())},
             {"e", an.e_list},
             {"checks", arr},
             {"first_failure", first_failure ? Json(*first_failure) : Json(nullptr)},
             {"passed", !first_failure.has_value()},
             {"tolerances", tolerances_json(cfg)}};
    out << doc.dump(2) << '\n';
  }
  return first_failure ? kNoSolution : kOk;
}

void add_params(CLI::App* sub, Config& cfg) {
  sub->add_option("--params", cfg.params_file, "JSON file with a, q, alpha, beta, gamma, delta, epsilon")
      ->required();
}

void add_e(CLI::App* sub, Config& cfg) {
  sub->add_option("--e", cfg.e_text, "comma-separated e_1..e_N (empty for N = 0)");
}

void add_series(CLI::App* sub, Config& cfg) {
  sub->add_option("--rel-tol", cfg.rel_tol, "relative tolerance of the series")
      ->check(CLI::PositiveNumber);
  sub->add_option("--max-terms", cfg.max_terms, "maximum number of expansion terms")
      ->check(CLI::PositiveNumber);
  sub->add_option("--z-guard", cfg.z_guard, "largest |z| accepted")->check(CLI::Range(0.0, 1.0));
}

void add_format(CLI::App* sub, Config& cfg, const std::string& def) {
  sub->add_option("--format", cfg.format, "output format (default " + def + ")")
      ->check(CLI::IsMember({"json", "csv"}));
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"heunx: two-term hypergeometric expansions of the general Heun equation"};
  app.require_subcommand(1);
  Config cfg;

  auto* reduce = app.add_subcommand("reduce", "find q and e_1..e_N giving a two-term recurrence");
  add_params(reduce, cfg);
  reduce->add_option("--n", cfg.N, "number of auxiliary parameters N")->required();
  reduce->add_flag("--force-general", cfg.force_general, "use the Newton solver for N <= 2 too");
  reduce->add_option("--identity-tol", cfg.identity_tol, "collocation tolerance");
  reduce->add_option("--a-top-tol", cfg.a_top_tol, "tolerance on the leading identity coefficient");
  add_format(reduce, cfg, "json");

  auto* coeffs = app.add_subcommand("coeffs", "print expansion coefficients c_0..c_nmax");
  add_params(coeffs, cfg);
  add_e(coeffs, cfg);
  coeffs->add_option("--n-max", cfg.n_max, "last coefficient index")->capture_default_str();
  coeffs->add_option("--source", cfg.source, "closed, ratio or three-term")
      ->check(CLI::IsMember({"closed", "ratio", "three-term"}))
      ->capture_default_str();
  add_format(coeffs, cfg, "csv");

  auto* eval = app.add_subcommand("eval", "evaluate u, u', u'' at the given points");
  add_params(eval, cfg);
  add_e(eval, cfg);
  eval->add_option("--z", cfg.z_text, "comma-separated evaluation points")->required();
  add_series(eval, cfg);
  add_format(eval, cfg, "csv");

  auto* residual = app.add_subcommand("residual", "residual of the Heun equation at the given points");
  add_params(residual, cfg);
  add_e(residual, cfg);
  residual->add_option("--z", cfg.z_text, "comma-separated evaluation points")->required();
  add_series(residual, cfg);
  add_format(residual, cfg, "csv");

  auto* verify = app.add_subcommand("verify", "run all certification checks");
  add_params(verify, cfg);
  add_e(verify, cfg);
  verify->add_option("--z", cfg.z_text, "comma-separated points (default 0.1,0.25,0.4)");
  verify->add_option("--n", cfg.N, "derive e_1..e_N with reduce when --e is absent");
  verify->add_option("--case", cfg.case_index, "which reduction case to verify when using --n");
  verify->add_flag("--force-general", cfg.force_general, "use the Newton solver for N <= 2 too");
  verify->add_option("--identity-tol", cfg.identity_tol, "collocation tolerance");
  verify->add_option("--a-top-tol", cfg.a_top_tol, "tolerance on the leading identity coefficient");
  verify->add_option("--recurrence-tol", cfg.recurrence_tol, "three-term residual tolerance");
  verify->add_option("--ode-tol", cfg.ode_tol, "ODE residual tolerance");
  verify->add_option("--cross-tol", cfg.cross_tol, "Frobenius cross-check tolerance");
  add_series(verify, cfg);
  add_format(verify, cfg, "json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInvalidInput;
  }

  if (cfg.format.empty()) cfg.format = (*reduce || *verify) ? "json" : "csv";

  try {
    if (*reduce) return cmd_reduce(cfg, out, err);
    if (*coeffs) return cmd_coeffs(cfg, out);
    if (*eval) return cmd_eval(cfg, out, false);
    if (*residual) return cmd_eval(cfg, out, true);
    if (*verify) return cmd_verify(cfg, out, err);
  } catch (const InvalidParams& e) {
    err << "heunx: invalid parameters:\n";
    for (const auto& i : e.issues()) err << "  " << to_string(i.code) << ": " << i.detail << '\n';
    return kInvalidInput;
  } catch (const io::InputError& e) {
    err << "heunx: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const PreconditionViolation& e) {
    err << "heunx: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const DomainError& e) {
    err << "heunx: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const SingularPoint& e) {
    err << "heunx: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const PoleError& e) {
    err << "heunx: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const std::exception& e) {
    err << "heunx: numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  }
  return kInvalidInput;
}

}  // namespace heun::cli
