#include "heun/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

namespace heun::io {

namespace {

struct Key {
  const char* name;
  std::optional<double> ParamsInput::*field;
};

constexpr std::array<Key, 7> kKeys{{
    {"a", &ParamsInput::a},
    {"q", &ParamsInput::q},
    {"alpha", &ParamsInput::alpha},
    {"beta", &ParamsInput::beta},
    {"gamma", &ParamsInput::gamma},
    {"delta", &ParamsInput::delta},
    {"epsilon", &ParamsInput::epsilon},
}};

double value_or_throw(const std::optional<double>& v, const char* name,
                      std::vector<std::string>& missing) {
  if (!v) {
    missing.emplace_back(name);
    return 0.0;
  }
  return *v;
}

void throw_missing(const std::vector<std::string>& missing) {
  if (missing.empty()) return;
  std::string msg = "params: missing key(s):";
  for (const auto& k : missing) msg += " " + k;
  throw InputError(msg);
}

}  // namespace

ParamsInput parse_params_json(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InputError(std::string("params: invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw InputError("params: top-level value must be an object");

  ParamsInput in;
  for (const auto& [key, value] : doc.items()) {
    const Key* match = nullptr;
    for (const auto& k : kKeys) {
      if (key == k.name) match = &k;
    }
    if (!match) throw InputError("params: unknown key \"" + key + "\"");
    if (!value.is_number()) throw InputError("params: \"" + key + "\" must be a number");
    const double v = value.get<double>();
    if (!std::isfinite(v)) throw InputError("params: \"" + key + "\" must be finite");
    in.*(match->field) = v;
  }
  return in;
}

ParamsInput read_params_file(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw InputError("params: cannot open " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_params_json(ss.str());
}

HeunParams require_full(const ParamsInput& in) {
  std::vector<std::string> missing;
  HeunParams p;
  p.a = value_or_throw(in.a, "a", missing);
  p.q = value_or_throw(in.q, "q", missing);
  p.alpha = value_or_throw(in.alpha, "alpha", missing);
  p.beta = value_or_throw(in.beta, "beta", missing);
  p.gamma = value_or_throw(in.gamma, "gamma", missing);
  p.delta = value_or_throw(in.delta, "delta", missing);
  p.epsilon = value_or_throw(in.epsilon, "epsilon", missing);
  throw_missing(missing);
  return p;
}

PartialParams require_partial(const ParamsInput& in, std::optional<double> fill_delta) {
  std::vector<std::string> missing;
  PartialParams p;
  p.a = value_or_throw(in.a, "a", missing);
  p.alpha = value_or_throw(in.alpha, "alpha", missing);
  p.beta = value_or_throw(in.beta, "beta", missing);
  p.gamma = value_or_throw(in.gamma, "gamma", missing);
  p.epsilon = value_or_throw(in.epsilon, "epsilon", missing);
  if (in.delta) {
    p.delta = *in.delta;
  } else if (fill_delta) {
    p.delta = *fill_delta;
  } else {
    missing.emplace_back("delta");
  }
  throw_missing(missing);
  return p;
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), res.ptr);
}

std::vector<double> parse_number_list(std::string_view text) {
  std::vector<double> out;
  if (text.empty()) return out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = std::min(text.find(',', start), text.size());
    std::string_view item = text.substr(start, comma - start);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (!item.empty() && item.front() == '+') item.remove_prefix(1);
    double v = 0.0;
    const auto res = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || res.ec != std::errc() || res.ptr != item.data() + item.size() ||
        !std::isfinite(v)) {
      throw InputError("cannot parse \"" + std::string(item) + "\" as a number");
    }
    out.push_back(v);
    start = comma + 1;
  }
  return out;
}

std::string csv_line(const std::vector<std::string>& fields) {
  std::string line;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) line += ',';
    line += fields[i];
  }
  line += '\n';
  return line;
}

Json number(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

Json to_json(const HeunParams& p) {
  return Json{{"a", number(p.a)},         {"q", number(p.q)},
              {"alpha", number(p.alpha)}, {"beta", number(p.beta)},
              {"gamma", number(p.gamma)}, {"delta", number(p.delta)},
              {"epsilon", number(p.epsilon)}};
}

Json to_json(const ConstraintReport& r) {
  Json values = Json::array(), points = Json::array(), a = Json::array();
  for (double v : r.collocation_points) points.push_back(number(v));
  for (double v : r.identity_values) values.push_back(number(v));
  for (double v : r.extracted_A) a.push_back(number(v));
  return Json{{"points", points},
              {"values", values},
              {"A", a},
              {"A_top", number(r.a_top)},
              {"A_top_expected", number(r.a_top_expected)},
              {"tolerance", number(r.tolerance_used)},
              {"A_top_tolerance", number(r.a_top_tolerance_used)},
              {"passed", r.passed}};
}

Json to_json(const ReductionCase& rc) {
  Json e = Json::array();
  for (double v : rc.e_list()) e.push_back(number(v));
  return Json{{"N", rc.N()},
              {"q", number(rc.q())},
              {"e", e},
              {"q_root_index", rc.q_root_index()},
              {"params", to_json(rc.params().raw())},
              {"report", to_json(rc.report())}};
}

Json to_json(const SearchIssue& issue) {
  return Json{{"code", to_string(issue.code)}, {"detail", issue.detail}};
}

Json to_json(const ValidationIssue& issue) {
  return Json{{"code", to_string(issue.code)},
              {"detail", issue.detail},
              {"offending_value", number(issue.offending_value)}};
}

Json to_json(const EvalResult& r) {
  return Json{{"value", number(r.value)},
              {"terms_used", r.terms_used},
              {"tail_estimate", number(r.tail_estimate)},
              {"status", to_string(r.status)}};
}

}  // namespace heun::io
