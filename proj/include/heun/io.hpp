#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "heun/core.hpp"
#include "heun/errors.hpp"
#include "heun/reduction.hpp"
#include "heun/special.hpp"

namespace heun::io {

using Json = nlohmann::ordered_json;

/// Malformed or incomplete user input (maps to CLI exit code 2).
class InputError : public Error {
 public:
  using Error::Error;
};

/// Parameter object as read from JSON; any key may be absent.
struct ParamsInput {
  std::optional<double> a, q, alpha, beta, gamma, delta, epsilon;
};

/// Parses {"a","q","alpha","beta","gamma","delta","epsilon"}. Unknown keys,
/// non-numeric values and non-object documents raise InputError.
[[nodiscard]] ParamsInput parse_params_json(std::string_view text);
[[nodiscard]] ParamsInput read_params_file(const std::filesystem::path& path);

/// All seven parameters; InputError names every missing key.
[[nodiscard]] HeunParams require_full(const ParamsInput& in);

/// Parameters without q; InputError names every missing key. delta may be
/// missing when fill_delta is given.
[[nodiscard]] PartialParams require_partial(const ParamsInput& in,
                                            std::optional<double> fill_delta = std::nullopt);

/// Shortest decimal string that round-trips; "nan", "inf", "-inf" otherwise.
[[nodiscard]] std::string format_number(double x);

/// Comma-separated list of numbers ("0.1,0.25"); empty text gives an empty list.
[[nodiscard]] std::vector<double> parse_number_list(std::string_view text);

[[nodiscard]] std::string csv_line(const std::vector<std::string>& fields);

[[nodiscard]] Json to_json(const HeunParams& p);
[[nodiscard]] Json to_json(const ConstraintReport& r);
[[nodiscard]] Json to_json(const ReductionCase& rc);
[[nodiscard]] Json to_json(const SearchIssue& issue);
[[nodiscard]] Json to_json(const ValidationIssue& issue);
[[nodiscard]] Json to_json(const EvalResult& r);

/// JSON number, or null for non-finite values.
[[nodiscard]] Json number(double x);

}  // namespace heun::io
