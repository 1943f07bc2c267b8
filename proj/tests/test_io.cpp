#include <doctest.h>

#include <cmath>

#include "heun/io.hpp"

using namespace heun;

TEST_SUITE("io") {
  TEST_CASE("parse a full parameter object") {
    const auto in = io::parse_params_json(
        R"({"a": 2, "q": 4, "alpha": 3, "beta": 2, "gamma": 1, "delta": 2, "epsilon": 3})");
    const auto p = io::require_full(in);
    CHECK(p.a == 2);
    CHECK(p.q == 4);
    CHECK(p.epsilon == 3);
  }

  TEST_CASE("full double precision survives") {
    const auto in = io::parse_params_json(R"({"a": 0.1000000000000000055511151231257827})");
    CHECK(*in.a == 0.1);
  }

  TEST_CASE("unknown keys are rejected") {
    CHECK_THROWS_AS((void)io::parse_params_json(R"({"a": 2, "zeta": 1})"), io::InputError);
  }

  TEST_CASE("malformed input") {
    CHECK_THROWS_AS((void)io::parse_params_json("{"), io::InputError);
    CHECK_THROWS_AS((void)io::parse_params_json("[1, 2]"), io::InputError);
    CHECK_THROWS_AS((void)io::parse_params_json(R"({"a": "2"})"), io::InputError);
  }

  TEST_CASE("missing keys are all named") {
    const auto in = io::parse_params_json(R"({"a": 2, "alpha": 3})");
    try {
      (void)io::require_full(in);
      FAIL("expected InputError");
    } catch (const io::InputError& e) {
      const std::string msg = e.what();
      CHECK(msg.find("q") != std::string::npos);
      CHECK(msg.find("epsilon") != std::string::npos);
    }
  }

  TEST_CASE("q is optional for partial params and delta can be filled") {
    const auto in = io::parse_params_json(R"({"a": 2, "alpha": 3, "beta": 2, "gamma": 1, "epsilon": 3})");
    const auto p = io::require_partial(in, 2.0);
    CHECK(p.delta == 2.0);
    CHECK_THROWS_AS((void)io::require_partial(in), io::InputError);
  }

  TEST_CASE("number formatting round-trips") {
    CHECK(io::format_number(0.5) == "0.5");
    CHECK(io::format_number(0.3) == "0.3");
    CHECK(io::format_number(1e-300) == "1e-300");
    CHECK(io::format_number(-0.0) == "-0");
    CHECK(io::format_number(std::nan("")) == "nan");
    const double x = 0.1 + 0.2;
    CHECK(std::stod(io::format_number(x)) == x);
  }

  TEST_CASE("number lists") {
    CHECK(io::parse_number_list("") == std::vector<double>{});
    CHECK(io::parse_number_list("0.1,0.25, -0.4") == std::vector<double>{0.1, 0.25, -0.4});
    CHECK(io::parse_number_list("+1e-3") == std::vector<double>{1e-3});
    CHECK_THROWS_AS((void)io::parse_number_list("0.1,,0.2"), io::InputError);
    CHECK_THROWS_AS((void)io::parse_number_list("abc"), io::InputError);
    CHECK_THROWS_AS((void)io::parse_number_list("1.5x"), io::InputError);
  }

  TEST_CASE("csv lines") {
    CHECK(io::csv_line({"n", "c_n"}) == "n,c_n\n");
  }
}
