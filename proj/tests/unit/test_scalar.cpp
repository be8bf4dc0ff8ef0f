#include <doctest.h>

#include "parrondo/errors.hpp"
#include "parrondo/scalar.hpp"

using namespace parrondo;

TEST_CASE("decimals parse exactly into rationals") {
  CHECK(parse_scalar<Rational>("0.16") == Rational(4, 25));
  CHECK(parse_scalar<Rational>("4/25") == Rational(4, 25));
  CHECK(parse_scalar<Rational>("7/10") == parse_scalar<Rational>("0.7"));
  CHECK(parse_scalar<Rational>("1e-3") == Rational(1, 1000));
  CHECK(parse_scalar<Rational>("-2.5E1") == Rational(-25));
  CHECK(parse_scalar<Rational>("1") == Rational(1));
  CHECK(parse_scalar<Rational>(".5") == Rational(1, 2));
}

TEST_CASE("double parsing") {
  CHECK(parse_scalar<double>("0.16") == 0.16);
  CHECK(parse_scalar<double>("4/25") == doctest::Approx(0.16).epsilon(1e-16));
  CHECK(parse_scalar<double>("1e7") == 1e7);
}

TEST_CASE("malformed numbers are rejected") {
  CHECK_THROWS_AS(parse_scalar<Rational>("abc"), ContractViolation);
  CHECK_THROWS_AS(parse_scalar<Rational>("1/0"), ContractViolation);
  CHECK_THROWS_AS(parse_scalar<Rational>(""), ContractViolation);
  CHECK_THROWS_AS(parse_scalar<double>("0.1x"), ContractViolation);
  CHECK_THROWS_AS(parse_scalar<Rational>("1.2.3"), ContractViolation);
}

TEST_CASE("fraction literal detection") {
  CHECK(is_fraction_literal("4/25"));
  CHECK(is_fraction_literal(" 17/25 "));
  CHECK_FALSE(is_fraction_literal("0.16"));
  CHECK_FALSE(is_fraction_literal("1"));
}

TEST_CASE("to_double rounds to nearest") {
  CHECK(to_double(Rational(101, 200)) == 0.505);
  CHECK(to_double(Rational(1, 10)) == 0.1);
  CHECK(to_double(Rational(-7, 10)) == -0.7);
  CHECK(to_double(Rational(2, 3)) == 2.0 / 3.0);
  CHECK(to_double(Rational(0)) == 0.0);
}

TEST_CASE("shortest round-trip formatting") {
  for (double x : {0.1, 1.0 / 3.0, -0.00695878602855347, 1e-300, 123456789.0}) {
    CHECK(parse_scalar<double>(format_shortest(x)) == x);
  }
  CHECK(format_shortest(0.5) == "0.5");
}

TEST_CASE("six significant digits") {
  CHECK(format_significant(0.004662318899457625) == "0.00466232");
  CHECK(format_significant(-0.0066748908440814065) == "-0.00667489");
  CHECK(format_significant(0.0035222) == "0.00352220");
  CHECK(format_significant(0.0137926) == "0.0137926");
  CHECK(format_significant(0.0) == "0");
  CHECK(format_significant(0.0999999999) == "0.100000");
  CHECK(format_significant(123.4567891) == "123.457");
}
