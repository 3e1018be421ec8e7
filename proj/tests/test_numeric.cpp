#include "doctest.h"

#include <random>

#include "rotor/errors.hpp"
#include "rotor/numeric.hpp"

using namespace rotor;

TEST_CASE("parse_rational accepts fractions, integers and decimals") {
  CHECK(parse_rational("3/4") == Rational(3, 4));
  CHECK(parse_rational("-6/8") == Rational(-3, 4));
  CHECK(parse_rational("7") == Rational(7));
  CHECK(parse_rational("0.3") == Rational(3, 10));
  CHECK(parse_rational("-1.25e-2") == Rational(-1, 80));
  CHECK(parse_rational(".5") == Rational(1, 2));
  CHECK_THROWS_AS(parse_rational("1/0"), DomainError);
  CHECK_THROWS_AS(parse_rational("abc"), DomainError);
  CHECK_THROWS_AS(parse_rational("1.2.3"), DomainError);
}

TEST_CASE("to_string always prints p/q") {
  CHECK(to_string(Rational(3)) == "3/1");
  CHECK(to_string(Rational(-2, 6)) == "-1/3");
}

TEST_CASE("frac and floor helpers") {
  CHECK(frac(Rational(7, 3)) == Rational(1, 3));
  CHECK(frac(Rational(-1, 3)) == Rational(2, 3));
  CHECK(frac(Rational(2)) == 0);
  CHECK(floor_of(Rational(-7, 2)) == -4);
  CHECK(ceil_of(Rational(-7, 2)) == -3);
  CHECK(mod_floor(BigInt(-7), BigInt(3)) == 2);
}

TEST_CASE("floor_sum matches direct summation") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 2000; ++trial) {
    long n = static_cast<long>(rng() % 60);
    long m = 1 + static_cast<long>(rng() % 50);
    long a = static_cast<long>(rng() % 201) - 100;
    long b = static_cast<long>(rng() % 201) - 100;
    BigInt direct = 0;
    for (long i = 0; i < n; ++i) direct += floor_div(BigInt(a * i + b), BigInt(m));
    CHECK(floor_sum(n, m, a, b) == direct);
  }
}

TEST_CASE("floor_sum handles huge operands") {
  BigInt m = pow2(200) + 1, a = pow2(199) + 12345, b = pow2(150);
  BigInt n = 1000;
  BigInt direct = 0;
  for (long i = 0; i < 1000; ++i) direct += floor_div(a * i + b, m);
  CHECK(floor_sum(n, m, a, b) == direct);
}

TEST_CASE("ratio_to_double and exact_rational") {
  CHECK(ratio_to_double(1, 4) == 0.25);
  CHECK(ratio_to_double(pow2(3000) / 3, pow2(3000)) == doctest::Approx(1.0 / 3));
  CHECK(exact_rational(0.375) == Rational(3, 8));
}
