#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace rotor {

using BigInt = mpz_class;
using Rational = mpq_class;

// Accepts "p/q", "-p/q", integers and plain decimals ("0.3", "-1.25e-2").
// Decimals are converted exactly (0.3 -> 3/10).
Rational parse_rational(std::string_view text);
BigInt parse_bigint(std::string_view text);

// Always "p/q", also for integers ("3/1").
std::string to_string(const Rational& r);
std::string to_string(const BigInt& n);

BigInt floor_of(const Rational& r);
BigInt ceil_of(const Rational& r);
// Fractional part {r} in [0, 1).
Rational frac(const Rational& r);
BigInt floor_div(const BigInt& a, const BigInt& b);
BigInt mod_floor(const BigInt& a, const BigInt& b);
BigInt lcm(const BigInt& a, const BigInt& b);
BigInt pow2(unsigned e);

// sum_{i=0}^{n-1} floor((a*i + b) / m), for m > 0, n >= 0 and any sign of a, b.
// Euclid-like recursion, O(log m) big-integer steps.
BigInt floor_sum(const BigInt& n, const BigInt& m, const BigInt& a, const BigInt& b);

// Deterministic num/den -> double (not correctly rounded, but a pure function
// of its arguments).
double ratio_to_double(const BigInt& num, const BigInt& den);
double to_double(const Rational& r);

// Exact rational value of a finite double.
Rational exact_rational(double v);

}  // namespace rotor
