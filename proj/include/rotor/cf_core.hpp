#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "rotor/numeric.hpp"

namespace rotor {

// Partial quotients a_1, a_2, ... of alpha = [0; a_1, a_2, ...].
//
// Three flavours: a finite exact expansion (alpha rational, canonical form),
// a finite known prefix of an irrational number, and a prefix followed by a
// pure generator `tail(i)` producing a_i for i past the prefix. The generator
// must be deterministic and thread-safe; nothing is cached.
class CfDigits {
 public:
  using Tail = std::function<BigInt(std::size_t)>;
  static constexpr std::size_t kUnbounded = std::numeric_limits<std::size_t>::max();

  CfDigits() = default;  // alpha = 0, exact

  // Rational alpha. Accepts both forms ([..., a, 1] folds into [..., a+1]).
  static CfDigits exact(std::vector<BigInt> digits);
  // Known prefix of an irrational number; the horizon is the prefix length.
  static CfDigits prefix(std::vector<BigInt> digits);
  // Prefix followed by tail(i) for every i > prefix.size(), up to `horizon`.
  static CfDigits lazy(std::vector<BigInt> prefix, Tail tail, std::size_t horizon = kUnbounded);

  // 1-based; throws HorizonError past the available digits.
  BigInt a(std::size_t i) const;
  bool has(std::size_t i) const { return i >= 1 && i <= available(); }
  std::size_t available() const { return tail_ ? horizon_ : digits_.size(); }
  bool finite_exact() const { return exact_; }
  const std::vector<BigInt>& materialized() const { return digits_; }
  // First n digits as a vector (n <= available()).
  std::vector<BigInt> take(std::size_t n) const;
  // Copy with the first n digits only, as a non-exact prefix.
  CfDigits truncated(std::size_t n) const;

  // JSON array of decimal strings. Lazy sequences serialize `n` digits.
  nlohmann::json to_json(std::size_t n = kUnbounded) const;
  // Accepts strings or integers; every digit must be >= 1. `exact` marks a
  // rational alpha. Errors name the offending index as "[i]".
  static CfDigits from_json(const nlohmann::json& j, bool exact = false);

 private:
  std::vector<BigInt> digits_;
  Tail tail_;
  std::size_t horizon_ = 0;
  bool exact_ = true;
};

struct Convergent {
  BigInt p;
  BigInt q;
  std::size_t index = 0;
};

struct RationalInterval {
  Rational lo;
  Rational hi;
  bool lo_closed = true;
  bool hi_closed = true;

  static RationalInterval closed(Rational a, Rational b);  // orders a, b
  static RationalInterval open(Rational a, Rational b);
  Rational measure() const { return hi - lo; }
  bool contains(const Rational& x) const;
  bool empty() const;
  std::string to_string() const;
};

struct OstrowskiRep {
  std::vector<BigInt> b;  // b[j] multiplies q_j
};

// [[p_{n-1}, p_n], [q_{n-1}, q_n]]; the identity for n = 0.
using Mat2 = std::array<std::array<BigInt, 2>, 2>;
Mat2 mat_mul(const Mat2& x, const Mat2& y);
BigInt det(const Mat2& m);

CfDigits expand_rational(const BigInt& num, const BigInt& den);
Rational value_of(const CfDigits& d);  // exact value of a finite expansion

// (p_0,q_0) .. (p_k,q_k); throws HorizonError when fewer than k digits exist.
std::vector<Convergent> convergents(const CfDigits& d, std::size_t upto);
// Smallest k with q_k >= bound (k <= max_index); throws HorizonError otherwise.
std::size_t first_index_with_q_at_least(const CfDigits& d, const BigInt& bound,
                                        std::size_t max_index = CfDigits::kUnbounded);

// Closed interval between p_k/q_k and p_{k+1}/q_{k+1}. For an exact expansion
// of length K, k = K gives the single point alpha.
RationalInterval enclosure(const CfDigits& d, std::size_t k);

OstrowskiRep ostrowski_encode(const BigInt& n, const CfDigits& d);
BigInt ostrowski_decode(const OstrowskiRep& r, const CfDigits& d);
// Empty string when valid, otherwise a description of the violated constraint.
std::string ostrowski_violation(const OstrowskiRep& r, const CfDigits& d);

struct Cylinder {
  RationalInterval interval;  // open
  Rational measure;           // 1 / (q_l (q_l + q_{l-1}))
};
Cylinder cylinder(const std::vector<BigInt>& prefix);

Mat2 convergent_matrix(const std::vector<BigInt>& digits, std::size_t n);
Mat2 digit_product(const std::vector<BigInt>& digits);  // prod [[0,1],[1,a_i]]

struct GlueResult {
  Mat2 prefix_matrix;
  Mat2 suffix_matrix;
  Mat2 product;
  Mat2 composed;  // convergent matrix of the concatenation
  bool holds = false;
};
GlueResult glue(const std::vector<BigInt>& prefix, const std::vector<BigInt>& suffix);

// If |q alpha - p| <= 1/(q L) returns k with (p, q) = (p_k, q_k); the lemma
// then guarantees a_{k+1} >= L/2, which is checked against d. Refines the
// enclosure up to `max_depth` digits, then throws UndecidableError.
std::optional<std::size_t> best_approx_classify(const BigInt& p, const BigInt& q, const CfDigits& d,
                                                const Rational& L, std::size_t max_depth = 100000);

}  // namespace rotor
