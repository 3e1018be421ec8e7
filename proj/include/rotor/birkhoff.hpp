#pragma once

#include <cstdint>
#include <vector>

#include "json.hpp"

#include "rotor/cf_core.hpp"
#include "rotor/numeric.hpp"
#include "rotor/observable.hpp"

namespace rotor {

// alpha replaced by the convergent P/Q = p_K/q_K, with |alpha - P/Q| <= slack.
struct AlphaContext {
  CfDigits digits;
  std::size_t K = 0;
  BigInt P, Q;
  BigInt n_max;
  BigInt guard;
  Rational slack;                 // 1/(q_K q_{K+1}); 0 when alpha = P/Q exactly
  std::vector<Convergent> conv;   // (p_j, q_j) for j <= K

  const BigInt& q(std::size_t j) const;
  Rational surrogate() const { return Rational(P, Q); }
  nlohmann::json to_json() const;
};

inline BigInt default_guard() { return pow2(32); }

// Smallest K with q_K >= guard * n_max and a_{K+1} known. An exact rational
// alpha is used as its own surrogate (slack 0).
AlphaContext make_context(const CfDigits& d, const BigInt& n_max, const BigInt& guard = default_guard());

struct SumResult {
  Rational value;        // S_n under the surrogate
  Rational error_bound;  // >= |S_n(alpha, x) - value|
  BigInt crossings_possible;

  nlohmann::json to_json() const;
  bool operator==(const SumResult&) const = default;
};

// Exact x with denominator 2^64 drawn from a per-(seed, index) stream.
Rational random_x(std::uint64_t seed, std::uint64_t index);
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

// Direct enumeration with rational arithmetic; the reference route.
SumResult sum_naive(const SawtoothCombo& f, const AlphaContext& ctx, const Rational& x, const BigInt& n);
// Floor-sum closed form; O(d log Q) big-integer operations for any n.
SumResult sum_fast(const SawtoothCombo& f, const AlphaContext& ctx, const Rational& x, const BigInt& n);

// C n^2 slack + sum_m |b_m| * (orbit points k in [1, n) of shift m within n*slack
// of a discontinuity); `per_shift_counts` has one entry per term of f.
Rational error_bound_from(const SawtoothCombo& f, const AlphaContext& ctx, const BigInt& n,
                          const std::vector<BigInt>& per_shift_counts);

// Walks S_n, S_{n+1}, ... on the surrogate in exact integer arithmetic.
class SurrogateOrbit {
 public:
  SurrogateOrbit(const SawtoothCombo& f, const AlphaContext& ctx, const Rational& x, const BigInt& start = 0);

  const BigInt& n() const { return n_; }
  Rational value() const;       // S_n
  double value_double() const;  // S_n rounded
  void step();                  // n -> n + 1

 private:
  BigInt M_, delta_, E_, n_;
  std::vector<BigInt> c_;  // b_m = c_m / E
  std::vector<BigInt> j_;  // (B_m + n Delta) mod M
  BigInt T_;               // S_n = T / (2 M E)
  BigInt scale_;           // 2 M E
};

// S_{q_{n_index}}(x)
SumResult mu(const SawtoothCombo& f, const AlphaContext& ctx, const Rational& x, std::size_t n_index);

struct PrefixBound {
  Rational empirical_max;  // max_{0 <= r <= q_n} |S_r| on the surrogate
  BigInt argmax;
  Rational bound;          // V(f) (a_1 + ... + a_n)
  bool holds = false;
};
PrefixBound max_prefix_bound(const SawtoothCombo& f, const AlphaContext& ctx, const Rational& x, std::size_t n_index,
                             const BigInt& budget = BigInt(10000000));

struct DriftReport {
  bool holds = false;
  std::vector<Rational> deviation;  // |S_{l q_n} - l mu_n| for l = 0..k
  std::vector<Rational> allowed;    // C_1 l^2 / c
  std::size_t worst = 0;            // l with the largest deviation / allowed ratio
};
// Requires c > 1 and q_{n+1} > c q_n; C_1 = C/2 with C = sum |b_m|.
DriftReport block_drift_check(const SawtoothCombo& f, const AlphaContext& ctx, const Rational& x, std::size_t n_index,
                              std::size_t k, const Rational& c);

}  // namespace rotor
