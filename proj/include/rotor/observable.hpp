#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "rotor/numeric.hpp"

namespace rotor {

// f(x) = sum_m b_m h(x + beta_m), h(x) = {x} - 1/2.
struct SawtoothCombo {
  std::vector<Rational> b;     // non-zero
  std::vector<Rational> beta;  // distinct, in [0, 1)

  // Throws DomainError on length mismatch, zero b, repeated or out-of-range beta.
  void validate() const;
  std::size_t d() const { return b.size(); }

  static SawtoothCombo sawtooth();  // f = h
  // {"b":[...], "beta":["p/q", ...]}; numbers or strings accepted on input.
  static SawtoothCombo from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

// Right-continuous: at a jump the value is the right limit.
Rational eval(const SawtoothCombo& f, const Rational& x);
// 2 * sum |b_m|
Rational variation(const SawtoothCombo& f);
// sum |b_m|; the slope bound and total jump size
Rational lipschitz_constant(const SawtoothCombo& f);
// {-beta_m mod 1}, sorted
std::vector<Rational> discontinuities(const SawtoothCombo& f);

// D(gamma) = 1/2 sum_{m,m'} b_m b_m' cos 2 pi (gamma_m - gamma_m')
double d_value(const std::vector<double>& b, const std::vector<double>& gamma);
// D(beta_1 n, ..., beta_d n); phases reduced exactly before the cosine.
double d_value(const SawtoothCombo& f, const BigInt& n);
double d_value(const SawtoothCombo& f, std::int64_t n);

// D(beta n) is periodic in n with this period (lcm of the beta denominators).
BigInt d_period(const SawtoothCombo& f);
double max_d(const SawtoothCombo& f, std::int64_t n_max);
// Half the maximum of D(beta n) over n <= 1000.
double default_eps0(const SawtoothCombo& f);
bool in_n_set(const SawtoothCombo& f, const BigInt& n, double eps0);

// Exact ||f||_2^2 from the autocorrelation of h:
// int h(x) h(x+t) dx = 1/12 - {t}(1-{t})/2.
Rational l2_norm_sq(const SawtoothCombo& f);
// (1/pi^2) sum_{n<=N} D(beta n)/n^2, with the tail bound (sum |b|)^2/N.
struct SeriesValue {
  double value;
  double tail_bound;
};
SeriesValue l2_norm_sq_series(const SawtoothCombo& f, std::int64_t N);

struct SyndeticReport {
  double eps0 = 0;
  std::int64_t n_max = 0;
  std::vector<std::int64_t> members;  // n <= n_max with D(beta n) > eps0
  std::int64_t max_gap = 0;           // includes the leading gap from 0
  double lower_density_estimate = 0;  // |members| / n_max
  BigInt period;                      // membership is periodic with this period
  SawtoothCombo f;

  // Exact membership for any n (uses periodicity when n > n_max).
  bool contains(const BigInt& n) const;
  nlohmann::json to_json() const;
  // Two columns: n, D(beta n) for every n <= n_max.
  std::string to_csv() const;
};

// Throws EmptySetError when no n <= n_max qualifies.
SyndeticReport syndetic_scan(const SawtoothCombo& f, double eps0, std::int64_t n_max);
SyndeticReport syndetic_scan_serial(const SawtoothCombo& f, double eps0, std::int64_t n_max);

}  // namespace rotor
