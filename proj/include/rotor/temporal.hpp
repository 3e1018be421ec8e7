#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rotor/birkhoff.hpp"

namespace rotor {

// S_1, ..., S_N at a fixed x, stored as doubles once every certified error
// bound is below 2^-40.
struct TemporalEnsemble {
  std::vector<double> values;  // values[n-1] = S_n
  BigInt N;
  Rational x;
  Rational max_error_bound;  // certified bound valid for every S_n, n <= N
  std::uint64_t seed = 0;
  std::string alpha_digest;  // K, P/Q of the surrogate
  nlohmann::json observable;

  double mean() const;
};

// Error bound threshold for storing ensemble values as doubles.
Rational ensemble_resolution();

TemporalEnsemble ensemble(const SawtoothCombo& f, const AlphaContext& ctx, const Rational& x, std::int64_t N);
TemporalEnsemble ensemble_serial(const SawtoothCombo& f, const AlphaContext& ctx, const Rational& x, std::int64_t N);

class TargetLaw {
 public:
  enum class Kind { Uniform01, Gaussian, UniformConv };
  explicit TargetLaw(Kind k) : kind_(k) {}
  static TargetLaw uniform() { return TargetLaw(Kind::Uniform01); }
  static TargetLaw gaussian() { return TargetLaw(Kind::Gaussian); }
  static TargetLaw uniform_conv() { return TargetLaw(Kind::UniformConv); }

  Kind kind() const { return kind_; }
  std::string name() const;
  double cdf(double z) const;
  double quantile(double p) const;  // 0 < p < 1

 private:
  Kind kind_;
};

enum class Side { Plus, Minus };

// Order-statistic form of chi+ = inf{xi : P(X <= xi) > t} and
// chi- = sup{xi : P(X <= xi) < t}; `sorted` must be ascending.
double percentile_sorted(const std::vector<double>& sorted, const Rational& t, Side side);
double percentile(std::vector<double> sample, const Rational& t, Side side);
// For the continuous, strictly increasing laws both sides equal the quantile.
double percentile(const TargetLaw& law, const Rational& t, Side side);

struct StarNormalization {
  double A = 0;
  double B = 0;
  bool degenerate = false;  // chi+(S, t2) == chi-(S, t1): no scaling detected
};

StarNormalization normalize_star(const std::vector<double>& values, const TargetLaw& law,
                                 const Rational& t1 = Rational(1, 3), const Rational& t2 = Rational(2, 3));
StarNormalization normalize_star_sorted(const std::vector<double>& sorted, const TargetLaw& law,
                                        const Rational& t1 = Rational(1, 3), const Rational& t2 = Rational(2, 3));

// sup |F_emp((S - A)/B) - F_law|; throws DomainError for B <= 0.
double ks_distance(const std::vector<double>& values, const TargetLaw& law, double A, double B);
double ks_distance_sorted(const std::vector<double>& sorted, const TargetLaw& law, double A, double B);

struct ScheduleEntry {
  std::size_t k = 0;
  std::size_t n_k = 0;
  BigInt L_k;   // a_0 + ... + a_{n_k}
  BigInt q_nk;
  BigInt N_k;   // k L_k q_{n_k}
  BigInt r_k;
  Rational mu;  // S_{q_{n_k}}(x)
  Rational B_k; // k L_k |mu|
  Rational A_k; // (sgn(mu) - 1) B_k / 2

  nlohmann::json to_json() const;
};

// Throws BadSampleError when |mu| < eps1 (or mu == 0), HorizonError when
// N_k exceeds the context.
ScheduleEntry schedule_thm_uniform(const SawtoothCombo& f, const AlphaContext& ctx, const Rational& x, std::size_t k,
                                   std::size_t n_k, const BigInt& r_k = BigInt(1), const Rational& eps1 = Rational(0));

// n = l q + r with 0 <= r < q
std::pair<BigInt, BigInt> lr_decompose(const BigInt& n, const BigInt& q);

struct ScanRow {
  std::int64_t N = 0;
  StarNormalization star;  // against U[0,1]
  double ks_u01 = 0, ks_gauss = 0, ks_conv = 0;
};

// Each KS column uses the star normalization for its own law.
std::vector<ScanRow> scan_tdlt(const SawtoothCombo& f, const AlphaContext& ctx, const Rational& x,
                               const std::vector<std::int64_t>& grid);
std::vector<ScanRow> scan_values(const std::vector<double>& values, const std::vector<std::int64_t>& grid);
std::string scan_csv(const std::vector<ScanRow>& rows);

// "geometric:1e3:1e6:1.5", "linear:100:1000:100" or "list:10,20,40".
std::vector<std::int64_t> parse_grid(const std::string& spec);

// Fixed-width bins of (S - A)/B over [lo, hi): bin_lo,bin_hi,count,density.
std::string histogram_csv(const std::vector<double>& values, double A, double B, double lo, double hi, int bins);

}  // namespace rotor
