#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"

#include "rotor/birkhoff.hpp"
#include "rotor/cf_core.hpp"
#include "rotor/observable.hpp"

namespace rotor {

// psi(t) = c (ln t)(ln ln t)(ln ln ln t). The triple log is negative below
// t = e^e, so the working function is psi_eff = ln t + c max(0, ...), which is
// positive, continuous and non-decreasing for t > 1.
struct PsiSpec {
  double c = 2.1;

  static double min_c();  // 1 / ln(golden ratio)
  void validate() const;
  double operator()(double t) const;
  double at_exp(double k) const;  // psi(e^k) without forming e^k
  // sum_{k=1}^{K} 1/psi(e^k); grows without bound
  double divergence_partial(int K) const;
};

struct Estimate {
  double mean = 0;
  double stderr_ = 0;  // sample standard deviation / sqrt(n)
  std::uint64_t n_samples = 0;
  std::uint64_t seed = 0;

  // {op, params, mean, stderr, n, seed}
  nlohmann::json to_row(const std::string& op, const nlohmann::json& params) const;
};

// Smallest M with sum_{p >= M} p^-2 < density / 16.
BigInt choose_m(double density);

// ---------------------------------------------------------------- Monte Carlo

// mes{x : |S_{q_n}(x)| >= eps1}, x = random_x(seed, i). Requires r q_n in the
// set for some r <= M (DomainError otherwise).
Estimate mass_above(const SawtoothCombo& f, const AlphaContext& ctx, std::size_t n_index, const Rational& eps1,
                    std::uint64_t n_samples, std::uint64_t seed, const SyndeticReport& nset, const BigInt& M);
Estimate mass_above_serial(const SawtoothCombo& f, const AlphaContext& ctx, std::size_t n_index, const Rational& eps1,
                           std::uint64_t n_samples, std::uint64_t seed, const SyndeticReport& nset, const BigInt& M);

using Schedule = std::function<double(std::uint64_t)>;  // k -> p_k, k >= 1

struct SullivanResult {
  Estimate estimate;     // frequency of "some A_k, k in [k0, horizon], occurs"
  std::uint64_t k0 = 1;  // tail start: largest k0 with sum_{k >= k0} p_k >= 1
  double tail_mass = 0;
  double lower_bound = 0;  // 1 / (2D)
};

// Events are paired (2j-1, 2j) and driven by one uniform per pair so that
// P(A and B) = D P(A) P(B); pairs are independent. D = 1 is independence.
SullivanResult sullivan_sim(const Schedule& p, double D, std::uint64_t horizon, std::uint64_t trials,
                            std::uint64_t seed);
SullivanResult sullivan_sim_serial(const Schedule& p, double D, std::uint64_t horizon, std::uint64_t trials,
                                   std::uint64_t seed);

// ((a_1 + ... + a_{k+1}) - max a_j) / (k ln k)
double diamond_vaaler(const CfDigits& d, std::size_t k);

// ---------------------------------------------------------------- exact

struct CoprimeCount {
  std::int64_t count = 0;   // pairs 0 <= m <= N, 1 <= n <= N, gcd 1, m/n in I
  double asymptotic = 0;    // 3 mes(I) N^2 / pi^2
  double ratio = 0;
};
CoprimeCount coprime_density(std::int64_t N, const RationalInterval& I);
CoprimeCount coprime_density_serial(std::int64_t N, const RationalInterval& I);

struct MultiplicityReport {
  std::size_t K = 0;  // max number of intervals covering a set of positive length
  Rational union_measure;
  Rational sum_measure;
  bool holds = false;  // union >= sum / K
};
MultiplicityReport multiplicity_check(const std::vector<RationalInterval>& intervals);

struct GibbsReport {
  double G = 0;  // max(max ratio, 1 / min ratio) over the family
  double min_ratio = 0, max_ratio = 0;
  std::vector<double> G_by_depth;  // G over blocks of length <= d, d = 1..max_depth
  std::size_t pairs = 0;
};
// mes[[a; b]] / (mes[[a]] mes[[b]]) over all blocks a, b of length 1..max_depth
// with digits 1..max_digit; exact rationals, converted for reporting.
GibbsReport gibbs_probe(std::size_t max_depth = 4, unsigned max_digit = 4);

// A_{m,n,k} = {alpha : |n alpha - m| <= rho_k}, rho_k = 1/(e^k psi(e^k)),
// over (m, n) with n in the set, e^{k-1} <= n <= e^k, 0 < m < n,
// gcd(m, n) <= M and m/n in I. rho_k is replaced by round(rho_k 2^64)/2^64 so
// the union is a finite union of rational intervals; all set decisions are exact.
struct AkMeasure {
  std::size_t k = 0;
  double rho = 0;               // the dyadic radius actually used
  std::uint64_t card_omega = 0; // |Omega_k(I)|
  long double measure = 0;      // mes(A_k(I))
  double lower = 0;             // d(N) mes(I) / (4 M psi(e^k))
  double upper = 0;             // 6 mes(I) / psi(e^k)
  bool bounds_hold = false;     // asymptotic statement, reported only
  bool disjoint_certified = false;  // distinct centres cannot overlap
  std::string route;

  nlohmann::json to_json() const;
};

// Per-denominator route: when overlaps between distinct centres are excluded
// the measure is sum_n phi_I(n) 2 rho / (r_min(n) n), phi_I by Moebius
// inversion. Falls back to the explicit union otherwise.
AkMeasure a_k_measure(const SyndeticReport& nset, const PsiSpec& psi, const BigInt& M, std::size_t k,
                      const RationalInterval& I);
// Oracle: every pair enumerated, explicit sorted union.
AkMeasure a_k_measure_brute(const SyndeticReport& nset, const PsiSpec& psi, const BigInt& M, std::size_t k,
                            const RationalInterval& I);

struct QuasiReport {
  std::size_t k1 = 0, k2 = 0;
  long double joint = 0;  // mes(A_k1 cap A_k2 cap I)
  long double m1 = 0;     // mes(A_k1 cap I)
  long double m2 = 0;     // mes(A_k2 cap I)
  double ratio = 0;       // joint mes(I) / (m1 m2)
  double D = 0;
  bool holds = false;     // ratio <= D
  std::string route;

  nlohmann::json to_json() const;
};

// Requires |k1 - k2| > ln M + 1. A_k2 centres are located near each A_k1
// centre c = u/v through the lattice relation m v - n u = j, |j| small.
QuasiReport quasi_independence(const SyndeticReport& nset, const PsiSpec& psi, const BigInt& M, std::size_t k1,
                               std::size_t k2, const RationalInterval& I, double D = 50);
QuasiReport quasi_independence_brute(const SyndeticReport& nset, const PsiSpec& psi, const BigInt& M, std::size_t k1,
                                     std::size_t k2, const RationalInterval& I, double D = 50);

}  // namespace rotor
