#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "rotor/alpha_builder.hpp"
#include "rotor/errors.hpp"
#include "rotor/measure_lab.hpp"

using namespace rotor;

namespace {

SyndeticReport all_n() { return syndetic_scan(SawtoothCombo::sawtooth(), 0.25, 100); }

SyndeticReport even_n() {
  SawtoothCombo f{{Rational(1), Rational(1)}, {Rational(0), Rational(1, 2)}};
  return syndetic_scan(f, 0.5, 100);
}

bool close_rel(long double a, long double b, long double tol) {
  return std::fabs(a - b) <= tol * std::max(std::fabs(a), std::fabs(b)) + 1e-30L;
}

}  // namespace

TEST_CASE("PsiSpec") {
  PsiSpec psi;
  CHECK_NOTHROW(psi.validate());
  CHECK(PsiSpec::min_c() == doctest::Approx(2.0781).epsilon(1e-4));
  CHECK_THROWS_AS((PsiSpec{2.0}).validate(), DomainError);
  double prev = 0;
  for (double t = 1.01; t < 1e12; t *= 1.07) {
    double v = psi(t);
    CHECK(v > 0);
    CHECK(v >= prev);
    prev = v;
  }
  double ee = std::exp(std::exp(1.0));
  CHECK(psi(ee * (1 + 1e-12)) == doctest::Approx(psi(ee * (1 - 1e-12))));
  CHECK(psi(std::exp(8.0)) == doctest::Approx(8 + 2.1 * 8 * std::log(8.0) * std::log(std::log(8.0))));
  CHECK(psi.at_exp(8.0) == doctest::Approx(psi(std::exp(8.0))));
  CHECK(psi.at_exp(0.5) == doctest::Approx(psi(std::exp(0.5))));
  // sum 1/psi(e^k) diverges: its terms dominate 1/((c+1) k ln k ln ln k),
  // whose sum diverges by the integral test
  double prev_s = 0;
  for (int K : {10, 100, 1000, 100000}) {
    double s = psi.divergence_partial(K);
    CHECK(s > prev_s);
    prev_s = s;
  }
  for (double k = 20; k < 1e9; k *= 1.3)
    CHECK(1.0 / psi.at_exp(k) >= 1.0 / ((psi.c + 1) * k * std::log(k) * std::log(std::log(k))));
  CHECK_THROWS_AS(psi(1.0), DomainError);
}

TEST_CASE("choose_m") {
  CHECK(choose_m(1.0) == 17);
  CHECK(choose_m(0.5) > choose_m(1.0));
  CHECK_THROWS_AS(choose_m(0.0), DomainError);
  // independent tail check: sum_{p >= M} p^-2 by direct summation plus integral tail
  auto tail = [](long M) {
    double s = 0;
    for (long p = M; p < 1000000; ++p) s += 1.0 / (double(p) * double(p));
    return s + 1.0 / 999999.5;
  };
  CHECK(tail(17) < 1.0 / 16);
  CHECK(tail(16) >= 1.0 / 16);
}

TEST_CASE("mass_above") {
  auto h = SawtoothCombo::sawtooth();
  auto ctx = make_context(constant_lazy(1), 1000);
  auto nset = all_n();
  auto e = mass_above(h, ctx, 6, Rational(1, 10), 10000, 7, nset, 1);
  CHECK(e.mean > 0.05);
  CHECK(e.n_samples == 10000);
  CHECK(e.seed == 7);
  CHECK(e.stderr_ == doctest::Approx(std::sqrt(e.mean * (1 - e.mean) * 10000.0 / 9999.0) / 100.0));

  auto ser = mass_above_serial(h, ctx, 6, Rational(1, 10), 2000, 7, nset, 1);
  auto par = mass_above(h, ctx, 6, Rational(1, 10), 2000, 7, nset, 1);
  CHECK(ser.mean == par.mean);
  CHECK(ser.stderr_ == par.stderr_);

  CHECK(mass_above(h, ctx, 6, Rational(0), 500, 1, nset, 1).mean == 1.0);
  for (std::uint64_t s = 0; s < 5; ++s)
    CHECK(mass_above(h, ctx, 6, variation(h) + Rational(1, 100), 500, s, nset, 1).mean == 0.0);

  // q_6 = 13 is odd: the even set needs r = 2
  CHECK_THROWS_AS(mass_above(h, ctx, 6, Rational(1, 10), 10, 0, even_n(), 1), DomainError);
  CHECK_NOTHROW(mass_above(h, ctx, 6, Rational(1, 10), 10, 0, even_n(), 2));

  auto row = e.to_row("mass_above", {{"n_index", 6}});
  for (const char* key : {"op", "params", "mean", "stderr", "n", "seed"}) CHECK(row.contains(key));
}

TEST_CASE("sullivan_sim") {
  auto harmonic = [](std::uint64_t k) { return std::min(0.5, 1.0 / double(k)); };
  auto ind = sullivan_sim(harmonic, 1.0, 10000, 1000, 3);
  CHECK(ind.estimate.mean >= 0.45);
  CHECK(ind.lower_bound == 0.5);
  CHECK(ind.tail_mass >= 1.0);
  CHECK(ind.k0 > 1);
  // independent events: P(no event in the tail) = prod (1 - p_k)
  double none = 1;
  for (std::uint64_t k = ind.k0; k <= 10000; ++k) none *= 1 - harmonic(k);
  CHECK(std::abs(ind.estimate.mean - (1 - none)) <= 4 * ind.estimate.stderr_ + 1e-9);

  auto zero = sullivan_sim([](std::uint64_t) { return 0.0; }, 1.0, 1000, 200, 3);
  CHECK(zero.estimate.mean == 0.0);

  auto coupled = sullivan_sim(harmonic, 2.0, 10000, 1000, 3);
  CHECK(coupled.estimate.mean >= 1.0 / 4 - 0.05);

  auto ser = sullivan_sim_serial(harmonic, 2.0, 2000, 300, 9);
  auto par = sullivan_sim(harmonic, 2.0, 2000, 300, 9);
  CHECK(ser.estimate.mean == par.estimate.mean);

  CHECK_THROWS_AS(sullivan_sim(harmonic, 3.0, 100, 10, 0), DomainError);
  CHECK_THROWS_AS(sullivan_sim([](std::uint64_t) { return 1.5; }, 1.0, 100, 10, 0), DomainError);
  CHECK_THROWS_AS(sullivan_sim(harmonic, 0.5, 100, 10, 0), DomainError);
}

TEST_CASE("sullivan coupling has the configured pairwise factor") {
  // empirical P(A_1 and A_2) / (p1 p2) for the paired uniforms
  const double p1 = 0.3, p2 = 0.3, D = 2.0;
  std::uint64_t both = 0, a = 0, b = 0, n = 200000;
  for (std::uint64_t t = 0; t < n; ++t) {
    double u = double(mix_seed(mix_seed(5, t), 1) >> 11) * 0x1p-53;
    bool A = u < p1;
    bool B = u < D * p1 * p2 || (u >= p1 && u < p1 + p2 - D * p1 * p2);
    both += A && B;
    a += A;
    b += B;
  }
  CHECK(double(a) / n == doctest::Approx(p1).epsilon(0.02));
  CHECK(double(b) / n == doctest::Approx(p2).epsilon(0.02));
  CHECK(double(both) / n / (p1 * p2) == doctest::Approx(D).epsilon(0.03));
}

TEST_CASE("diamond_vaaler") {
  CHECK(diamond_vaaler(constant_digits(1, 101), 100) == doctest::Approx(100.0 / (100 * std::log(100.0))));
  CHECK(diamond_vaaler(constant_digits(1, 101), 100) == doctest::Approx(0.217).epsilon(0.01));
  CHECK(diamond_vaaler(constant_digits(2, 101), 100) == doctest::Approx(0.434).epsilon(0.01));
  CHECK_THROWS_AS(diamond_vaaler(constant_digits(1, 10), 2), DomainError);
  CHECK_THROWS_AS(diamond_vaaler(constant_digits(1, 10), 10), HorizonError);
  std::vector<double> v;
  for (std::uint64_t s = 0; s < 21; ++s) v.push_back(diamond_vaaler(gauss_random(2001, s), 2000));
  std::nth_element(v.begin(), v.begin() + 10, v.end());
  CHECK(v[10] > 0.9);
  CHECK(v[10] < 2.0);
}

TEST_CASE("coprime_density") {
  auto unit = RationalInterval::open(0, 1);
  CHECK(coprime_density(2, unit).count == 1);
  auto big = coprime_density(2000, unit);
  CHECK(std::abs(double(big.count) / (2000.0 * 2000.0) - 3 / (M_PI * M_PI)) <= 0.01);
  CHECK(big.count == coprime_density_serial(2000, unit).count);
  CHECK(coprime_density(50, RationalInterval::open(Rational(1, 3), Rational(1, 3))).count == 0);

  // oracle: all pairs, exact membership
  std::mt19937_64 rng(4);
  for (int t = 0; t < 30; ++t) {
    Rational a(long(rng() % 20), 20), b(long(rng() % 20), 20);
    if (b < a) std::swap(a, b);
    RationalInterval I{a, b, bool(rng() & 1), bool(rng() & 1)};
    std::int64_t N = 1 + rng() % 60, c = 0;
    for (std::int64_t n = 1; n <= N; ++n)
      for (std::int64_t m = 0; m <= N; ++m)
        if (std::gcd(m, n) == 1 && I.contains(Rational(m, n))) ++c;
    CHECK(coprime_density(N, I).count == c);
  }
}

TEST_CASE("multiplicity_check") {
  std::vector<RationalInterval> disj{RationalInterval::closed(0, Rational(1, 4)),
                                     RationalInterval::closed(Rational(1, 4), Rational(1, 2)),
                                     RationalInterval::closed(Rational(2, 3), 1)};
  auto d = multiplicity_check(disj);
  CHECK(d.K == 1);
  CHECK(d.union_measure == d.sum_measure);
  CHECK(d.holds);

  std::vector<RationalInterval> same(5, RationalInterval::open(Rational(1, 7), Rational(3, 7)));
  auto s = multiplicity_check(same);
  CHECK(s.K == 5);
  CHECK(s.union_measure * 5 == s.sum_measure);

  std::mt19937_64 rng(8);
  for (int t = 0; t < 100; ++t) {
    std::vector<RationalInterval> ivs;
    for (int i = 0; i < 100; ++i) {
      Rational a(long(rng() % 1000), 1000), b(long(rng() % 1000), 1000);
      ivs.push_back(RationalInterval::closed(a, b));
    }
    auto r = multiplicity_check(ivs);
    CHECK(r.holds);
    CHECK(r.union_measure * long(r.K) >= r.sum_measure);
    // oracle: elementary segments between consecutive endpoints
    std::vector<Rational> pts;
    for (const auto& iv : ivs) {
      pts.push_back(iv.lo);
      pts.push_back(iv.hi);
    }
    std::sort(pts.begin(), pts.end());
    Rational uni = 0;
    std::size_t K = 0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      if (pts[i] == pts[i + 1]) continue;
      Rational mid = (pts[i] + pts[i + 1]) / 2;
      std::size_t c = 0;
      for (const auto& iv : ivs) c += (iv.lo < mid && mid < iv.hi);
      if (c > 0) uni += pts[i + 1] - pts[i];
      K = std::max(K, c);
    }
    CHECK(uni == r.union_measure);
    CHECK(K == r.K);
  }
}

TEST_CASE("gibbs_probe") {
  auto g = gibbs_probe(4, 4);
  CHECK(g.pairs == 340 * 340);
  CHECK(std::isfinite(g.G));
  CHECK(g.G >= 1);
  CHECK(g.G <= 2);
  CHECK(g.min_ratio >= 1 / g.G);
  CHECK(g.max_ratio <= g.G);
  for (std::size_t d = 1; d < g.G_by_depth.size(); ++d) CHECK(g.G_by_depth[d] >= g.G_by_depth[d - 1]);
}

TEST_CASE("a_k_measure: elementary cases") {
  PsiSpec psi;
  auto nset = all_n();
  // k = 2: n in [3, 7]; only 2/5 lies in {2/5}
  auto one = a_k_measure(nset, psi, 17, 2, RationalInterval::closed(Rational(2, 5), Rational(2, 5)));
  CHECK(one.card_omega == 1);
  long double rho = one.rho;
  CHECK(close_rel(one.measure, 2.0L * rho / 5.0L, 1e-15L));
  CHECK(a_k_measure_brute(nset, psi, 17, 2, RationalInterval::closed(Rational(2, 5), Rational(2, 5))).measure ==
        one.measure);
  // rho is the dyadic rounding of 1/(e^k psi(e^k))
  double exact_rho = 1.0 / (std::exp(2.0) * psi(std::exp(2.0)));
  CHECK(std::abs(one.rho - exact_rho) <= std::ldexp(1.0, -63));

  auto none = a_k_measure(nset, psi, 17, 5, RationalInterval::open(Rational(1, 3), Rational(1, 3)));
  CHECK(none.card_omega == 0);
  CHECK(none.measure == 0);
}

TEST_CASE("a_k_measure routes agree") {
  PsiSpec psi;
  auto I = RationalInterval::open(Rational(1, 10), Rational(9, 10));
  for (auto [nset, M] : {std::pair{all_n(), BigInt(17)}, std::pair{even_n(), BigInt(2)}}) {
    for (std::size_t k = 1; k <= 7; ++k) {
      auto a = a_k_measure(nset, psi, M, k, I);
      auto b = a_k_measure_brute(nset, psi, M, k, I);
      CHECK(a.card_omega == b.card_omega);
      CHECK(close_rel(a.measure, b.measure, 1e-12L));
      if (k >= 4) CHECK(a.disjoint_certified);
    }
  }
  auto k8 = a_k_measure(all_n(), psi, 17, 8, I);
  CHECK(k8.route == "per-denominator");
  CHECK(k8.bounds_hold);
  CHECK(k8.measure >= k8.lower);
  CHECK(k8.measure <= k8.upper);
}

TEST_CASE("quasi_independence") {
  PsiSpec psi;
  auto nset = all_n();
  auto I = RationalInterval::open(Rational(1, 10), Rational(9, 10));
  CHECK_THROWS_AS(quasi_independence(nset, psi, 17, 5, 5, I), DomainError);
  CHECK_THROWS_AS(quasi_independence(nset, psi, 17, 4, 7, I), DomainError);

  auto q = quasi_independence(nset, psi, 17, 4, 8, I);
  auto b = quasi_independence_brute(nset, psi, 17, 4, 8, I);
  CHECK(close_rel(q.m1, b.m1, 1e-12L));
  CHECK(close_rel(q.m2, b.m2, 1e-12L));
  CHECK(close_rel(q.joint, b.joint, 1e-12L));
  CHECK(q.ratio == doctest::Approx(b.ratio).epsilon(1e-9));
  CHECK(q.ratio > 0);

  // order of k1, k2 does not matter
  auto swapped = quasi_independence(nset, psi, 17, 8, 4, I);
  CHECK(swapped.joint == q.joint);

  // closed endpoints at 1/4 and 1/2 exercise the boundary correction
  auto Ic = RationalInterval::closed(Rational(1, 4), Rational(1, 2));
  auto qc = quasi_independence(nset, psi, 17, 3, 8, Ic);
  auto bc = quasi_independence_brute(nset, psi, 17, 3, 8, Ic);
  CHECK(close_rel(qc.m2, bc.m2, 1e-12L));
  CHECK(close_rel(qc.joint, bc.joint, 1e-12L));
}

TEST_CASE("quasi_independence calibration at (7, 11)") {
  PsiSpec psi;
  auto q = quasi_independence(all_n(), psi, 17, 7, 11, RationalInterval::open(Rational(1, 10), Rational(9, 10)));
  CHECK(q.ratio > 0);
  CHECK(q.ratio <= 50);
  CHECK(q.holds);
  // recorded calibration value
  CHECK(q.ratio == doctest::Approx(0.66365).epsilon(1e-4));
}
