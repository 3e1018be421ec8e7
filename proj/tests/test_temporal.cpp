#include "doctest.h"

#include <cmath>
#include <random>

#include <boost/math/distributions/chi_squared.hpp>

#include "rotor/errors.hpp"
#include "rotor/temporal.hpp"

using namespace rotor;

namespace {

CfDigits golden_lazy() {
  return CfDigits::lazy({}, [](std::size_t) { return BigInt(1); });
}

}  // namespace

TEST_CASE("ensemble examples") {
  auto h = SawtoothCombo::sawtooth();
  auto ctx = make_context(golden_lazy(), 100000);
  Rational x(3, 7);
  auto one = ensemble(h, ctx, x, 1);
  REQUIRE(one.values.size() == 1);
  CHECK(one.values[0] == to_double(eval(h, x)));  // S_1 = f(x)

  auto e8 = ensemble(h, ctx, Rational(0), 8);
  for (int n = 1; n <= 8; ++n) CHECK(e8.values[n - 1] == to_double(sum_naive(h, ctx, Rational(0), n).value));

  SawtoothCombo f{{Rational(1), Rational(-2, 3)}, {Rational(0), Rational(1, 5)}};
  auto par = ensemble(f, ctx, x, 50000), ser = ensemble_serial(f, ctx, x, 50000);
  CHECK(par.values == ser.values);
  CHECK(par.max_error_bound < ensemble_resolution());
  double direct = 0;
  for (int n = 1; n <= 50000; ++n) direct += to_double(sum_fast(f, ctx, x, n).value) / 50000.0;
  CHECK(par.mean() == doctest::Approx(direct).epsilon(1e-12));
  CHECK_THROWS_AS(ensemble(h, ctx, x, 100001), HorizonError);
  // a coarse context cannot certify the doubles
  auto coarse = make_context(golden_lazy(), 1000, BigInt(1));
  CHECK_THROWS_AS(ensemble(h, coarse, x, 1000), HorizonError);
}

TEST_CASE("percentile examples") {
  auto u = TargetLaw::uniform();
  CHECK(percentile(u, Rational(1, 3), Side::Plus) == doctest::Approx(1.0 / 3));
  CHECK(percentile(u, Rational(1, 3), Side::Minus) == doctest::Approx(1.0 / 3));
  std::vector<double> mass(10, 0.5);
  CHECK(percentile(mass, Rational(1, 3), Side::Minus) == 0.5);
  CHECK(percentile(mass, Rational(1, 3), Side::Plus) == 0.5);
  std::vector<double> s{4, 2, 3, 1};
  CHECK(percentile(s, Rational(1, 2), Side::Minus) == 2);
  CHECK(percentile(s, Rational(1, 2), Side::Plus) == 3);
  CHECK_THROWS_AS(percentile(s, Rational(0), Side::Plus), DomainError);
}

TEST_CASE("percentile inequalities hold exactly on empirical samples") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = 1 + rng() % 40;
    std::vector<double> v(n);
    for (auto& e : v) e = double(rng() % 6);  // many ties
    std::sort(v.begin(), v.end());
    for (long den : {2L, 3L, 7L, 10L}) {
      for (long num = 1; num < den; ++num) {
        Rational t(num, den);
        double cp = percentile_sorted(v, t, Side::Plus), cm = percentile_sorted(v, t, Side::Minus);
        long le = 0, lt = 0;
        for (double e : v) le += e <= cp, lt += e < cm;
        CHECK(Rational(le, static_cast<long>(n)) >= t);
        CHECK(Rational(lt, static_cast<long>(n)) <= t);
        // literal inf/sup definitions over candidate points
        for (double xi : v) {
          long c = 0;
          for (double e : v) c += e <= xi;
          if (Rational(c, static_cast<long>(n)) > t) CHECK(cp <= xi);
          if (Rational(c, static_cast<long>(n)) < t) CHECK(cm > xi);
        }
      }
    }
  }
}

TEST_CASE("non-atomic laws: P(X < chi_t) = t") {
  for (auto law : {TargetLaw::uniform(), TargetLaw::gaussian(), TargetLaw::uniform_conv()}) {
    for (long num = 1; num < 20; ++num) {
      Rational t(num, 20);
      CHECK(law.cdf(percentile(law, t, Side::Plus)) == doctest::Approx(to_double(t)).epsilon(1e-12));
      CHECK(law.cdf(percentile(law, t, Side::Minus)) == doctest::Approx(to_double(t)).epsilon(1e-12));
    }
    double prev = 0;
    for (double z = -6; z <= 6; z += 0.01) {
      CHECK(law.cdf(z) >= prev);
      prev = law.cdf(z);
    }
    CHECK(law.cdf(-50) == 0);
    CHECK(law.cdf(50) == 1);
  }
}

TEST_CASE("UniformConv CDF against convolution quadrature") {
  auto c = TargetLaw::uniform_conv();
  for (double z = -0.5; z <= 2.5; z += 0.05) {
    // P(U1 + U2 <= z) = int_0^1 clamp(z - u, 0, 1) du
    const int nodes = 20000;
    double s = 0;
    for (int i = 0; i < nodes; ++i) s += std::clamp(z - (i + 0.5) / nodes, 0.0, 1.0);
    CHECK(c.cdf(z) == doctest::Approx(s / nodes).epsilon(1e-6));
  }
  CHECK(c.cdf(0.5) == 0.125);
  CHECK(c.cdf(1.5) == 0.875);
}

TEST_CASE("normalize_star") {
  std::mt19937_64 rng(2718);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<double> s(100000);
  for (auto& v : s) v = 5 + 10 * u(rng);
  auto st = normalize_star(s, TargetLaw::uniform());
  CHECK(std::abs(st.A - 5) <= 0.5);
  CHECK(std::abs(st.B - 10) <= 0.5);
  CHECK_FALSE(st.degenerate);

  auto deg = normalize_star(std::vector<double>(100, 3.0), TargetLaw::uniform());
  CHECK(deg.degenerate);
  CHECK(deg.B == 0);

  // exact affine equivariance with dyadic data and b = 4
  std::vector<double> d(999);
  for (auto& v : d) v = double(rng() % 4096) / 1024;
  auto base = normalize_star(d, TargetLaw::uniform());
  std::vector<double> moved = d;
  for (auto& v : moved) v = 3 + 4 * v;
  auto m = normalize_star(moved, TargetLaw::uniform());
  CHECK(m.A == 3 + 4 * base.A);
  CHECK(m.B == 4 * base.B);
}

TEST_CASE("normalize_star recovers growing affine families") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0, 1);
  double prev_gap = 1;
  for (double BN : {1e1, 1e3, 1e5}) {
    double AN = -0.37 * BN;
    std::vector<double> s(200000);
    for (auto& v : s) v = AN + BN * u(rng) + 0.3 * u(rng);  // bounded perturbation
    auto st = normalize_star(s, TargetLaw::uniform());
    double gap = std::abs(st.A / BN - AN / BN);
    CHECK(st.B / BN == doctest::Approx(1).epsilon(0.03));
    CHECK(gap <= prev_gap + 0.01);
    prev_gap = gap;
  }
  CHECK(prev_gap < 0.01);
}

TEST_CASE("ks_distance") {
  const int N = 999;
  for (auto law : {TargetLaw::uniform(), TargetLaw::gaussian(), TargetLaw::uniform_conv()}) {
    std::vector<double> grid(N);
    for (int i = 0; i < N; ++i) grid[i] = law.quantile(double(i + 1) / (N + 1));
    CHECK(ks_distance(grid, law, 0, 1) <= 1.0 / (N + 1) + 1e-12);
  }
  CHECK(ks_distance(std::vector<double>(10, 0.5), TargetLaw::uniform(), 0, 1) == doctest::Approx(0.5));
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<double> s(10000);
  for (auto& v : s) v = u(rng);
  CHECK(ks_distance(s, TargetLaw::uniform(), 0, 1) <= 0.02);
  CHECK_THROWS_AS(ks_distance(s, TargetLaw::uniform(), 0, 0), DomainError);
}

TEST_CASE("schedule_thm_uniform") {
  std::vector<BigInt> ds(120, BigInt(1));
  ds[4] = 4;  // a_5
  auto d = CfDigits::prefix(ds);
  auto ctx = make_context(d, 1000);
  auto h = SawtoothCombo::sawtooth();
  Rational x(1, 9);
  auto e = schedule_thm_uniform(h, ctx, x, 1, 4);
  CHECK(e.L_k == 4);
  CHECK(e.q_nk == 5);
  CHECK(e.N_k == 20);
  CHECK(e.mu == sum_naive(h, ctx, x, 5).value);
  CHECK(e.B_k == abs(e.mu) * 4);
  CHECK(e.A_k == (e.mu > 0 ? Rational(0) : Rational(-e.B_k)));
  int pos = 0, neg = 0;
  for (int t = 0; t < 40; ++t) {
    auto s = schedule_thm_uniform(h, ctx, random_x(3, t), 1, 4);
    if (s.mu > 0) {
      ++pos;
      CHECK(s.A_k == 0);
    } else {
      ++neg;
      CHECK(s.A_k == -s.B_k);
    }
  }
  CHECK(pos > 0);
  CHECK(neg > 0);
  CHECK_THROWS_AS(schedule_thm_uniform(h, ctx, x, 1, 4, 1, Rational(10)), BadSampleError);
  CHECK_THROWS_AS(schedule_thm_uniform(h, ctx, x, 100, 8), HorizonError);
}

TEST_CASE("l/r decomposition is unique, uniform and independent") {
  for (long n = 0; n < 500; ++n) {
    auto [l, r] = lr_decompose(n, 7);
    CHECK(l * 7 + r == n);
    CHECK(r >= 0);
    CHECK(r < 7);
  }
  const int lmax = 5, q = 7, samples = 100000;
  std::mt19937_64 rng(606);
  std::vector<std::vector<double>> table(lmax, std::vector<double>(q, 0));
  for (int s = 0; s < samples; ++s) {
    long n = 1 + static_cast<long>(rng() % (lmax * q));
    // n in 1..lmax q, shifted to 0-based so l ranges over 0..lmax-1
    auto [l, r] = lr_decompose(n - 1, q);
    table[l.get_ui()][r.get_ui()] += 1;
  }
  std::vector<double> rows(lmax, 0), cols(q, 0);
  for (int i = 0; i < lmax; ++i)
    for (int j = 0; j < q; ++j) rows[i] += table[i][j], cols[j] += table[i][j];
  double chi_ind = 0, chi_l = 0, chi_r = 0;
  for (int i = 0; i < lmax; ++i)
    for (int j = 0; j < q; ++j) {
      double expct = rows[i] * cols[j] / samples;
      chi_ind += (table[i][j] - expct) * (table[i][j] - expct) / expct;
    }
  for (int i = 0; i < lmax; ++i) chi_l += std::pow(rows[i] - samples / double(lmax), 2) / (samples / double(lmax));
  for (int j = 0; j < q; ++j) chi_r += std::pow(cols[j] - samples / double(q), 2) / (samples / double(q));
  using boost::math::chi_squared;
  CHECK(chi_ind < quantile(chi_squared((lmax - 1) * (q - 1)), 0.999));
  CHECK(chi_l < quantile(chi_squared(lmax - 1), 0.999));
  CHECK(chi_r < quantile(chi_squared(q - 1), 0.999));
}

TEST_CASE("grid parsing and scans") {
  auto g = parse_grid("geometric:1e3:1e6:1.5");
  CHECK(g.front() == 1000);
  CHECK(g.back() <= 1000000);
  for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] > g[i - 1]);
  CHECK(parse_grid("linear:10:50:20") == std::vector<std::int64_t>{10, 30, 50});
  CHECK(parse_grid("list:40,10,20,20") == std::vector<std::int64_t>{10, 20, 40});
  CHECK_THROWS_AS(parse_grid("geometric:10:5:2"), DomainError);
  CHECK_THROWS_AS(parse_grid("cubic:1:2:3"), DomainError);

  auto h = SawtoothCombo::sawtooth();
  auto ctx = make_context(golden_lazy(), 20000);
  auto rows = scan_tdlt(h, ctx, Rational(1, 5), parse_grid("geometric:100:20000:2"));
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].N > rows[i - 1].N);
  auto csv = scan_csv(rows);
  CHECK(csv.rfind("N,A_star,B_star,ks_u01,ks_gauss,ks_conv\n", 0) == 0);
  auto hist = histogram_csv({0.1, 0.2, 0.9}, 0, 1, 0, 1, 2);
  CHECK(hist.find("0,0.5,2,") != std::string::npos);
}
