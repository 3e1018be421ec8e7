#include "doctest.h"

#include <cmath>
#include <random>
#include <set>

#include "rotor/birkhoff.hpp"
#include "rotor/errors.hpp"

using namespace rotor;

namespace {

CfDigits golden_lazy() {
  return CfDigits::lazy({}, [](std::size_t) { return BigInt(1); });
}

CfDigits planted_alpha() {
  std::vector<BigInt> ds(200, BigInt(1));
  ds[4] = 1000;  // a_5
  ds[11] = 37;
  return CfDigits::prefix(ds);
}

SawtoothCombo combo2() {
  SawtoothCombo f{{Rational(1), Rational(-1, 2)}, {Rational(0), Rational(2, 7)}};
  f.validate();
  return f;
}

}  // namespace

TEST_CASE("make_context") {
  auto g = golden_lazy();
  auto c8 = make_context(g, 8, pow2(10));
  CHECK(c8.K == 20);
  CHECK(c8.Q == 10946);
  auto c1000 = make_context(g, 1000, pow2(10));
  CHECK(c1000.K == 30);
  CHECK(c1000.Q == 1346269);
  auto c1 = make_context(g, 1, pow2(10));
  CHECK(c1.Q >= 1024);
  CHECK(c1.q(c1.K - 1) < 1024);
  CHECK(c1.slack == Rational(BigInt(1), c1.Q * c1.q(c1.K - 1) + c1.Q * c1.Q));
  CHECK(c1000.slack < c8.slack);
  CHECK(c8.slack < c1.slack);
  auto dflt = make_context(g, 1000);
  CHECK(dflt.Q >= pow2(32) * 1000);
  CHECK_THROWS_AS(make_context(CfDigits::prefix(std::vector<BigInt>(10, BigInt(1))), 1000), HorizonError);
  auto exact = make_context(expand_rational(3, 7), 1000000);
  CHECK(exact.slack == 0);
  CHECK(exact.surrogate() == Rational(3, 7));
}

TEST_CASE("sum_naive examples") {
  auto h = SawtoothCombo::sawtooth();
  auto ctx = make_context(golden_lazy(), 1000);
  auto z = sum_naive(h, ctx, Rational(1, 3), 0);
  CHECK(z.value == 0);
  CHECK(z.error_bound == 0);
  Rational x(5, 17);
  CHECK(sum_naive(h, ctx, x, 1).value == eval(h, x));
  auto two = sum_naive(h, ctx, Rational(0), 2);
  CHECK(two.value == Rational(-1, 2) + ctx.surrogate() - Rational(1, 2));
  CHECK(to_double(two.value) == doctest::Approx(-0.38197).epsilon(1e-5));
  CHECK(two.error_bound <= Rational(1, 1000000));
  CHECK_THROWS_AS(sum_naive(h, ctx, x, 1001), HorizonError);
  CHECK_THROWS_AS(sum_fast(h, ctx, x, 1001), HorizonError);
}

TEST_CASE("sum_fast agrees exactly with sum_naive") {
  std::vector<CfDigits> alphas{golden_lazy(), planted_alpha()};
  std::vector<SawtoothCombo> fs{SawtoothCombo::sawtooth(), combo2()};
  std::mt19937_64 rng(2024);
  int cases = 0;
  for (const auto& a : alphas) {
    auto ctx = make_context(a, 10000);
    for (const auto& f : fs)
      for (int t = 0; t < 40; ++t) {
        Rational x = random_x(99, rng());
        BigInt n = static_cast<unsigned long>(rng() % 10001);
        auto slow = sum_naive(f, ctx, x, n);
        auto fast = sum_fast(f, ctx, x, n);
        CHECK(slow == fast);
        ++cases;
      }
  }
  CHECK(cases == 160);
  auto ctx = make_context(golden_lazy(), 10000);
  CHECK(sum_fast(SawtoothCombo::sawtooth(), ctx, Rational(1, 2), 0).value == 0);
}

TEST_CASE("crossing count agrees on a coarse context") {
  // A small guard makes n*slack large enough that crossings appear.
  auto h = SawtoothCombo::sawtooth();
  auto f = combo2();
  std::mt19937_64 rng(1);
  for (const auto& a : {golden_lazy(), planted_alpha()}) {
    auto ctx = make_context(a, 600, BigInt(1));
    BigInt seen = 0;
    for (int t = 0; t < 40; ++t) {
      Rational x = random_x(5, t);
      BigInt n = static_cast<unsigned long>(rng() % 601);
      for (const auto& g : {h, f}) {
        auto slow = sum_naive(g, ctx, x, n), fast = sum_fast(g, ctx, x, n);
        CHECK(slow == fast);
        seen += fast.crossings_possible;
      }
    }
    CHECK(seen > 0);
  }
}

TEST_CASE("Denjoy-Koksma on the surrogate and the mu examples") {
  auto h = SawtoothCombo::sawtooth();
  for (const auto& a : {golden_lazy(), planted_alpha()}) {
    for (const auto& f : {h, combo2()}) {
      CfDigits d = a;
      BigInt q18 = convergents(d, 18)[18].q;
      auto ctx = make_context(d, q18);
      Rational V = variation(f);
      for (int t = 0; t < 10; ++t) {
        Rational x = random_x(7, t);
        for (std::size_t j = 0; j <= 18; ++j) CHECK(abs(mu(f, ctx, x, j).value) <= V);
      }
      auto tight = make_context(d, q18, BigInt(1));
      for (std::size_t j = 0; j + 1 <= tight.K; ++j)
        CHECK(abs(sum_fast(f, tight, Rational(0), tight.q(j)).value) <= V);
    }
  }
  auto ctx = make_context(golden_lazy(), 100);
  Rational x(3, 11);
  CHECK(mu(h, ctx, x, 1).value == eval(h, x));
}

TEST_CASE("cocycle identity") {
  auto f = combo2();
  auto ctx = make_context(planted_alpha(), 20000);
  std::mt19937_64 rng(3);
  for (int t = 0; t < 50; ++t) {
    Rational x = random_x(11, t);
    BigInt m = static_cast<unsigned long>(rng() % 10000), n = static_cast<unsigned long>(rng() % 10000);
    Rational lhs = sum_fast(f, ctx, x, m + n).value;
    Rational rhs = sum_fast(f, ctx, x, m).value + sum_fast(f, ctx, x + ctx.surrogate() * m, n).value;
    CHECK(lhs == rhs);
  }
}

TEST_CASE("SurrogateOrbit walks the same values") {
  auto f = combo2();
  auto ctx = make_context(planted_alpha(), 5000);
  Rational x = random_x(4, 4);
  SurrogateOrbit o(f, ctx, x);
  for (int n = 0; n < 300; ++n) {
    CHECK(o.value() == sum_naive(f, ctx, x, n).value);
    o.step();
  }
  SurrogateOrbit mid(f, ctx, x, 4000);
  CHECK(mid.value() == sum_fast(f, ctx, x, 4000).value);
  mid.step();
  CHECK(mid.value() == sum_fast(f, ctx, x, 4001).value);
}

TEST_CASE("Lipschitz on continuity components") {
  auto f = combo2();
  auto ctx = make_context(planted_alpha(), 1000);
  std::mt19937_64 rng(8);
  int tested = 0;
  for (int t = 0; t < 400 && tested < 100; ++t) {
    BigInt r = static_cast<unsigned long>(1 + rng() % 200);
    Rational x1 = random_x(21, 2 * t), x2 = x1 + Rational(static_cast<long>(rng() % 1000), 10000000);
    // both in one component: no discontinuity of S_r between them
    bool split = false;
    Rational pt = 0;
    for (BigInt k = 0; k < r && !split; ++k, pt += ctx.surrogate())
      for (const auto& be : f.beta) {
        Rational y1 = frac(x1 + be + pt);
        Rational y2 = y1 + (x2 - x1);
        if (y2 >= 1) split = true;
      }
    if (split) continue;
    ++tested;
    Rational diff = abs(sum_fast(f, ctx, x1, r).value - sum_fast(f, ctx, x2, r).value);
    CHECK(diff <= lipschitz_constant(f) * Rational(r) * abs(x1 - x2));
  }
  CHECK(tested >= 50);
}

TEST_CASE("S_q has d q discontinuities") {
  auto f = combo2();
  auto ctx = make_context(golden_lazy(), 10);
  for (long q : {1L, 2L, 3L, 5L, 8L, 13L, 21L, 34L, 55L, 89L, 144L, 200L}) {
    std::set<Rational> pts;
    for (long k = 0; k < q; ++k)
      for (const auto& be : f.beta) pts.insert(frac(-be - ctx.surrogate() * k));
    CHECK(pts.size() == f.d() * static_cast<std::size_t>(q));
    // each point is a genuine jump of S_q
    Rational eps(1, BigInt(1) << 200);
    for (const auto& p : pts) {
      Rational right = 0, left = 0;
      for (long k = 0; k < q; ++k) {
        right += eval(f, p + ctx.surrogate() * k);
        left += eval(f, p - eps + ctx.surrogate() * k);
      }
      CHECK(left != right + 0);
      CHECK(abs(left - right) > Rational(1, 4));
    }
  }
}

TEST_CASE("results from increasing K are mutually consistent") {
  auto f = combo2();
  auto a = planted_alpha();
  auto ref = make_context(a, 1000, pow2(60));
  std::mt19937_64 rng(12);
  for (int t = 0; t < 30; ++t) {
    Rational x = random_x(31, t);
    BigInt n = static_cast<unsigned long>(1 + rng() % 1000);
    auto rv = sum_fast(f, ref, x, n);
    for (unsigned g : {0u, 4u, 10u, 20u, 32u}) {
      auto ctx = make_context(a, 1000, pow2(g));
      auto r = sum_fast(f, ctx, x, n);
      CHECK(abs(r.value - rv.value) <= r.error_bound + rv.error_bound);
    }
  }
}

TEST_CASE("max_prefix_bound") {
  auto h = SawtoothCombo::sawtooth();
  auto ctx = make_context(golden_lazy(), 100);
  Rational x(2, 9);
  auto p6 = max_prefix_bound(h, ctx, x, 6);
  CHECK(ctx.q(6) == 13);
  CHECK(p6.bound == 12);
  CHECK(p6.holds);
  auto p1 = max_prefix_bound(h, ctx, x, 1);
  CHECK(p1.empirical_max == abs(eval(h, x)));
  CHECK(p1.bound == 2);
  Rational prev = 0;
  for (std::size_t n = 1; n <= 10; ++n) {
    auto p = max_prefix_bound(combo2(), ctx, x, n);
    CHECK(p.bound >= prev);
    CHECK(p.holds);
    prev = p.bound;
  }
  CHECK_THROWS_AS(max_prefix_bound(h, ctx, x, 10, BigInt(10)), BudgetExhausted);
}

TEST_CASE("block_drift_check") {
  auto h = SawtoothCombo::sawtooth();
  auto a = planted_alpha();  // q_4 = 5, q_5 = 5003
  auto ctx = make_context(a, 100000);
  CHECK(ctx.q(4) == 5);
  CHECK(ctx.q(5) == 5003);
  auto r = block_drift_check(h, ctx, Rational(1, 3), 4, 1, Rational(1000));
  CHECK(r.deviation[0] == 0);
  CHECK(r.deviation[1] == 0);

  const std::size_t k = 10;
  const Rational c(1000);
  int ok = 0;
  for (int t = 0; t < 1000; ++t)
    if (block_drift_check(h, ctx, random_x(77, t), 4, k, c).holds) ++ok;
  double need = 1.0 - 2.0 * 1 * double(k) / 1000.0;  // 1 - C_2 k / c with C_2 = 2d
  CHECK(ok / 1000.0 >= need);

  auto g = make_context(golden_lazy(), 1000);
  CHECK_THROWS_AS(block_drift_check(h, g, Rational(1, 3), 5, 2, Rational(1)), DomainError);
  CHECK_THROWS_AS(block_drift_check(h, g, Rational(1, 3), 5, 2, Rational(17, 10)), DomainError);
  CHECK_NOTHROW(block_drift_check(h, g, Rational(1, 3), 5, 2, Rational(3, 2)));
}

TEST_CASE("SumResult json") {
  SumResult r{Rational(1, 3), Rational(0), BigInt(2)};
  CHECK(r.to_json().dump() == R"({"crossings_possible":2,"error_bound":"0/1","value":"1/3"})");
}
