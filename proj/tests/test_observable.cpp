#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "rotor/errors.hpp"
#include "rotor/observable.hpp"

using namespace rotor;

namespace {

SawtoothCombo combo(std::vector<Rational> b, std::vector<Rational> beta) {
  SawtoothCombo f{std::move(b), std::move(beta)};
  f.validate();
  return f;
}

// Midpoint rule on the defining integral of D.
double d_quadrature(const std::vector<double>& b, const std::vector<double>& g, int nodes) {
  double s = 0;
  for (int i = 0; i < nodes; ++i) {
    double y = (i + 0.5) / nodes, v = 0;
    for (std::size_t m = 0; m < b.size(); ++m) v += b[m] * std::sin(2 * std::numbers::pi * (y + g[m]));
    s += v * v;
  }
  return s / nodes;
}

}  // namespace

TEST_CASE("eval examples") {
  auto h = SawtoothCombo::sawtooth();
  CHECK(eval(h, Rational(1, 4)) == Rational(-1, 4));
  CHECK(eval(h, Rational(0)) == Rational(-1, 2));
  auto f = combo({1, -1}, {0, Rational(3, 10)});
  CHECK(eval(f, Rational(1, 2)) == Rational(-3, 10));
}

TEST_CASE("jump at -beta_m has size -b_m") {
  auto f = combo({Rational(3, 2), -2, Rational(1, 3)}, {Rational(1, 7), Rational(1, 2), Rational(5, 6)});
  Rational eps(1, 1000000);
  auto disc = discontinuities(f);
  for (std::size_t m = 0; m < f.d(); ++m) {
    Rational p = frac(-f.beta[m]);
    Rational right = eval(f, p), left = eval(f, p - eps);
    // left limit - right limit = b_m up to the slope over eps
    Rational slope = eps * (f.b[0] + f.b[1] + f.b[2]);
    CHECK(left - right + slope == f.b[m]);
    CHECK(right == eval(f, p));
  }
  CHECK(disc.size() == f.d());
}

TEST_CASE("variation and discontinuities") {
  auto h = SawtoothCombo::sawtooth();
  CHECK(variation(h) == 2);
  CHECK(variation(combo({1, -1}, {0, Rational(3, 10)})) == 4);
  CHECK(variation(combo({-5}, {0})) == 5 * variation(h));
  CHECK(discontinuities(h) == std::vector<Rational>{0});
  CHECK(discontinuities(combo({1, -1}, {0, Rational(3, 10)})) == std::vector<Rational>{0, Rational(7, 10)});
}

TEST_CASE("validation") {
  CHECK_THROWS_AS(combo({1, 1}, {0, 0}), DomainError);
  CHECK_THROWS_AS(combo({0}, {0}), DomainError);
  CHECK_THROWS_AS(combo({1}, {1}), DomainError);
  CHECK_THROWS_AS(combo({1, 2}, {0}), DomainError);
  auto j = nlohmann::json::parse(R"({"b":[1, -1], "beta":["0", 0.3]})");
  auto f = SawtoothCombo::from_json(j);
  CHECK(f.beta[1] == Rational(3, 10));
  CHECK(SawtoothCombo::from_json(f.to_json()).b == f.b);
  try {
    SawtoothCombo::from_json(nlohmann::json::parse(R"({"b":[1, "x"], "beta":["0", "1/3"]})"));
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.path == "b[1]");
  }
}

TEST_CASE("d_value examples") {
  auto h = SawtoothCombo::sawtooth();
  for (std::int64_t n = 1; n < 50; ++n) CHECK(d_value(h, n) == 0.5);
  CHECK(std::abs(d_value({1, 1}, {0, 0.5})) < 1e-15);
  CHECK(d_value({1, 1}, {0, 0.25}) == doctest::Approx(1.0));
  CHECK(d_quadrature({1, 1}, {0, 0.25}, 10000) == doctest::Approx(1.0));
}

TEST_CASE("d_value closed form against quadrature, and non-negative") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-2, 2), g(0, 1);
  for (int t = 0; t < 100; ++t) {
    std::size_t d = 1 + rng() % 5;
    std::vector<double> b(d), gam(d);
    for (std::size_t m = 0; m < d; ++m) b[m] = u(rng), gam[m] = g(rng);
    double closed = d_value(b, gam);
    CHECK(std::abs(closed - d_quadrature(b, gam, 10000)) <= 1e-8);
    CHECK(closed >= -1e-12);
  }
}

TEST_CASE("l2 norm: exact autocorrelation vs Fourier series vs quadrature") {
  auto h = SawtoothCombo::sawtooth();
  CHECK(l2_norm_sq(h) == Rational(1, 12));
  std::vector<SawtoothCombo> fs{h, combo({1, -1}, {0, Rational(3, 10)}),
                                combo({2, Rational(1, 2), -1}, {Rational(1, 5), Rational(1, 3), Rational(7, 8)})};
  for (const auto& f : fs) {
    double exact = to_double(l2_norm_sq(f));
    auto series = l2_norm_sq_series(f, 20000);
    CHECK(std::abs(series.value - exact) <= series.tail_bound);
    // midpoint quadrature of f^2 on a grid avoiding the jumps
    const int nodes = 1 << 18;
    double q = 0;
    for (int i = 0; i < nodes; ++i) {
      double v = to_double(eval(f, Rational(2 * i + 1, 2 * nodes)));
      q += v * v;
    }
    CHECK(q / nodes == doctest::Approx(exact).epsilon(1e-3));
  }
}

TEST_CASE("syndetic_scan") {
  auto h = SawtoothCombo::sawtooth();
  auto r = syndetic_scan(h, 0.25, 100);
  CHECK(r.members.size() == 100);
  CHECK(r.max_gap == 1);
  CHECK(r.lower_density_estimate == 1.0);

  // D(0, n/2) = 1 + cos(pi n): zero at odd n, 2 at even n.
  auto f = combo({1, 1}, {0, Rational(1, 2)});
  auto e = syndetic_scan(f, 0.1, 100);
  CHECK(e.members.size() == 50);
  for (auto n : e.members) CHECK(n % 2 == 0);
  CHECK(e.max_gap == 2);
  CHECK(e.period == 2);
  CHECK(e.contains(BigInt(1000000)));
  CHECK_FALSE(e.contains(BigInt(1000001)));

  CHECK_THROWS_AS(syndetic_scan(f, 5.0, 100), EmptySetError);
  CHECK_THROWS_AS(syndetic_scan(f, 0.0, 100), DomainError);

  auto g = combo({1, Rational(-1, 2), 2}, {Rational(1, 9), Rational(2, 5), Rational(3, 4)});
  double prev = 2;
  for (double eps : {0.05, 0.2, 0.5, 1.0, 1.5, 2.0}) {
    double dens = 0;
    try {
      dens = syndetic_scan(g, eps, 2000).lower_density_estimate;
    } catch (const EmptySetError&) {
    }
    CHECK(dens <= prev);
    prev = dens;
  }
  auto par = syndetic_scan(g, 0.5, 5000), ser = syndetic_scan_serial(g, 0.5, 5000);
  CHECK(par.members == ser.members);
  CHECK(default_eps0(h) == 0.25);
}
