// The acceptance battery. Tolerances and seeds are pinned here; each criterion
// reports a single pass/fail with enough detail (and the seed) to replay it.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "rotor/errors.hpp"
#include "rotor/harness.hpp"
#include "rotor/measure_lab.hpp"
#include "rotor/temporal.hpp"

namespace rotor {

namespace {

constexpr std::uint64_t kSeedOracle = 101;
constexpr std::uint64_t kSeedDK = 202;
constexpr std::uint64_t kSeedRandomInstances = 303;
constexpr std::uint64_t kSeedRecovery = 404;
constexpr std::uint64_t kSeedTemporal = 1;
constexpr std::uint64_t kSeedMass = 7;
constexpr std::uint64_t kSeedSullivan = 3;

struct Outcome {
  bool passed;
  std::string detail;
};

CriterionResult timed(int id, const std::string& name, const std::string& suite, std::uint64_t seed,
                      const std::function<Outcome()>& fn) {
  CriterionResult r;
  r.id = id;
  r.name = name;
  r.suite = suite;
  r.seed = seed;
  auto t0 = std::chrono::steady_clock::now();
  try {
    Outcome o = fn();
    r.passed = o.passed;
    r.detail = o.detail;
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

std::string fmt(double v, int prec = 4) {
  std::ostringstream os;
  os.precision(prec);
  os << v;
  return os.str();
}

// Small deterministic generator for test instances.
struct Stream {
  std::uint64_t seed, i = 0;
  explicit Stream(std::uint64_t s) : seed(s) {}
  std::uint64_t next() { return mix_seed(seed, i++); }
  std::uint64_t below(std::uint64_t n) { return next() % n; }
  double unit() { return double(next() >> 11) * 0x1p-53; }
};

SawtoothCombo combo2() {
  SawtoothCombo f{{Rational(1), Rational(-1, 2)}, {Rational(0), Rational(2, 7)}};
  f.validate();
  return f;
}

SyndeticReport all_n() { return syndetic_scan(SawtoothCombo::sawtooth(), 0.25, 100); }

CfDigits golden() { return constant_lazy(1); }

// f = h, fillers 1, three stages: [1, 1, 16, 486, 1, 1, ...]
CfDigits planted() { return build_in_A(all_n(), 1, 3, 100, 0).digits; }

// ------------------------------------------------------------ exact suite

Outcome c1_oracle() {
  std::vector<CfDigits> alphas{golden(), planted()};
  std::vector<AlphaContext> ctxs;
  for (const auto& a : alphas) ctxs.push_back(make_context(a, 10000));
  std::vector<SawtoothCombo> fs{SawtoothCombo::sawtooth(), combo2()};
  std::size_t mism = 0;
  std::string first;
  for (std::uint64_t i = 0; i < 500; ++i) {
    const auto& ctx = ctxs[i % 2];
    const auto& f = fs[(i / 2) % 2];
    Rational x = random_x(kSeedOracle, i);
    BigInt n = static_cast<unsigned long>(1 + mix_seed(kSeedOracle ^ 0xabcdefULL, i) % 10000);
    auto fast = sum_fast(f, ctx, x, n), naive = sum_naive(f, ctx, x, n);
    if (!(fast == naive)) {
      if (mism++ == 0) first = "case " + std::to_string(i) + " n=" + n.get_str();
    }
  }
  return {mism == 0, "500 cases, " + std::to_string(mism) + " mismatches" + (first.empty() ? "" : " (" + first + ")")};
}

Outcome c2_denjoy_koksma() {
  std::size_t checks = 0, bad = 0;
  Rational worst = 0;
  for (const auto& d : {golden(), planted()}) {
    auto conv = convergents(d, 18);
    auto ctx = make_context(d, conv[18].q);
    for (const auto& f : {SawtoothCombo::sawtooth(), combo2()}) {
      Rational V = variation(f);
      for (std::uint64_t i = 0; i < 100; ++i) {
        Rational x = random_x(kSeedDK, i);
        for (std::size_t j = 0; j <= 18; ++j) {
          auto r = sum_fast(f, ctx, x, conv[j].q);
          Rational certified = abs(r.value) + r.error_bound;  // >= |S_{q_j}(alpha, x)|
          if (certified > V) ++bad;
          if (certified / V > worst) worst = certified / V;
          ++checks;
        }
      }
    }
  }
  return {bad == 0, std::to_string(checks) + " sums, " + std::to_string(bad) +
                        " above V(f); max |S|/V = " + fmt(to_double(worst))};
}

Outcome c3_cylinder(const FaultInjection& fault) {
  auto cyl = [&](const std::vector<BigInt>& p) {
    Cylinder c = cylinder(p);
    if (fault.tamper_cylinder) c.measure += Rational(BigInt(1), BigInt("1000000000000"));
    return c;
  };
  std::size_t n = 0, bad_diff = 0, bad_formula = 0;
  std::vector<std::vector<BigInt>> layer{{}};
  for (int depth = 1; depth <= 6; ++depth) {
    std::vector<std::vector<BigInt>> next;
    for (const auto& b : layer)
      for (int a = 1; a <= 4; ++a) {
        auto p = b;
        p.push_back(a);
        next.push_back(p);
        Cylinder c = cyl(p);
        // independent recurrence for q_l, q_{l-1}
        BigInt q0 = 1, q1 = 0;
        for (const auto& v : p) {
          BigInt t = v * q0 + q1;
          q1 = q0;
          q0 = t;
        }
        if (c.measure != c.interval.hi - c.interval.lo) ++bad_diff;
        if (c.measure != Rational(BigInt(1), q0 * (q0 + q1))) ++bad_formula;
        ++n;
      }
    layer = std::move(next);
  }
  std::string detail = std::to_string(n) + " cylinders";
  if (bad_diff) detail += "; invariant 'cylinder measure = endpoint difference' fails " + std::to_string(bad_diff) + "x";
  if (bad_formula) detail += "; invariant 'measure = 1/(q_l(q_l+q_{l-1}))' fails " + std::to_string(bad_formula) + "x";
  return {bad_diff == 0 && bad_formula == 0, detail};
}

Outcome c4_ostrowski() {
  std::vector<CfDigits> seqs{constant_digits(1, 40), constant_digits(2, 40), constant_digits(3, 40),
                             planted().truncated(40)};
  std::vector<BigInt> ramp;
  for (int i = 1; i <= 12; ++i) ramp.push_back(i);
  seqs.push_back(CfDigits::prefix(ramp));
  for (std::uint64_t s = 0; s < 5; ++s) seqs.push_back(gauss_random(60, 500 + s));
  std::size_t bad = 0, checked = 0;
  for (const auto& d : seqs)
    for (long n = 0; n < 100000; ++n) {
      BigInt N = n;
      auto rep = ostrowski_encode(N, d);
      if (ostrowski_decode(rep, d) != N || !ostrowski_violation(rep, d).empty()) ++bad;
      ++checked;
    }
  return {bad == 0, std::to_string(seqs.size()) + " sequences x [0, 1e5): " + std::to_string(checked) + " checked, " +
                        std::to_string(bad) + " failures"};
}

Outcome c5_gluing() {
  Stream rng(kSeedRandomInstances);
  std::size_t bad = 0;
  for (int t = 0; t < 100; ++t) {
    std::vector<BigInt> a, b;
    for (std::uint64_t i = 0, n = 1 + rng.below(8); i < n; ++i) a.push_back(1 + long(rng.below(50)));
    for (std::uint64_t i = 0, n = 1 + rng.below(8); i < n; ++i) b.push_back(1 + long(rng.below(50)));
    auto g = glue(a, b);
    // direct recurrence over the concatenation
    auto ab = a;
    ab.insert(ab.end(), b.begin(), b.end());
    BigInt pm = 1, qm = 0, p = 0, q = 1;
    for (const auto& v : ab) {
      BigInt np = v * p + pm, nq = v * q + qm;
      pm = p;
      qm = q;
      p = np;
      q = nq;
    }
    bool ok = g.holds && g.product[0][0] == pm && g.product[0][1] == p && g.product[1][0] == qm &&
              g.product[1][1] == q && abs(det(g.product)) == 1;
    if (!ok) ++bad;
  }
  return {bad == 0, "100 pairs, " + std::to_string(bad) + " failures"};
}

Outcome c6_d_function() {
  Stream rng(kSeedRandomInstances + 1);
  double worst = 0;
  for (int t = 0; t < 100; ++t) {
    std::size_t d = 1 + rng.below(4);
    std::vector<double> b(d), g(d);
    for (std::size_t m = 0; m < d; ++m) {
      b[m] = 4 * rng.unit() - 2;
      g[m] = rng.unit();
    }
    const int nodes = 10000;
    double quad = 0;
    for (int i = 0; i < nodes; ++i) {
      double y = (i + 0.5) / nodes, s = 0;
      for (std::size_t m = 0; m < d; ++m) s += b[m] * std::sin(2 * M_PI * (y + g[m]));
      quad += s * s;
    }
    quad /= nodes;
    worst = std::max(worst, std::abs(quad - d_value(b, g)));
  }
  return {worst <= 1e-8, "100 instances, max |closed - quadrature| = " + fmt(worst, 3) + " (tol 1e-8)"};
}

Outcome c7_inequalities() {
  Stream rng(kSeedRandomInstances + 2);
  std::size_t bad_mult = 0, bad_pct = 0;
  for (int t = 0; t < 100; ++t) {
    std::vector<RationalInterval> ivs;
    for (std::uint64_t i = 0, n = 1 + rng.below(100); i < n; ++i)
      ivs.push_back(RationalInterval::closed(Rational(long(rng.below(1000)), 1000), Rational(long(rng.below(1000)), 1000)));
    auto r = multiplicity_check(ivs);
    if (!r.holds || (r.K > 0 && r.union_measure * long(r.K) < r.sum_measure)) ++bad_mult;

    // atoms on purpose: values from a small integer range
    std::size_t N = 1 + rng.below(200);
    std::vector<double> v(N);
    for (auto& e : v) e = double(rng.below(20));
    std::sort(v.begin(), v.end());
    long den = 1 + long(rng.below(50));
    Rational tt(1 + long(rng.below(std::uint64_t(den))), den + 1);  // 0 < t < 1
    double cp = percentile_sorted(v, tt, Side::Plus), cm = percentile_sorted(v, tt, Side::Minus);
    auto count_le = [&](double z) { return long(std::upper_bound(v.begin(), v.end(), z) - v.begin()); };
    auto count_lt = [&](double z) { return long(std::lower_bound(v.begin(), v.end(), z) - v.begin()); };
    Rational tN = tt * long(N);
    // chi+ = inf{xi : F(xi) > t}: F(chi+) > t and F(chi+ -) <= t
    bool ok = Rational(count_le(cp)) > tN && Rational(count_lt(cp)) <= tN;
    // chi- = sup{xi : F(xi) < t}: F(chi- -) < t and F(chi-) >= t
    ok = ok && Rational(count_lt(cm)) < tN && Rational(count_le(cm)) >= tN && cm <= cp;
    if (!ok) ++bad_pct;
  }
  return {bad_mult == 0 && bad_pct == 0, "100 interval families, " + std::to_string(bad_mult) +
                                             " multiplicity failures; 100 samples, " + std::to_string(bad_pct) +
                                             " percentile failures"};
}

// ------------------------------------------------------------ statistical suite

Outcome c8_dirichlet() {
  auto c = coprime_density(2000, RationalInterval::open(0, 1));
  double dens = double(c.count) / (2000.0 * 2000.0), target = 3 / (M_PI * M_PI);
  return {std::abs(dens - target) <= 0.01,
          "count/N^2 = " + fmt(dens, 6) + " vs 3/pi^2 = " + fmt(target, 6) + " (tol 0.01)"};
}

Outcome c9_recovery() {
  const std::int64_t N = 100000;
  std::vector<double> v(N);
  for (std::int64_t n = 0; n < N; ++n) v[n] = 5 + 10 * (double(mix_seed(kSeedRecovery, std::uint64_t(n)) >> 11) * 0x1p-53);
  auto st = normalize_star(v, TargetLaw::uniform());
  return {std::abs(st.A - 5) <= 0.5 && std::abs(st.B - 10) <= 0.5,
          "A* = " + fmt(st.A, 6) + ", B* = " + fmt(st.B, 6) + " (tol 0.5)"};
}

// Shared by criteria 10 and 11: the first x in the pinned stream with
// |S_{q_{n_3}}(x)| >= 1/10, as in the lemma on the mass of large sums.
struct TemporalRun {
  Rational x;
  std::uint64_t index = 0;
  ScheduleEntry e;
  std::vector<double> values;
  double ks_schedule = 0;
  std::int64_t mid_N = 0;
  ScanRow mid;
};

const TemporalRun& temporal_run() {
  static const TemporalRun run = [] {
    TemporalRun r;
    auto h = SawtoothCombo::sawtooth();
    auto built = build_in_A(all_n(), 1, 3, 100, 0);
    const auto& st = built.plan.stages[2];
    auto ctx = make_context(built.digits, 1000000);
    bool found = false;
    for (std::uint64_t i = 0; i < 1000 && !found; ++i) {
      try {
        r.e = schedule_thm_uniform(h, ctx, random_x(kSeedTemporal, i), 3, st.n_k, st.r_k, Rational(1, 10));
        r.x = random_x(kSeedTemporal, i);
        r.index = i;
        found = true;
      } catch (const BadSampleError&) {
      }
    }
    if (!found) throw BadSampleError("no x with |mu_3| >= 1/10 in 1000 draws");
    std::int64_t N3 = r.e.N_k.get_si(), q = r.e.q_nk.get_si();
    std::vector<double> block = ensemble(h, ctx, r.x, q).values;
    double Bq = normalize_star(block, TargetLaw::uniform()).B;
    std::int64_t mult = std::max<std::int64_t>(1, std::llround(Bq / std::abs(to_double(r.e.mu))));
    r.mid_N = q * mult;
    r.values = ensemble(h, ctx, r.x, std::max(N3, r.mid_N)).values;
    std::vector<double> head(r.values.begin(), r.values.begin() + N3);
    r.ks_schedule = ks_distance(head, TargetLaw::uniform(), to_double(r.e.A_k), to_double(r.e.B_k));
    r.mid = scan_values(r.values, {r.mid_N})[0];
    return r;
  }();
  return run;
}

Outcome c10_uniform_regime() {
  const auto& r = temporal_run();
  return {r.ks_schedule <= 0.08, "x = random_x(" + std::to_string(kSeedTemporal) + ", " + std::to_string(r.index) +
                                     "), mu_3 = " + fmt(to_double(r.e.mu)) + ", N_3 = " + r.e.N_k.get_str() +
                                     ", KS to U[0,1] = " + fmt(r.ks_schedule) + " (threshold 0.08)"};
}

Outcome c11_nonuniform_regime() {
  const auto& r = temporal_run();
  bool ok = r.mid.ks_conv < r.mid.ks_u01 && r.mid.ks_u01 >= 0.10;
  return {ok, "mid-block N = " + std::to_string(r.mid_N) + ": KS to UniformConv = " + fmt(r.mid.ks_conv) +
                  ", KS to U[0,1] = " + fmt(r.mid.ks_u01) + " (need conv < U and U >= 0.10)"};
}

Outcome c12_mass() {
  auto h = SawtoothCombo::sawtooth();
  auto ctx = make_context(golden(), 1000);
  auto e = mass_above(h, ctx, 6, Rational(1, 10), 10000, kSeedMass, all_n(), 1);
  return {e.mean >= 0.05, "mes{|S_13| >= 0.1} ~ " + fmt(e.mean) + " +- " + fmt(e.stderr_, 2) + " (threshold 0.05)"};
}

Outcome c13_sullivan() {
  auto p = [](std::uint64_t k) { return std::min(0.5, 1.0 / double(k)); };
  auto r = sullivan_sim(p, 1.0, 10000, 1000, kSeedSullivan);
  return {r.estimate.mean >= r.lower_bound - 0.05, "frequency " + fmt(r.estimate.mean) + " over tail [" +
                                                       std::to_string(r.k0) + ", 10000] vs 1/(2D) - 0.05 = " +
                                                       fmt(r.lower_bound - 0.05)};
}

Outcome c14_diamond_vaaler() {
  std::vector<double> v(100);
#pragma omp parallel for schedule(dynamic, 1)
  for (int s = 0; s < 100; ++s) v[std::size_t(s)] = diamond_vaaler(gauss_random(5001, std::uint64_t(s)), 5000);
  std::sort(v.begin(), v.end());
  double med = (v[49] + v[50]) / 2;
  return {med >= 1.2 && med <= 1.7, "median over seeds 0..99 = " + fmt(med) + " (window [1.2, 1.7], 1/ln 2 = 1.4427)"};
}

Outcome c15_gibbs() {
  auto g = gibbs_probe(4, 4);
  bool mono = std::is_sorted(g.G_by_depth.begin(), g.G_by_depth.end());
  bool ok = std::isfinite(g.G) && g.G <= 2 && mono && g.min_ratio >= 1 / g.G && g.max_ratio <= g.G;
  std::string by;
  for (double x : g.G_by_depth) by += (by.empty() ? "" : ", ") + fmt(x);
  return {ok, std::to_string(g.pairs) + " block pairs, ratios in [" + fmt(g.min_ratio) + ", " + fmt(g.max_ratio) +
                  "], G = " + fmt(g.G) + ", G by depth: " + by};
}

}  // namespace

std::vector<CriterionResult> run_criteria(Suite suite, const FaultInjection& fault, const ResultSink& sink) {
  std::vector<CriterionResult> out;
  auto add = [&](CriterionResult r) {
    if (sink) sink(r);
    out.push_back(std::move(r));
  };
  bool exact = suite == Suite::Exact || suite == Suite::All;
  bool stat = suite == Suite::Statistical || suite == Suite::All;
  if (exact) {
    add(timed(1, "Birkhoff oracle equivalence", "exact", kSeedOracle, c1_oracle));
    add(timed(2, "Denjoy-Koksma bound", "exact", kSeedDK, c2_denjoy_koksma));
    add(timed(3, "cylinder formula", "exact", 0, [&] { return c3_cylinder(fault); }));
    add(timed(4, "Ostrowski round trip", "exact", 0, c4_ostrowski));
    add(timed(5, "convergent gluing", "exact", kSeedRandomInstances, c5_gluing));
    add(timed(6, "D-function closed form", "exact", kSeedRandomInstances + 1, c6_d_function));
    add(timed(7, "multiplicity and percentile inequalities", "exact", kSeedRandomInstances + 2, c7_inequalities));
  }
  if (stat) {
    add(timed(8, "Dirichlet density", "statistical", 0, c8_dirichlet));
    add(timed(9, "percentile normalizer recovery", "statistical", kSeedRecovery, c9_recovery));
    add(timed(10, "uniform temporal limit on a planted alpha", "statistical", kSeedTemporal, c10_uniform_regime));
    add(timed(11, "uniform-convolution regime mid-block", "statistical", kSeedTemporal, c11_nonuniform_regime));
    add(timed(12, "mass of large sums", "statistical", kSeedMass, c12_mass));
    add(timed(13, "Sullivan lower bound", "statistical", kSeedSullivan, c13_sullivan));
    add(timed(14, "Diamond-Vaaler statistic", "statistical", 0, c14_diamond_vaaler));
    add(timed(15, "Gibbs ratio probe", "statistical", 0, c15_gibbs));
  }
  return out;
}

// ------------------------------------------------------------ measure battery

std::vector<CriterionResult> run_measure_battery(std::vector<nlohmann::json>& rows, const ResultSink& sink) {
  std::vector<CriterionResult> out;
  auto add = [&](const std::string& name, std::uint64_t seed, const std::function<Outcome()>& fn) {
    auto r = timed(0, name, "measure", seed, fn);
    if (sink) sink(r);
    out.push_back(std::move(r));
  };
  auto exact_row = [&](const std::string& op, const nlohmann::json& params, double value) {
    Estimate e;
    e.mean = value;
    e.n_samples = 1;
    rows.push_back(e.to_row(op, params));
  };
  auto h = SawtoothCombo::sawtooth();
  auto nset = all_n();
  BigInt M = choose_m(nset.lower_density_estimate);
  PsiSpec psi;

  add("mass_above eps1=0.1", kSeedMass, [&] {
    auto ctx = make_context(golden(), 1000);
    auto e = mass_above(h, ctx, 6, Rational(1, 10), 10000, kSeedMass, nset, 1);
    rows.push_back(e.to_row("mass_above", {{"f", "h"}, {"alpha", "golden"}, {"n_index", 6}, {"eps1", "1/10"}}));
    auto zero = mass_above(h, ctx, 6, Rational(0), 1000, kSeedMass, nset, 1);
    rows.push_back(zero.to_row("mass_above", {{"f", "h"}, {"alpha", "golden"}, {"n_index", 6}, {"eps1", "0"}}));
    auto ceil = mass_above(h, ctx, 6, variation(h) + Rational(1, 100), 1000, kSeedMass, nset, 1);
    rows.push_back(ceil.to_row("mass_above", {{"f", "h"}, {"alpha", "golden"}, {"n_index", 6}, {"eps1", "201/100"}}));
    return Outcome{e.mean > 0.05 && zero.mean == 1.0 && ceil.mean == 0.0,
                   "eps1=0.1: " + fmt(e.mean) + ", eps1=0: " + fmt(zero.mean) + ", eps1>V: " + fmt(ceil.mean)};
  });
  add("coprime_density N=2000", 0, [&] {
    auto c = coprime_density(2000, RationalInterval::open(0, 1));
    exact_row("coprime_density", {{"N", 2000}, {"I", "(0,1)"}}, double(c.count) / (2000.0 * 2000.0));
    return Outcome{std::abs(double(c.count) / 4e6 - 3 / (M_PI * M_PI)) <= 0.01, "ratio to asymptotic " + fmt(c.ratio, 6)};
  });
  add("a_k_measure k=8", 0, [&] {
    auto a = a_k_measure(nset, psi, M, 8, RationalInterval::open(Rational(1, 10), Rational(9, 10)));
    exact_row("a_k_measure", {{"k", 8}, {"M", M.get_str()}, {"I", "(1/10,9/10)"}, {"lower", a.lower}, {"upper", a.upper}},
              double(a.measure));
    return Outcome{a.bounds_hold, "measure " + fmt(double(a.measure), 6) + " in [" + fmt(a.lower) + ", " + fmt(a.upper) + "]"};
  });
  add("quasi_independence (7,11)", 0, [&] {
    auto q = quasi_independence(nset, psi, M, 7, 11, RationalInterval::open(Rational(1, 10), Rational(9, 10)), 50);
    exact_row("quasi_independence", {{"k1", 7}, {"k2", 11}, {"M", M.get_str()}, {"I", "(1/10,9/10)"}, {"D", 50}},
              q.ratio);
    return Outcome{q.holds, "ratio " + fmt(q.ratio) + " (calibrated D = 50)"};
  });
  add("diamond_vaaler", 0, [&] {
    double g = diamond_vaaler(constant_digits(1, 101), 100), two = diamond_vaaler(constant_digits(2, 101), 100);
    exact_row("diamond_vaaler", {{"alpha", "golden"}, {"k", 100}}, g);
    exact_row("diamond_vaaler", {{"alpha", "constant:2"}, {"k", 100}}, two);
    return Outcome{std::abs(g - 0.217) < 0.005 && std::abs(two - 0.434) < 0.005,
                   "golden " + fmt(g) + ", all-2 " + fmt(two)};
  });
  add("sullivan_sim", kSeedSullivan, [&] {
    auto p = [](std::uint64_t k) { return std::min(0.5, 1.0 / double(k)); };
    auto d1 = sullivan_sim(p, 1.0, 10000, 1000, kSeedSullivan);
    auto d2 = sullivan_sim(p, 2.0, 10000, 1000, kSeedSullivan);
    auto z = sullivan_sim([](std::uint64_t) { return 0.0; }, 1.0, 10000, 1000, kSeedSullivan);
    rows.push_back(d1.estimate.to_row("sullivan_sim", {{"D", 1}, {"horizon", 10000}, {"k0", d1.k0}}));
    rows.push_back(d2.estimate.to_row("sullivan_sim", {{"D", 2}, {"horizon", 10000}, {"k0", d2.k0}}));
    rows.push_back(z.estimate.to_row("sullivan_sim", {{"D", 1}, {"horizon", 10000}, {"schedule", "zero"}}));
    return Outcome{d1.estimate.mean >= 0.45 && d2.estimate.mean >= 0.2 && z.estimate.mean == 0,
                   "D=1: " + fmt(d1.estimate.mean) + ", D=2: " + fmt(d2.estimate.mean) + ", zero: " + fmt(z.estimate.mean)};
  });
  add("gibbs_probe", 0, [&] {
    auto g = gibbs_probe(4, 4);
    exact_row("gibbs_probe", {{"max_depth", 4}, {"max_digit", 4}}, g.G);
    return Outcome{std::isfinite(g.G) && g.G <= 2, "G = " + fmt(g.G)};
  });
  return out;
}

}  // namespace rotor
