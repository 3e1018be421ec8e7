// Serial references against their OpenMP kernels, and the naive Birkhoff sum
// against the floor-sum route. Each pair is also checked for identical output.
#include <omp.h>

#include <chrono>
#include <cstdio>
#include <functional>

#include "rotor/alpha_builder.hpp"
#include "rotor/measure_lab.hpp"
#include "rotor/temporal.hpp"

using namespace rotor;

namespace {

double seconds(const std::function<void()>& fn, int reps = 3) {
  double best = 1e300;
  for (int i = 0; i < reps; ++i) {
    auto t0 = std::chrono::steady_clock::now();
    fn();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

void row(const char* name, double ref, double fast, bool same) {
  std::printf("%-34s %12.4f %12.4f %9.2fx  %s\n", name, ref, fast, ref / fast, same ? "same" : "DIFFERENT");
}

}  // namespace

int main() {
  std::printf("threads: %d\n", omp_get_max_threads());
  std::printf("%-34s %12s %12s %10s\n", "kernel", "reference s", "kernel s", "speedup");
  auto h = SawtoothCombo::sawtooth();
  auto golden = constant_lazy(1);

  {
    auto ctx = make_context(golden, 100000);
    Rational x(1, 3);
    for (long n : {1000L, 100000L}) {
      SumResult a, b;
      double tn = seconds([&] { a = sum_naive(h, ctx, x, n); }, 1);
      double tf = seconds([&] { b = sum_fast(h, ctx, x, n); });
      char name[64];
      std::snprintf(name, sizeof name, "birkhoff naive/fast n=%ld", n);
      row(name, tn, tf, a == b);
    }
  }
  {
    auto ctx = make_context(golden, 200000);
    TemporalEnsemble a, b;
    double ts = seconds([&] { a = ensemble_serial(h, ctx, Rational(1, 3), 200000); });
    double tp = seconds([&] { b = ensemble(h, ctx, Rational(1, 3), 200000); });
    row("ensemble N=2e5", ts, tp, a.values == b.values);
  }
  {
    auto I = RationalInterval::open(0, 1);
    CoprimeCount a, b;
    double ts = seconds([&] { a = coprime_density_serial(4000, I); });
    double tp = seconds([&] { b = coprime_density(4000, I); });
    row("coprime_density N=4000", ts, tp, a.count == b.count);
  }
  {
    auto ctx = make_context(golden, 1000);
    auto nset = syndetic_scan(h, 0.25, 100);
    Estimate a, b;
    double ts = seconds([&] { a = mass_above_serial(h, ctx, 6, Rational(1, 10), 20000, 7, nset, 1); });
    double tp = seconds([&] { b = mass_above(h, ctx, 6, Rational(1, 10), 20000, 7, nset, 1); });
    row("mass_above 2e4 samples", ts, tp, a.mean == b.mean);
  }
  {
    auto p = [](std::uint64_t k) { return std::min(0.5, 1.0 / double(k)); };
    SullivanResult a, b;
    double ts = seconds([&] { a = sullivan_sim_serial(p, 1.0, 10000, 2000, 3); });
    double tp = seconds([&] { b = sullivan_sim(p, 1.0, 10000, 2000, 3); });
    row("sullivan_sim 2e3 trials", ts, tp, a.estimate.mean == b.estimate.mean);
  }
  {
    SawtoothCombo f{{Rational(1), Rational(-1, 2)}, {Rational(0), Rational(2, 7)}};
    SyndeticReport a, b;
    double ts = seconds([&] { a = syndetic_scan_serial(f, 0.3, 200000); });
    double tp = seconds([&] { b = syndetic_scan(f, 0.3, 200000); });
    row("syndetic_scan n_max=2e5", ts, tp, a.members == b.members);
  }
  return 0;
}
