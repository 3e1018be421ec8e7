#include "rotor/measure_lab.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <omp.h>

#include <boost/math/special_functions/trigamma.hpp>

#include "rotor/errors.hpp"

namespace rotor {

// ---------------------------------------------------------------- psi, estimates

double PsiSpec::min_c() { return 1.0 / std::log((1.0 + std::sqrt(5.0)) / 2.0); }

void PsiSpec::validate() const {
  if (!(c > min_c())) throw DomainError("PsiSpec: c must exceed 1/ln(golden ratio) ~ 2.078");
}

double PsiSpec::operator()(double t) const {
  if (!(t > 1)) throw DomainError("PsiSpec: t must exceed 1");
  double l1 = std::log(t);
  double tri = 0;
  if (l1 > 1) {
    double l2 = std::log(l1);
    tri = l1 * l2 * std::log(l2);
  }
  return l1 + c * std::max(0.0, tri);
}

double PsiSpec::at_exp(double k) const {
  if (!(k > 0)) throw DomainError("PsiSpec: k must be positive");
  double tri = 0;
  if (k > 1) {
    double l2 = std::log(k);
    tri = k * l2 * std::log(l2);
  }
  return k + c * std::max(0.0, tri);
}

double PsiSpec::divergence_partial(int K) const {
  double s = 0;
  for (int k = 1; k <= K; ++k) s += 1.0 / at_exp(double(k));
  return s;
}

nlohmann::json Estimate::to_row(const std::string& op, const nlohmann::json& params) const {
  return {{"op", op}, {"params", params}, {"mean", mean}, {"stderr", stderr_}, {"n", n_samples}, {"seed", seed}};
}

namespace {

Estimate bernoulli(std::uint64_t hits, std::uint64_t n, std::uint64_t seed) {
  Estimate e;
  e.n_samples = n;
  e.seed = seed;
  if (n == 0) return e;
  double p = double(hits) / double(n);
  e.mean = p;
  if (n > 1) e.stderr_ = std::sqrt(p * (1 - p) * double(n) / double(n - 1)) / std::sqrt(double(n));
  return e;
}

double unit_uniform(std::uint64_t u) { return double(u >> 11) * 0x1p-53; }

}  // namespace

BigInt choose_m(double density) {
  if (!(density > 0) || density > 1) throw DomainError("choose_m: density must lie in (0, 1]");
  for (long M = 1;; ++M)
    if (boost::math::trigamma(double(M)) < density / 16) return BigInt(M);
}

// ---------------------------------------------------------------- mass_above

namespace {

const BigInt& mass_above_qn(const AlphaContext& ctx, std::size_t n_index, const Rational& eps1,
                            const SyndeticReport& nset, const BigInt& M) {
  if (eps1 < 0) throw DomainError("mass_above: eps1 must be non-negative");
  if (M < 1) throw DomainError("mass_above: M must be >= 1");
  const BigInt& qn = ctx.q(n_index);
  for (BigInt r = 1; r <= M; ++r)
    if (nset.contains(r * qn)) return qn;
  throw DomainError("mass_above: no r <= " + M.get_str() + " puts r q_n = r * " + qn.get_str() + " in the set");
}

}  // namespace

Estimate mass_above(const SawtoothCombo& f, const AlphaContext& ctx, std::size_t n_index, const Rational& eps1,
                    std::uint64_t n_samples, std::uint64_t seed, const SyndeticReport& nset, const BigInt& M) {
  const BigInt& qn = mass_above_qn(ctx, n_index, eps1, nset, M);
  std::uint64_t hits = 0;
  const auto n = static_cast<std::int64_t>(n_samples);
#pragma omp parallel for reduction(+ : hits) schedule(dynamic, 64)
  for (std::int64_t i = 0; i < n; ++i) {
    Rational v = sum_fast(f, ctx, random_x(seed, std::uint64_t(i)), qn).value;
    if (abs(v) >= eps1) ++hits;
  }
  return bernoulli(hits, n_samples, seed);
}

Estimate mass_above_serial(const SawtoothCombo& f, const AlphaContext& ctx, std::size_t n_index, const Rational& eps1,
                           std::uint64_t n_samples, std::uint64_t seed, const SyndeticReport& nset, const BigInt& M) {
  const BigInt& qn = mass_above_qn(ctx, n_index, eps1, nset, M);
  std::uint64_t hits = 0;
  for (std::uint64_t i = 0; i < n_samples; ++i)
    if (abs(sum_fast(f, ctx, random_x(seed, i), qn).value) >= eps1) ++hits;
  return bernoulli(hits, n_samples, seed);
}

// ---------------------------------------------------------------- Sullivan

namespace {

struct PairedSchedule {
  std::vector<double> p;  // p[k], k = 0..horizon (+1 padding), p[0] unused
  std::uint64_t k0 = 1;
  double tail = 0;
};

PairedSchedule prepare_schedule(const Schedule& sched, double D, std::uint64_t horizon) {
  if (!(D >= 1)) throw DomainError("sullivan_sim: D must be >= 1");
  if (horizon < 1) throw DomainError("sullivan_sim: horizon must be >= 1");
  PairedSchedule s;
  s.p.assign(horizon + 2, 0.0);
  for (std::uint64_t k = 1; k <= horizon; ++k) {
    double v = sched(k);
    if (!(v >= 0 && v <= 1)) throw DomainError("sullivan_sim: p_" + std::to_string(k) + " outside [0, 1]");
    s.p[k] = v;
  }
  for (std::uint64_t k = 1; k <= horizon; k += 2) {
    double a = s.p[k], b = s.p[k + 1];
    if (D * a * b > std::min(a, b) || a + b - D * a * b > 1)
      throw DomainError("sullivan_sim: coupling factor D too large for p_" + std::to_string(k));
  }
  double suffix = 0;
  s.k0 = 1;
  for (std::uint64_t k = horizon; k >= 1; --k) {
    suffix += s.p[k];
    if (suffix >= 1) {
      s.k0 = k;
      break;
    }
  }
  s.tail = 0;
  for (std::uint64_t k = s.k0; k <= horizon; ++k) s.tail += s.p[k];
  return s;
}

bool sullivan_trial(const PairedSchedule& s, double D, std::uint64_t horizon, std::uint64_t stream) {
  std::uint64_t first_pair = (s.k0 + 1) / 2;
  for (std::uint64_t j = first_pair; 2 * j - 1 <= horizon; ++j) {
    std::uint64_t ka = 2 * j - 1, kb = 2 * j;
    double pa = s.p[ka], pb = kb <= horizon ? s.p[kb] : 0.0;
    double u = unit_uniform(mix_seed(stream, j));
    bool A = u < pa;
    double joint = D * pa * pb;
    bool B = u < joint || (u >= pa && u < pa + pb - joint);
    if ((A && ka >= s.k0) || (B && kb >= s.k0 && kb <= horizon)) return true;
  }
  return false;
}

SullivanResult sullivan_finish(const PairedSchedule& s, double D, std::uint64_t hits, std::uint64_t trials,
                               std::uint64_t seed) {
  SullivanResult r;
  r.estimate = bernoulli(hits, trials, seed);
  r.k0 = s.k0;
  r.tail_mass = s.tail;
  r.lower_bound = 1.0 / (2.0 * D);
  return r;
}

}  // namespace

SullivanResult sullivan_sim(const Schedule& p, double D, std::uint64_t horizon, std::uint64_t trials,
                            std::uint64_t seed) {
  PairedSchedule s = prepare_schedule(p, D, horizon);
  std::uint64_t hits = 0;
  const auto n = static_cast<std::int64_t>(trials);
#pragma omp parallel for reduction(+ : hits) schedule(dynamic, 16)
  for (std::int64_t t = 0; t < n; ++t)
    if (sullivan_trial(s, D, horizon, mix_seed(seed, std::uint64_t(t)))) ++hits;
  return sullivan_finish(s, D, hits, trials, seed);
}

SullivanResult sullivan_sim_serial(const Schedule& p, double D, std::uint64_t horizon, std::uint64_t trials,
                                   std::uint64_t seed) {
  PairedSchedule s = prepare_schedule(p, D, horizon);
  std::uint64_t hits = 0;
  for (std::uint64_t t = 0; t < trials; ++t)
    if (sullivan_trial(s, D, horizon, mix_seed(seed, t))) ++hits;
  return sullivan_finish(s, D, hits, trials, seed);
}

double diamond_vaaler(const CfDigits& d, std::size_t k) {
  if (k < 3) throw DomainError("diamond_vaaler: k must be >= 3");
  if (!d.has(k + 1)) throw HorizonError("diamond_vaaler: needs a_1 .. a_" + std::to_string(k + 1));
  BigInt sum = 0, mx = 0;
  for (std::size_t j = 1; j <= k + 1; ++j) {
    BigInt a = d.a(j);
    sum += a;
    if (a > mx) mx = a;
  }
  return to_double(Rational(sum - mx)) / (double(k) * std::log(double(k)));
}

// ---------------------------------------------------------------- exact helpers

namespace {

using i128 = __int128;

// I subset of [0, 1] with small integer endpoints.
struct Ends {
  std::int64_t ulo = 0, vlo = 1, uhi = 0, vhi = 1;
  bool lo_closed = true, hi_closed = true;
  bool empty = false;
};

Ends ends_of(const RationalInterval& I, const char* who) {
  if (I.lo < 0 || I.hi > 1) throw DomainError(std::string(who) + ": interval must lie in [0, 1]");
  Ends e;
  e.empty = I.empty();
  if (e.empty) return e;
  Rational lo = I.lo, hi = I.hi;
  lo.canonicalize();
  hi.canonicalize();
  const BigInt limit = BigInt(1) << 28;
  if (lo.get_den() > limit || hi.get_den() > limit)
    throw DomainError(std::string(who) + ": interval endpoints need denominators below 2^28");
  e.ulo = lo.get_num().get_si();
  e.vlo = lo.get_den().get_si();
  e.uhi = hi.get_num().get_si();
  e.vhi = hi.get_den().get_si();
  e.lo_closed = I.lo_closed;
  e.hi_closed = I.hi_closed;
  return e;
}

// Integers m with m/n in I, clamped to [lo_clamp, hi_clamp]; empty when first > second.
std::pair<std::int64_t, std::int64_t> m_range(const Ends& e, std::int64_t n, std::int64_t lo_clamp,
                                              std::int64_t hi_clamp) {
  if (e.empty) return {1, 0};
  i128 a = i128(e.ulo) * n, b = i128(e.uhi) * n;  // non-negative
  std::int64_t mlo = e.lo_closed ? std::int64_t((a + e.vlo - 1) / e.vlo) : std::int64_t(a / e.vlo + 1);
  std::int64_t mhi = e.hi_closed ? std::int64_t(b / e.vhi) : std::int64_t((b + e.vhi - 1) / e.vhi - 1);
  return {std::max(mlo, lo_clamp), std::min(mhi, hi_clamp)};
}

}  // namespace

// ---------------------------------------------------------------- coprime density

namespace {

CoprimeCount coprime_finish(std::int64_t N, const RationalInterval& I, std::int64_t count) {
  CoprimeCount c;
  c.count = count;
  double mes = I.empty() ? 0.0 : to_double(I.measure());
  c.asymptotic = 3.0 * mes * double(N) * double(N) / (M_PI * M_PI);
  c.ratio = c.asymptotic > 0 ? double(count) / c.asymptotic : 0.0;
  return c;
}

std::int64_t coprime_row(const Ends& e, std::int64_t n, std::int64_t N) {
  auto [lo, hi] = m_range(e, n, 0, N);
  std::int64_t c = 0;
  for (std::int64_t m = lo; m <= hi; ++m) c += (std::gcd(m, n) == 1);
  return c;
}

}  // namespace

CoprimeCount coprime_density(std::int64_t N, const RationalInterval& I) {
  if (N < 1) throw DomainError("coprime_density: N must be >= 1");
  Ends e = ends_of(I, "coprime_density");
  std::int64_t count = 0;
#pragma omp parallel for reduction(+ : count) schedule(dynamic, 32)
  for (std::int64_t n = 1; n <= N; ++n) count += coprime_row(e, n, N);
  return coprime_finish(N, I, count);
}

CoprimeCount coprime_density_serial(std::int64_t N, const RationalInterval& I) {
  if (N < 1) throw DomainError("coprime_density: N must be >= 1");
  Ends e = ends_of(I, "coprime_density");
  std::int64_t count = 0;
  for (std::int64_t n = 1; n <= N; ++n) count += coprime_row(e, n, N);
  return coprime_finish(N, I, count);
}

// ---------------------------------------------------------------- multiplicity, Gibbs

MultiplicityReport multiplicity_check(const std::vector<RationalInterval>& intervals) {
  // Sweep over endpoints; closings before openings at equal coordinates, so
  // intervals that only touch do not count as overlapping.
  std::vector<std::pair<Rational, int>> ev;
  MultiplicityReport rep;
  rep.sum_measure = 0;
  rep.union_measure = 0;
  for (const auto& iv : intervals) {
    if (!(iv.lo < iv.hi)) continue;
    ev.emplace_back(iv.lo, +1);
    ev.emplace_back(iv.hi, -1);
    rep.sum_measure += iv.hi - iv.lo;
  }
  std::sort(ev.begin(), ev.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return a.second < b.second;
  });
  long cover = 0;
  for (std::size_t i = 0; i < ev.size();) {
    std::size_t j = i;
    while (j < ev.size() && ev[j].first == ev[i].first) cover += ev[j++].second;
    if (j < ev.size() && cover > 0) {
      rep.union_measure += ev[j].first - ev[i].first;
      rep.K = std::max<std::size_t>(rep.K, std::size_t(cover));
    }
    i = j;
  }
  rep.union_measure.canonicalize();
  rep.sum_measure.canonicalize();
  rep.holds = rep.K == 0 ? rep.sum_measure == 0 : rep.union_measure * Rational(long(rep.K)) >= rep.sum_measure;
  return rep;
}

GibbsReport gibbs_probe(std::size_t max_depth, unsigned max_digit) {
  if (max_depth < 1 || max_digit < 1) throw DomainError("gibbs_probe: depth and digit bound must be >= 1");
  std::vector<std::vector<BigInt>> blocks;
  std::vector<std::vector<BigInt>> layer{{}};
  for (std::size_t len = 1; len <= max_depth; ++len) {
    std::vector<std::vector<BigInt>> next;
    for (const auto& b : layer)
      for (unsigned a = 1; a <= max_digit; ++a) {
        auto c = b;
        c.push_back(a);
        next.push_back(c);
      }
    blocks.insert(blocks.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  std::vector<Rational> mes;
  for (const auto& b : blocks) mes.push_back(cylinder(b).measure);

  GibbsReport rep;
  std::vector<Rational> lo_d(max_depth + 1, Rational(-1)), hi_d(max_depth + 1, Rational(-1));
  for (std::size_t i = 0; i < blocks.size(); ++i)
    for (std::size_t j = 0; j < blocks.size(); ++j) {
      auto ab = blocks[i];
      ab.insert(ab.end(), blocks[j].begin(), blocks[j].end());
      Rational r = cylinder(ab).measure / (mes[i] * mes[j]);
      std::size_t d = std::max(blocks[i].size(), blocks[j].size());
      if (lo_d[d] < 0 || r < lo_d[d]) lo_d[d] = r;
      if (hi_d[d] < 0 || r > hi_d[d]) hi_d[d] = r;
      ++rep.pairs;
    }
  Rational lo = -1, hi = -1;
  for (std::size_t d = 1; d <= max_depth; ++d) {
    if (lo < 0 || lo_d[d] < lo) lo = lo_d[d];
    if (hi < 0 || hi_d[d] > hi) hi = hi_d[d];
    rep.G_by_depth.push_back(std::max(to_double(hi), 1.0 / to_double(lo)));
  }
  rep.min_ratio = to_double(lo);
  rep.max_ratio = to_double(hi);
  rep.G = rep.G_by_depth.back();
  return rep;
}

// ---------------------------------------------------------------- A_k unions

namespace {

// Endpoint value num / (n 2^64); num < 2^94 and n < 2^29 keep products in 128 bits.
struct Pt {
  i128 num;
  std::int64_t n;
};
bool operator<(const Pt& a, const Pt& b) { return a.num * b.n < b.num * a.n; }
bool operator<=(const Pt& a, const Pt& b) { return !(b < a); }

constexpr std::int64_t kMaxDen = std::int64_t(1) << 28;
const i128 kS = i128(1) << 64;

// Interval |n alpha - m| <= R / 2^64.
struct Iv {
  std::int64_t m, n;
  std::uint64_t R;
  Pt lo() const { return {i128(m) * kS - i128(R), n}; }
  Pt hi() const { return {i128(m) * kS + i128(R), n}; }
};

struct Comp {
  Pt lo, hi;
};

long double length(const Comp& c) {
  i128 num = c.hi.num * c.lo.n - c.lo.num * c.hi.n;
  if (num <= 0) return 0;
  return (static_cast<long double>(num) / static_cast<long double>(c.hi.n * c.lo.n)) / 0x1p64L;
}

long double measure(const std::vector<Comp>& u) {
  long double s = 0;
  for (const auto& c : u) s += length(c);
  return s;
}

std::vector<Comp> merge(std::vector<Iv> ivs) {
  std::sort(ivs.begin(), ivs.end(), [](const Iv& a, const Iv& b) { return a.lo() < b.lo(); });
  std::vector<Comp> out;
  for (const auto& iv : ivs) {
    Pt lo = iv.lo(), hi = iv.hi();
    if (!out.empty() && lo <= out.back().hi) {
      if (out.back().hi < hi) out.back().hi = hi;
    } else {
      out.push_back({lo, hi});
    }
  }
  return out;
}

std::vector<Comp> intersect(const std::vector<Comp>& a, const std::vector<Comp>& b) {
  std::vector<Comp> out;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    Pt lo = a[i].lo < b[j].lo ? b[j].lo : a[i].lo;
    Pt hi = a[i].hi < b[j].hi ? a[i].hi : b[j].hi;
    if (lo < hi) out.push_back({lo, hi});
    if (a[i].hi < b[j].hi)
      ++i;
    else
      ++j;
  }
  return out;
}

// Closure of I; boundary points carry no measure.
std::vector<Comp> clip(const std::vector<Comp>& u, const Ends& e) {
  if (e.empty) return {};
  std::vector<Comp> box{{{i128(e.ulo) * kS, e.vlo}, {i128(e.uhi) * kS, e.vhi}}};
  return intersect(u, box);
}

// Centres at level k: n in [n_lo, n_hi] cap N, reduced denominators n2 with the
// smallest admissible multiplier r_min(n2).
struct Level {
  std::size_t k = 0;
  std::int64_t n_lo = 0, n_hi = 0, M = 1;
  std::uint64_t R = 0;
  long double rho = 0;
  std::vector<char> in_set;   // n - n_lo
  std::int64_t n2_lo = 1;
  std::vector<int> r_min;     // n2 - n2_lo; 0 when no r works
  std::vector<int> r_count;   // admissible r per n2
  std::vector<std::pair<std::int64_t, std::int64_t>> m2_range;  // m2 with m2/n2 in I
};

Level make_level(const SyndeticReport& nset, const PsiSpec& psi, const BigInt& M, std::size_t k, const Ends& e) {
  psi.validate();
  if (k < 1) throw DomainError("A_k: k must be >= 1");
  if (M < 1) throw DomainError("A_k: M must be >= 1");
  Level L;
  L.k = k;
  long double ek = std::exp(static_cast<long double>(k));
  L.n_lo = std::max<std::int64_t>(2, std::int64_t(std::ceil(std::exp(static_cast<long double>(k) - 1))));
  L.n_hi = std::int64_t(std::floor(ek));
  if (L.n_hi >= kMaxDen) throw DomainError("A_k: k too large for exact enumeration");
  L.M = M > L.n_hi ? L.n_hi : M.get_si();
  long double rho = 1.0L / (ek * static_cast<long double>(psi.at_exp(double(k))));
  L.R = static_cast<std::uint64_t>(std::roundl(std::ldexp(rho, 64)));
  L.rho = std::ldexp(static_cast<long double>(L.R), -64);

  std::int64_t width = L.n_hi - L.n_lo + 1;
  L.in_set.assign(std::size_t(std::max<std::int64_t>(width, 0)), 0);
  for (std::int64_t n = L.n_lo; n <= L.n_hi; ++n) L.in_set[n - L.n_lo] = nset.contains(BigInt(long(n)));

  L.n2_lo = std::max<std::int64_t>(1, (L.n_lo + L.M - 1) / L.M);
  std::int64_t w2 = std::max<std::int64_t>(L.n_hi - L.n2_lo + 1, 0);
  L.r_min.assign(std::size_t(w2), 0);
  L.r_count.assign(std::size_t(w2), 0);
  L.m2_range.assign(std::size_t(w2), {1, 0});
  for (std::int64_t n2 = L.n2_lo; n2 <= L.n_hi; ++n2) {
    std::int64_t r0 = std::max<std::int64_t>(1, (L.n_lo + n2 - 1) / n2);
    for (std::int64_t r = r0; r <= L.M && r * n2 <= L.n_hi; ++r)
      if (L.in_set[r * n2 - L.n_lo]) {
        if (L.r_min[n2 - L.n2_lo] == 0) L.r_min[n2 - L.n2_lo] = int(r);
        ++L.r_count[n2 - L.n2_lo];
      }
    L.m2_range[n2 - L.n2_lo] = m_range(e, n2, 1, n2 - 1);
  }
  return L;
}

// One interval per reduced centre (the widest of its nested family).
std::vector<Iv> reduced_intervals(const Level& L) {
  std::vector<Iv> out;
  for (std::int64_t n2 = L.n2_lo; n2 <= L.n_hi; ++n2) {
    int r = L.r_min[n2 - L.n2_lo];
    if (r == 0) continue;
    auto [lo, hi] = L.m2_range[n2 - L.n2_lo];
    for (std::int64_t m2 = lo; m2 <= hi; ++m2)
      if (std::gcd(m2, n2) == 1) out.push_back({r * m2, r * n2, L.R});
  }
  return out;
}

// Every (m, n) in Omega_k(I).
std::vector<Iv> all_pair_intervals(const Level& L, const Ends& e) {
  std::vector<Iv> out;
  for (std::int64_t n = L.n_lo; n <= L.n_hi; ++n) {
    if (!L.in_set[n - L.n_lo]) continue;
    auto [lo, hi] = m_range(e, n, 1, n - 1);
    for (std::int64_t m = lo; m <= hi; ++m)
      if (std::gcd(m, n) <= L.M) out.push_back({m, n, L.R});
  }
  return out;
}

// Distinct reduced centres are >= 1/n_hi^2 apart; intervals have half-width
// at most rho / n_lo.
bool disjoint_certified(const Level& L) {
  return i128(2) * i128(L.R) * i128(L.n_hi) * i128(L.n_hi) < kS * i128(L.n_lo);
}

std::vector<std::int64_t> distinct_primes(std::int64_t n) {
  std::vector<std::int64_t> ps;
  for (std::int64_t p = 2; p * p <= n; ++p)
    if (n % p == 0) {
      ps.push_back(p);
      while (n % p == 0) n /= p;
    }
  if (n > 1) ps.push_back(n);
  return ps;
}

// #{1 <= m < n : gcd(m, n) = 1, m/n in I} by Moebius inversion over squarefree divisors.
std::int64_t phi_I(const Ends& e, std::int64_t n) {
  auto ps = distinct_primes(n);
  std::int64_t total = 0;
  for (std::uint32_t mask = 0; mask < (1u << ps.size()); ++mask) {
    std::int64_t d = 1;
    int sign = 1;
    for (std::size_t i = 0; i < ps.size(); ++i)
      if (mask & (1u << i)) {
        d *= ps[i];
        sign = -sign;
      }
    // m = d m', m/n = m'/(n/d)
    std::int64_t nd = n / d;
    auto [lo, hi] = m_range(e, nd, 1, nd - 1);
    if (hi >= lo) total += sign * (hi - lo + 1);
  }
  return total;
}

AkMeasure ak_header(const Level& L, const SyndeticReport& nset, const PsiSpec& psi, const Ends& e,
                    const RationalInterval& I) {
  AkMeasure a;
  a.k = L.k;
  a.rho = double(L.rho);
  double mes = e.empty ? 0.0 : to_double(I.measure());
  double ps = psi.at_exp(double(L.k));
  a.lower = nset.lower_density_estimate * mes / (4.0 * double(L.M) * ps);
  a.upper = 6.0 * mes / ps;
  a.disjoint_certified = disjoint_certified(L);
  return a;
}

void ak_finish(AkMeasure& a) {
  a.bounds_hold = double(a.measure) >= a.lower && double(a.measure) <= a.upper;
}

}  // namespace

nlohmann::json AkMeasure::to_json() const {
  return {{"k", k},           {"rho", rho},     {"card_omega", card_omega}, {"measure", double(measure)},
          {"lower", lower},   {"upper", upper}, {"bounds_hold", bounds_hold},
          {"disjoint_certified", disjoint_certified}, {"route", route}};
}

nlohmann::json QuasiReport::to_json() const {
  return {{"k1", k1},        {"k2", k2}, {"joint", double(joint)}, {"m1", double(m1)}, {"m2", double(m2)},
          {"ratio", ratio},  {"D", D},   {"holds", holds},         {"route", route}};
}

AkMeasure a_k_measure(const SyndeticReport& nset, const PsiSpec& psi, const BigInt& M, std::size_t k,
                      const RationalInterval& I) {
  Ends e = ends_of(I, "a_k_measure");
  Level L = make_level(nset, psi, M, k, e);
  AkMeasure a = ak_header(L, nset, psi, e, I);
  std::uint64_t card = 0;
  long double mes = 0;
  for (std::int64_t n2 = L.n2_lo; n2 <= L.n_hi; ++n2) {
    int r = L.r_min[n2 - L.n2_lo];
    if (r == 0) continue;
    std::int64_t phi = phi_I(e, n2);
    card += std::uint64_t(phi) * std::uint64_t(L.r_count[n2 - L.n2_lo]);
    mes += static_cast<long double>(phi) * 2.0L * L.rho / static_cast<long double>(r * n2);
  }
  a.card_omega = card;
  if (a.disjoint_certified) {
    a.measure = mes;
    a.route = "per-denominator";
  } else {
    a.measure = measure(merge(reduced_intervals(L)));
    a.route = "explicit-union";
  }
  ak_finish(a);
  return a;
}

AkMeasure a_k_measure_brute(const SyndeticReport& nset, const PsiSpec& psi, const BigInt& M, std::size_t k,
                            const RationalInterval& I) {
  Ends e = ends_of(I, "a_k_measure");
  Level L = make_level(nset, psi, M, k, e);
  AkMeasure a = ak_header(L, nset, psi, e, I);
  auto ivs = all_pair_intervals(L, e);
  a.card_omega = ivs.size();
  a.measure = measure(merge(std::move(ivs)));
  a.route = "brute";
  ak_finish(a);
  return a;
}

// ---------------------------------------------------------------- quasi-independence

namespace {

void check_apart(const BigInt& M, std::size_t& k1, std::size_t& k2) {
  if (k1 > k2) std::swap(k1, k2);
  if (!(double(k2 - k1) > std::log(to_double(Rational(M))) + 1))
    throw DomainError("quasi_independence: needs |k1 - k2| > ln M + 1");
}

std::int64_t inverse_mod(std::int64_t a, std::int64_t m) {
  std::int64_t g = m, x = 0, x1 = 1, a1 = a % m;
  while (a1 != 0) {
    std::int64_t q = g / a1;
    std::tie(g, a1) = std::make_pair(a1, g - q * a1);
    std::tie(x, x1) = std::make_pair(x1, x - q * x1);
  }
  return ((x % m) + m) % m;
}

// Level-L2 centre intervals whose centre lies within delta of u/v (gcd(u, v) = 1).
// A superset filter: later steps are exact.
void near_centres(const Level& L2, std::int64_t u, std::int64_t v, long double delta, std::vector<Iv>& out) {
  const long double slack = 1 + 1e-9L;
  std::int64_t J = std::int64_t(std::floor(static_cast<long double>(L2.n_hi) * v * delta * slack)) + 1;
  std::int64_t inv = v > 1 ? inverse_mod(u, v) : 0;
  for (std::int64_t j = -J; j <= J; ++j) {
    // m2 v - n2 u = j
    std::int64_t start = L2.n2_lo;
    if (v > 1) {
      std::int64_t res = ((-(j % v) * inv) % v + v) % v;  // n2 = res mod v
      start = L2.n2_lo + ((res - L2.n2_lo % v) % v + v) % v;
    }
    for (std::int64_t n2 = start; n2 <= L2.n_hi; n2 += v) {
      int r = L2.r_min[n2 - L2.n2_lo];
      if (r == 0) continue;
      i128 num = i128(j) + i128(n2) * u;
      if (v == 1 ? false : num % v != 0) continue;
      std::int64_t m2 = std::int64_t(num / v);
      auto [lo, hi] = L2.m2_range[n2 - L2.n2_lo];
      if (m2 < lo || m2 > hi) continue;
      if (static_cast<long double>(std::llabs(j)) > static_cast<long double>(n2) * v * delta * slack + 1e-9L) continue;
      if (std::gcd(m2, n2) != 1) continue;
      out.push_back({r * m2, r * n2, L2.R});
    }
  }
}

std::vector<Iv> dedupe(std::vector<Iv> v) {
  std::sort(v.begin(), v.end(), [](const Iv& a, const Iv& b) { return a.n != b.n ? a.n < b.n : a.m < b.m; });
  v.erase(std::unique(v.begin(), v.end(), [](const Iv& a, const Iv& b) { return a.n == b.n && a.m == b.m; }),
          v.end());
  return v;
}

QuasiReport quasi_finish(std::size_t k1, std::size_t k2, long double joint, long double m1, long double m2,
                         const RationalInterval& I, double D, const char* route) {
  QuasiReport q;
  q.k1 = k1;
  q.k2 = k2;
  q.joint = joint;
  q.m1 = m1;
  q.m2 = m2;
  q.D = D;
  long double mes = I.empty() ? 0.0L : static_cast<long double>(to_double(I.measure()));
  q.ratio = (m1 > 0 && m2 > 0) ? double(joint * mes / (m1 * m2)) : 0.0;
  q.holds = q.ratio <= D;
  q.route = route;
  return q;
}

}  // namespace

QuasiReport quasi_independence(const SyndeticReport& nset, const PsiSpec& psi, const BigInt& M, std::size_t k1,
                               std::size_t k2, const RationalInterval& I, double D) {
  check_apart(M, k1, k2);
  Ends e = ends_of(I, "quasi_independence");
  Level L1 = make_level(nset, psi, M, k1, e);
  Level L2 = make_level(nset, psi, M, k2, e);

  std::vector<Iv> c1 = reduced_intervals(L1);
  std::vector<Comp> U1 = merge(c1);
  long double m1 = measure(clip(U1, e));

  // mes(A_k2 cap I): exact per-denominator sum, minus the parts of boundary
  // intervals that stick out of I.
  long double m2 = 0;
  if (disjoint_certified(L2)) {
    for (std::int64_t n2 = L2.n2_lo; n2 <= L2.n_hi; ++n2) {
      int r = L2.r_min[n2 - L2.n2_lo];
      if (r != 0) m2 += static_cast<long double>(phi_I(e, n2)) * 2.0L * L2.rho / static_cast<long double>(r * n2);
    }
    long double w2max = L2.rho / static_cast<long double>(L2.n_lo);
    std::vector<Iv> edge;
    if (!e.empty) {
      near_centres(L2, e.ulo, e.vlo, w2max, edge);
      near_centres(L2, e.uhi, e.vhi, w2max, edge);
    }
    auto eu = merge(dedupe(std::move(edge)));
    m2 -= measure(eu) - measure(clip(eu, e));
  } else {
    m2 = measure(clip(merge(reduced_intervals(L2)), e));
  }

  long double w2max = L2.rho / static_cast<long double>(L2.n_lo);
  const auto n1 = static_cast<std::int64_t>(c1.size());
  long double joint = 0;
  if (disjoint_certified(L1) && disjoint_certified(L2)) {
    // Both families are disjoint: the joint measure is a sum over overlapping
    // (k1 centre, k2 centre) pairs. Per-centre partial sums keep the total
    // independent of the thread count.
    std::vector<long double> part(std::size_t(n1), 0.0L);
#pragma omp parallel
    {
      std::vector<Iv> local;
#pragma omp for schedule(dynamic, 256)
      for (std::int64_t i = 0; i < n1; ++i) {
        const Iv& c = c1[i];
        std::int64_t g = std::gcd(c.m, c.n);
        local.clear();
        near_centres(L2, c.m / g, c.n / g, L1.rho / static_cast<long double>(c.n) + w2max, local);
        std::vector<Comp> mine = clip({{c.lo(), c.hi()}}, e);
        if (mine.empty()) continue;
        long double s = 0;
        for (const auto& iv : local) {
          Pt lo = iv.lo() < mine[0].lo ? mine[0].lo : iv.lo();
          Pt hi = mine[0].hi < iv.hi() ? mine[0].hi : iv.hi();
          if (lo < hi) s += length({lo, hi});
        }
        part[std::size_t(i)] = s;
      }
    }
    for (long double v : part) joint += v;
  } else {
    std::vector<Iv> cand;
#pragma omp parallel
    {
      std::vector<Iv> local;
#pragma omp for schedule(dynamic, 256) nowait
      for (std::int64_t i = 0; i < n1; ++i) {
        const Iv& c = c1[i];
        std::int64_t g = std::gcd(c.m, c.n);
        near_centres(L2, c.m / g, c.n / g, L1.rho / static_cast<long double>(c.n) + w2max, local);
      }
#pragma omp critical
      cand.insert(cand.end(), local.begin(), local.end());
    }
    joint = measure(clip(intersect(U1, merge(dedupe(std::move(cand)))), e));
  }
  return quasi_finish(k1, k2, joint, m1, m2, I, D, "farey-window");
}

QuasiReport quasi_independence_brute(const SyndeticReport& nset, const PsiSpec& psi, const BigInt& M, std::size_t k1,
                                     std::size_t k2, const RationalInterval& I, double D) {
  check_apart(M, k1, k2);
  Ends e = ends_of(I, "quasi_independence");
  Level L1 = make_level(nset, psi, M, k1, e);
  Level L2 = make_level(nset, psi, M, k2, e);
  auto U1 = merge(all_pair_intervals(L1, e));
  auto U2 = merge(all_pair_intervals(L2, e));
  long double m1 = measure(clip(U1, e));
  long double m2 = measure(clip(U2, e));
  long double joint = measure(clip(intersect(U1, U2), e));
  return quasi_finish(k1, k2, joint, m1, m2, I, D, "brute");
}

}  // namespace rotor
