#include "rotor/birkhoff.hpp"

#include <algorithm>

#include "rotor/errors.hpp"

namespace rotor {

// ---------------------------------------------------------------- context

const BigInt& AlphaContext::q(std::size_t j) const {
  if (j >= conv.size()) throw HorizonError("context holds q_j only for j <= " + std::to_string(K));
  return conv[j].q;
}

nlohmann::json AlphaContext::to_json() const {
  return {{"K", K},           {"P", P.get_str()},         {"Q", Q.get_str()},
          {"slack", to_string(slack)}, {"n_max", n_max.get_str()}, {"guard", guard.get_str()}};
}

AlphaContext make_context(const CfDigits& d, const BigInt& n_max, const BigInt& guard) {
  if (n_max < 0) throw DomainError("make_context: n_max must be non-negative");
  if (guard < 1) throw DomainError("make_context: guard must be >= 1");
  AlphaContext ctx;
  ctx.digits = d;
  ctx.n_max = n_max;
  ctx.guard = guard;
  if (d.finite_exact()) {
    ctx.K = d.available();
    ctx.conv = convergents(d, ctx.K);
    ctx.slack = 0;
  } else {
    BigInt target = guard * (n_max > 1 ? n_max : BigInt(1));
    std::size_t K = first_index_with_q_at_least(d, target);
    if (!d.has(K + 1))
      throw HorizonError("make_context: a_" + std::to_string(K + 1) + " needed to bound |alpha - p_K/q_K|");
    auto c = convergents(d, K + 1);
    ctx.slack = Rational(BigInt(1), c[K].q * c[K + 1].q);
    c.pop_back();
    ctx.K = K;
    ctx.conv = std::move(c);
  }
  ctx.P = ctx.conv.back().p;
  ctx.Q = ctx.conv.back().q;
  return ctx;
}

nlohmann::json SumResult::to_json() const {
  nlohmann::json cp;
  if (crossings_possible.fits_slong_p())
    cp = crossings_possible.get_si();
  else
    cp = crossings_possible.get_str();
  return {{"value", to_string(value)}, {"error_bound", to_string(error_bound)}, {"crossings_possible", cp}};
}

// ---------------------------------------------------------------- seeds

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finalizer over a combined key
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Rational random_x(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t u = mix_seed(seed, index);
  BigInt num;
  mpz_import(num.get_mpz_t(), 1, 1, sizeof u, 0, 0, &u);
  Rational x(num, pow2(64));
  x.canonicalize();
  return x;
}

// ---------------------------------------------------------------- sums

namespace {

void check_horizon(const AlphaContext& ctx, const BigInt& n) {
  if (n < 0) throw DomainError("Birkhoff sum length must be non-negative");
  if (n > ctx.n_max)
    throw HorizonError("n = " + n.get_str() + " exceeds the context horizon n_max = " + ctx.n_max.get_str());
}

// Integer picture of the surrogate orbit: {x + beta_m + k P/Q} = j_m(k) / M
// with j_m(k) = (B_m + k Delta) mod M.
struct Frame {
  BigInt M, delta, E;
  std::vector<BigInt> B, c;
};

Frame make_frame(const SawtoothCombo& f, const AlphaContext& ctx, const Rational& x) {
  Frame fr;
  std::vector<Rational> y;
  BigInt D0 = 1;
  for (const auto& be : f.beta) {
    y.push_back(frac(x + be));
    D0 = lcm(D0, y.back().get_den());
  }
  fr.M = D0 * ctx.Q;
  fr.delta = ctx.P * D0;
  for (const auto& v : y) fr.B.push_back(v.get_num() * (fr.M / v.get_den()));
  fr.E = 1;
  for (const auto& bm : f.b) fr.E = lcm(fr.E, bm.get_den());
  for (const auto& bm : f.b) fr.c.push_back(bm.get_num() * (fr.E / bm.get_den()));
  return fr;
}

// #{k in [0, n) : j(k) < c} for 0 <= c <= M
BigInt count_below(const BigInt& n, const BigInt& M, const BigInt& delta, const BigInt& B, const BigInt& c) {
  return floor_sum(n, M, delta, B) - floor_sum(n, M, delta, B - c);
}

}  // namespace

Rational error_bound_from(const SawtoothCombo& f, const AlphaContext& ctx, const BigInt& n,
                          const std::vector<BigInt>& per_shift_counts) {
  Rational eb = lipschitz_constant(f) * Rational(n * n) * ctx.slack;
  for (std::size_t m = 0; m < f.d(); ++m) eb += abs(f.b[m]) * Rational(per_shift_counts[m]);
  eb.canonicalize();
  return eb;
}

SumResult sum_naive(const SawtoothCombo& f, const AlphaContext& ctx, const Rational& x, const BigInt& n) {
  f.validate();
  check_horizon(ctx, n);
  const Rational step = ctx.surrogate();
  const Rational delta = ctx.slack * n;
  std::vector<BigInt> counts(f.d(), BigInt(0));
  Rational s = 0;
  Rational pt = x;
  for (BigInt k = 0; k < n; ++k) {
    s += eval(f, pt);
    if (k >= 1 && ctx.slack > 0)
      for (std::size_t m = 0; m < f.d(); ++m) {
        Rational y = frac(pt + f.beta[m]);
        if (y <= delta || y >= 1 - delta) counts[m] += 1;
      }
    pt += step;
  }
  SumResult r;
  r.value = s;
  r.value.canonicalize();
  r.crossings_possible = 0;
  for (const auto& c : counts) r.crossings_possible += c;
  r.error_bound = error_bound_from(f, ctx, n, counts);
  return r;
}

SumResult sum_fast(const SawtoothCombo& f, const AlphaContext& ctx, const Rational& x, const BigInt& n) {
  f.validate();
  check_horizon(ctx, n);
  Frame fr = make_frame(f, ctx, x);
  const BigInt& M = fr.M;
  BigInt T = 0;  // S_n = T / (2 M E)
  BigInt tri = n * (n - 1) / 2;
  for (std::size_t m = 0; m < f.d(); ++m) {
    BigInt J = n * fr.B[m] + fr.delta * tri - M * floor_sum(n, M, fr.delta, fr.B[m]);
    T += fr.c[m] * (2 * J - n * M);
  }
  SumResult r;
  r.value = Rational(T, 2 * M * fr.E);
  r.value.canonicalize();

  std::vector<BigInt> counts(f.d(), BigInt(0));
  if (ctx.slack > 0 && n >= 2) {
    BigInt t = floor_of(ctx.slack * n * M);  // j/M <= n slack  <=>  j <= t
    for (std::size_t m = 0; m < f.d(); ++m) {
      if (2 * t + 1 >= M) {
        counts[m] = n - 1;
        continue;
      }
      BigInt low = count_below(n, M, fr.delta, fr.B[m], t + 1);
      BigInt high = n - count_below(n, M, fr.delta, fr.B[m], M - t);
      BigInt c = low + high;
      const BigInt& j0 = fr.B[m];
      if (j0 <= t || j0 >= M - t) c -= 1;  // k = 0 is not a crossing
      counts[m] = c;
    }
  }
  r.crossings_possible = 0;
  for (const auto& c : counts) r.crossings_possible += c;
  r.error_bound = error_bound_from(f, ctx, n, counts);
  return r;
}

// ---------------------------------------------------------------- orbit walker

SurrogateOrbit::SurrogateOrbit(const SawtoothCombo& f, const AlphaContext& ctx, const Rational& x,
                               const BigInt& start) {
  f.validate();
  check_horizon(ctx, start);
  Frame fr = make_frame(f, ctx, x);
  M_ = fr.M;
  delta_ = mod_floor(fr.delta, M_);
  E_ = fr.E;
  c_ = fr.c;
  n_ = start;
  scale_ = 2 * M_ * E_;
  T_ = 0;
  BigInt tri = start * (start - 1) / 2;
  for (std::size_t m = 0; m < c_.size(); ++m) {
    BigInt J = start * fr.B[m] + fr.delta * tri - M_ * floor_sum(start, M_, fr.delta, fr.B[m]);
    T_ += c_[m] * (2 * J - start * M_);
    j_.push_back(mod_floor(fr.B[m] + start * fr.delta, M_));
  }
}

Rational SurrogateOrbit::value() const {
  Rational v(T_, scale_);
  v.canonicalize();
  return v;
}

double SurrogateOrbit::value_double() const { return ratio_to_double(T_, scale_); }

void SurrogateOrbit::step() {
  for (std::size_t m = 0; m < c_.size(); ++m) {
    // f term at the current point: c_m (2 j - M) / (2 M E)
    BigInt& j = j_[m];
    T_ += c_[m] * (2 * j - M_);
    j += delta_;
    if (j >= M_) j -= M_;
  }
  n_ += 1;
}

// ---------------------------------------------------------------- lemmas

SumResult mu(const SawtoothCombo& f, const AlphaContext& ctx, const Rational& x, std::size_t n_index) {
  if (n_index > ctx.K) throw HorizonError("mu: n_index beyond the context's convergents");
  return sum_fast(f, ctx, x, ctx.q(n_index));
}

PrefixBound max_prefix_bound(const SawtoothCombo& f, const AlphaContext& ctx, const Rational& x,
                             std::size_t n_index, const BigInt& budget) {
  if (n_index > ctx.K) throw HorizonError("max_prefix_bound: n_index beyond the context's convergents");
  const BigInt& qn = ctx.q(n_index);
  check_horizon(ctx, qn);
  if (qn > budget) throw BudgetExhausted("max_prefix_bound: q_n = " + qn.get_str() + " exceeds the enumeration budget");
  PrefixBound pb;
  BigInt asum = 0;
  for (std::size_t j = 1; j <= n_index; ++j) asum += ctx.digits.a(j);
  pb.bound = variation(f) * Rational(asum);
  pb.empirical_max = 0;
  pb.argmax = 0;
  SurrogateOrbit orb(f, ctx, x);
  while (true) {
    Rational v = abs(orb.value());
    if (v > pb.empirical_max) {
      pb.empirical_max = v;
      pb.argmax = orb.n();
    }
    if (orb.n() == qn) break;
    orb.step();
  }
  pb.holds = pb.empirical_max <= pb.bound;
  return pb;
}

DriftReport block_drift_check(const SawtoothCombo& f, const AlphaContext& ctx, const Rational& x,
                              std::size_t n_index, std::size_t k, const Rational& c) {
  if (c <= 1) throw DomainError("block_drift_check: c must exceed 1");
  if (n_index + 1 > ctx.K) throw HorizonError("block_drift_check: q_{n+1} beyond the context");
  const BigInt& qn = ctx.q(n_index);
  if (!(Rational(ctx.q(n_index + 1)) > c * qn))
    throw DomainError("block_drift_check: hypothesis q_{n+1} > c q_n fails");
  check_horizon(ctx, qn * BigInt(static_cast<unsigned long>(k)));
  Rational mun = sum_fast(f, ctx, x, qn).value;
  Rational c1 = lipschitz_constant(f) / 2;
  DriftReport rep;
  rep.holds = true;
  Rational worst_ratio = -1;
  for (std::size_t l = 0; l <= k; ++l) {
    BigInt L = static_cast<unsigned long>(l);
    Rational s = sum_fast(f, ctx, x, qn * L).value;
    Rational dev = abs(s - mun * L);
    Rational allowed = c1 * Rational(L * L) / c;
    rep.deviation.push_back(dev);
    rep.allowed.push_back(allowed);
    if (dev > allowed) rep.holds = false;
    Rational ratio = allowed > 0 ? Rational(dev / allowed) : Rational(dev > 0 ? 1000000000 : 0);
    if (ratio > worst_ratio) {
      worst_ratio = ratio;
      rep.worst = l;
    }
  }
  return rep;
}

}  // namespace rotor
