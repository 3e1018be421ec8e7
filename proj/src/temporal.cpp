#include "rotor/temporal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <omp.h>

#include <boost/math/distributions/normal.hpp>

#include "rotor/errors.hpp"

namespace rotor {

// ---------------------------------------------------------------- ensembles

double TemporalEnsemble::mean() const {
  if (values.empty()) return 0;
  return std::accumulate(values.begin(), values.end(), 0.0) / double(values.size());
}

Rational ensemble_resolution() { return Rational(BigInt(1), pow2(40)); }

namespace {

TemporalEnsemble ensemble_header(const SawtoothCombo& f, const AlphaContext& ctx, const Rational& x, std::int64_t N) {
  if (N < 1) throw DomainError("ensemble: N must be >= 1");
  BigInt bN = static_cast<long>(N);
  if (bN > ctx.n_max) throw HorizonError("ensemble: N exceeds the context horizon");
  TemporalEnsemble e;
  e.N = bN;
  e.x = x;
  e.observable = f.to_json();
  e.alpha_digest = "K=" + std::to_string(ctx.K) + ";P/Q=" + ctx.P.get_str() + "/" + ctx.Q.get_str();
  // Bounds grow with n (the drift term and the crossing window both widen),
  // so the bound at N covers every S_n with n <= N.
  e.max_error_bound = sum_fast(f, ctx, x, bN).error_bound;
  if (e.max_error_bound >= ensemble_resolution())
    throw HorizonError("ensemble: certified error " + std::to_string(to_double(e.max_error_bound)) +
                       " is not below 2^-40; use a larger guard");
  e.values.resize(static_cast<std::size_t>(N));
  return e;
}

void fill_range(const SawtoothCombo& f, const AlphaContext& ctx, const Rational& x, std::int64_t lo, std::int64_t hi,
                std::vector<double>& out) {
  // S_lo .. S_{hi-1}
  SurrogateOrbit orb(f, ctx, x, BigInt(static_cast<long>(lo)));
  for (std::int64_t n = lo; n < hi; ++n) {
    out[static_cast<std::size_t>(n - 1)] = orb.value_double();
    orb.step();
  }
}

}  // namespace

TemporalEnsemble ensemble_serial(const SawtoothCombo& f, const AlphaContext& ctx, const Rational& x, std::int64_t N) {
  TemporalEnsemble e = ensemble_header(f, ctx, x, N);
  fill_range(f, ctx, x, 1, N + 1, e.values);
  return e;
}

TemporalEnsemble ensemble(const SawtoothCombo& f, const AlphaContext& ctx, const Rational& x, std::int64_t N) {
  TemporalEnsemble e = ensemble_header(f, ctx, x, N);
  const std::int64_t shards = std::max<std::int64_t>(1, std::min<std::int64_t>(N / 4096, 4LL * omp_get_max_threads()));
  const std::int64_t width = (N + shards - 1) / shards;
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t s = 0; s < shards; ++s) {
    std::int64_t lo = 1 + s * width, hi = std::min(N + 1, lo + width);
    if (lo < hi) fill_range(f, ctx, x, lo, hi, e.values);
  }
  return e;
}

// ---------------------------------------------------------------- laws

std::string TargetLaw::name() const {
  switch (kind_) {
    case Kind::Uniform01:
      return "uniform01";
    case Kind::Gaussian:
      return "gaussian";
    case Kind::UniformConv:
      return "uniform_conv";
  }
  return "?";
}

double TargetLaw::cdf(double z) const {
  switch (kind_) {
    case Kind::Uniform01:
      return std::clamp(z, 0.0, 1.0);
    case Kind::Gaussian:
      return 0.5 * std::erfc(-z / std::sqrt(2.0));
    case Kind::UniformConv:
      if (z <= 0) return 0;
      if (z <= 1) return z * z / 2;
      if (z <= 2) return 1 - (2 - z) * (2 - z) / 2;
      return 1;
  }
  return 0;
}

double TargetLaw::quantile(double p) const {
  if (!(p > 0 && p < 1)) throw DomainError("quantile: p must lie in (0, 1)");
  switch (kind_) {
    case Kind::Uniform01:
      return p;
    case Kind::Gaussian:
      return boost::math::quantile(boost::math::normal_distribution<double>(0, 1), p);
    case Kind::UniformConv:
      return p <= 0.5 ? std::sqrt(2 * p) : 2 - std::sqrt(2 * (1 - p));
  }
  return 0;
}

// ---------------------------------------------------------------- percentiles

double percentile_sorted(const std::vector<double>& sorted, const Rational& t, Side side) {
  if (!(t > 0 && t < 1)) throw DomainError("percentile: t must lie in (0, 1)");
  if (sorted.empty()) throw DomainError("percentile: empty sample");
  Rational tn = t * BigInt(static_cast<unsigned long>(sorted.size()));
  // 1-based order statistics: chi+ = v_(floor(tN)+1), chi- = v_(ceil(tN))
  BigInt idx = side == Side::Plus ? BigInt(floor_of(tn) + 1) : ceil_of(tn);
  return sorted[idx.get_ui() - 1];
}

double percentile(std::vector<double> sample, const Rational& t, Side side) {
  std::sort(sample.begin(), sample.end());
  return percentile_sorted(sample, t, side);
}

double percentile(const TargetLaw& law, const Rational& t, Side) {
  if (!(t > 0 && t < 1)) throw DomainError("percentile: t must lie in (0, 1)");
  return law.quantile(to_double(t));
}

StarNormalization normalize_star_sorted(const std::vector<double>& sorted, const TargetLaw& law, const Rational& t1,
                                        const Rational& t2) {
  if (!(t1 < t2)) throw DomainError("normalize_star: need t1 < t2");
  double y1 = percentile(law, t1, Side::Minus), y2 = percentile(law, t2, Side::Plus);
  if (y1 == y2) throw DomainError("normalize_star: law percentiles coincide");
  double s1 = percentile_sorted(sorted, t1, Side::Minus), s2 = percentile_sorted(sorted, t2, Side::Plus);
  StarNormalization r;
  r.B = (s2 - s1) / (y2 - y1);
  r.A = s1 - r.B * y1;
  r.degenerate = s2 == s1;
  if (r.degenerate) r.B = 0;
  return r;
}

StarNormalization normalize_star(const std::vector<double>& values, const TargetLaw& law, const Rational& t1,
                                 const Rational& t2) {
  std::vector<double> s = values;
  std::sort(s.begin(), s.end());
  return normalize_star_sorted(s, law, t1, t2);
}

double ks_distance_sorted(const std::vector<double>& sorted, const TargetLaw& law, double A, double B) {
  if (!(B > 0)) throw DomainError("ks_distance: B must be positive");
  if (sorted.empty()) throw DomainError("ks_distance: empty sample");
  const double n = double(sorted.size());
  double d = 0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    double F = law.cdf((sorted[i] - A) / B);
    d = std::max({d, double(i + 1) / n - F, F - double(i) / n});
  }
  return std::clamp(d, 0.0, 1.0);
}

double ks_distance(const std::vector<double>& values, const TargetLaw& law, double A, double B) {
  std::vector<double> s = values;
  std::sort(s.begin(), s.end());
  return ks_distance_sorted(s, law, A, B);
}

// ---------------------------------------------------------------- schedules

nlohmann::json ScheduleEntry::to_json() const {
  return {{"k", k},
          {"n_k", n_k},
          {"L_k", L_k.get_str()},
          {"q_nk", q_nk.get_str()},
          {"N_k", N_k.get_str()},
          {"r_k", r_k.get_str()},
          {"mu", to_string(mu)},
          {"B_k", to_string(B_k)},
          {"A_k", to_string(A_k)}};
}

ScheduleEntry schedule_thm_uniform(const SawtoothCombo& f, const AlphaContext& ctx, const Rational& x, std::size_t k,
                                   std::size_t n_k, const BigInt& r_k, const Rational& eps1) {
  if (k < 1) throw DomainError("schedule: k must be >= 1");
  ScheduleEntry e;
  e.k = k;
  e.n_k = n_k;
  e.r_k = r_k;
  e.L_k = 0;
  for (std::size_t j = 1; j <= n_k; ++j) e.L_k += ctx.digits.a(j);
  auto conv = convergents(ctx.digits, n_k);
  e.q_nk = conv[n_k].q;
  e.N_k = BigInt(static_cast<unsigned long>(k)) * e.L_k * e.q_nk;
  if (e.N_k > ctx.n_max) throw HorizonError("schedule: N_k = " + e.N_k.get_str() + " exceeds the context horizon");
  e.mu = sum_fast(f, ctx, x, e.q_nk).value;
  if (e.mu == 0 || abs(e.mu) < eps1)
    throw BadSampleError("bad x at stage " + std::to_string(k) + ": |mu| = " + std::to_string(to_double(abs(e.mu))));
  e.B_k = Rational(BigInt(static_cast<unsigned long>(k)) * e.L_k) * abs(e.mu);
  e.A_k = e.mu > 0 ? Rational(0) : Rational(-e.B_k);
  return e;
}

std::pair<BigInt, BigInt> lr_decompose(const BigInt& n, const BigInt& q) {
  if (q <= 0) throw DomainError("lr_decompose: q must be positive");
  return {floor_div(n, q), mod_floor(n, q)};
}

// ---------------------------------------------------------------- scans

std::vector<ScanRow> scan_values(const std::vector<double>& values, const std::vector<std::int64_t>& grid) {
  std::vector<ScanRow> rows(grid.size());
  const TargetLaw u = TargetLaw::uniform(), g = TargetLaw::gaussian(), c = TargetLaw::uniform_conv();
#pragma omp parallel for schedule(dynamic, 1)
  for (std::size_t i = 0; i < grid.size(); ++i) {
    std::int64_t N = grid[i];
    std::vector<double> s(values.begin(), values.begin() + N);
    std::sort(s.begin(), s.end());
    ScanRow r;
    r.N = N;
    r.star = normalize_star_sorted(s, u);
    auto ks_for = [&](const TargetLaw& law) {
      auto st = normalize_star_sorted(s, law);
      return st.degenerate ? std::nan("") : ks_distance_sorted(s, law, st.A, st.B);
    };
    r.ks_u01 = ks_for(u);
    r.ks_gauss = ks_for(g);
    r.ks_conv = ks_for(c);
    rows[i] = r;
  }
  return rows;
}

std::vector<ScanRow> scan_tdlt(const SawtoothCombo& f, const AlphaContext& ctx, const Rational& x,
                               const std::vector<std::int64_t>& grid) {
  if (grid.empty()) return {};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] < 1) throw DomainError("scan_tdlt: grid values must be >= 1");
    if (i && grid[i] <= grid[i - 1]) throw DomainError("scan_tdlt: grid must be strictly increasing");
  }
  auto e = ensemble(f, ctx, x, grid.back());
  return scan_values(e.values, grid);
}

std::string scan_csv(const std::vector<ScanRow>& rows) {
  std::ostringstream os;
  os.precision(12);
  os << "N,A_star,B_star,ks_u01,ks_gauss,ks_conv\n";
  for (const auto& r : rows) {
    os << r.N << ',' << r.star.A << ',' << r.star.B << ',';
    if (r.star.degenerate)
      os << "degenerate,degenerate,degenerate\n";
    else
      os << r.ks_u01 << ',' << r.ks_gauss << ',' << r.ks_conv << '\n';
  }
  return os.str();
}

std::vector<std::int64_t> parse_grid(const std::string& spec) {
  auto fail = [&](const std::string& why) { return DomainError("grid '" + spec + "': " + why); };
  auto colon = spec.find(':');
  if (colon == std::string::npos) throw fail("expected kind:args");
  std::string kind = spec.substr(0, colon), rest = spec.substr(colon + 1);
  std::vector<std::string> parts;
  std::stringstream ss(rest);
  for (std::string p; std::getline(ss, p, kind == "list" ? ',' : ':');) parts.push_back(p);
  auto num = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      double v = std::stod(s, &used);
      if (used != s.size()) throw fail("bad number '" + s + "'");
      return v;
    } catch (const std::logic_error&) {
      throw fail("bad number '" + s + "'");
    }
  };
  std::vector<std::int64_t> out;
  if (kind == "geometric") {
    if (parts.size() != 3) throw fail("geometric:start:end:ratio");
    double a = num(parts[0]), b = num(parts[1]), r = num(parts[2]);
    if (a < 1 || b < a || r <= 1) throw fail("need 1 <= start <= end and ratio > 1");
    for (double v = a; v <= b * (1 + 1e-12); v *= r) out.push_back(std::llround(v));
  } else if (kind == "linear") {
    if (parts.size() != 3) throw fail("linear:start:end:step");
    double a = num(parts[0]), b = num(parts[1]), st = num(parts[2]);
    if (a < 1 || b < a || st <= 0) throw fail("need 1 <= start <= end and step > 0");
    for (double v = a; v <= b * (1 + 1e-12); v += st) out.push_back(std::llround(v));
  } else if (kind == "list") {
    for (const auto& p : parts) {
      double v = num(p);
      if (v < 1) throw fail("values must be >= 1");
      out.push_back(std::llround(v));
    }
    std::sort(out.begin(), out.end());
  } else {
    throw fail("unknown kind '" + kind + "'");
  }
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string histogram_csv(const std::vector<double>& values, double A, double B, double lo, double hi, int bins) {
  if (!(B > 0) || !(hi > lo) || bins < 1) throw DomainError("histogram: need B > 0, hi > lo, bins >= 1");
  std::vector<std::int64_t> count(static_cast<std::size_t>(bins), 0);
  const double w = (hi - lo) / bins;
  for (double v : values) {
    double z = (v - A) / B;
    if (z < lo || z >= hi) continue;
    auto b = std::min<std::size_t>(static_cast<std::size_t>((z - lo) / w), count.size() - 1);
    ++count[b];
  }
  std::ostringstream os;
  os.precision(12);
  os << "bin_lo,bin_hi,count,density\n";
  for (int i = 0; i < bins; ++i)
    os << lo + i * w << ',' << lo + (i + 1) * w << ',' << count[static_cast<std::size_t>(i)] << ','
       << double(count[static_cast<std::size_t>(i)]) / (double(values.size()) * w) << '\n';
  return os.str();
}

}  // namespace rotor
