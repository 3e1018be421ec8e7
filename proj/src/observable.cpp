#include "rotor/observable.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

#include "rotor/errors.hpp"

namespace rotor {

namespace {

Rational json_rational(const nlohmann::json& e, const std::string& path) {
  try {
    if (e.is_string()) return parse_rational(e.get<std::string>());
    if (e.is_number_integer()) return Rational(BigInt(std::to_string(e.get<long long>())));
    if (e.is_number_float()) {
      // Shortest round-trip decimal, so 0.3 reads as 3/10.
      char buf[64];
      auto res = std::to_chars(buf, buf + sizeof buf, e.get<double>());
      return parse_rational(std::string_view(buf, static_cast<std::size_t>(res.ptr - buf)));
    }
  } catch (const DomainError& err) {
    throw ConfigError(path, err.what());
  }
  throw ConfigError(path, "expected a number or a \"p/q\" string");
}

// cos(2 pi t) for rational t, reduced mod 1 first.
double cos2pi(const Rational& t) { return std::cos(2 * std::numbers::pi * to_double(frac(t))); }

}  // namespace

void SawtoothCombo::validate() const {
  if (b.empty()) throw DomainError("observable needs at least one term");
  if (b.size() != beta.size()) throw DomainError("b and beta must have the same length");
  for (std::size_t m = 0; m < b.size(); ++m) {
    if (b[m] == 0) throw DomainError("b[" + std::to_string(m) + "] must be non-zero");
    if (beta[m] < 0 || beta[m] >= 1) throw DomainError("beta[" + std::to_string(m) + "] must lie in [0, 1)");
    for (std::size_t j = 0; j < m; ++j)
      if (beta[j] == beta[m]) throw DomainError("beta[" + std::to_string(m) + "] repeats beta[" + std::to_string(j) + "]");
  }
}

SawtoothCombo SawtoothCombo::sawtooth() { return SawtoothCombo{{Rational(1)}, {Rational(0)}}; }

SawtoothCombo SawtoothCombo::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("", "observable must be an object {\"b\":[...], \"beta\":[...]}");
  if (!j.contains("b") || !j["b"].is_array()) throw ConfigError("b", "missing array");
  if (!j.contains("beta") || !j["beta"].is_array()) throw ConfigError("beta", "missing array");
  SawtoothCombo f;
  for (std::size_t i = 0; i < j["b"].size(); ++i) f.b.push_back(json_rational(j["b"][i], "b[" + std::to_string(i) + "]"));
  for (std::size_t i = 0; i < j["beta"].size(); ++i)
    f.beta.push_back(json_rational(j["beta"][i], "beta[" + std::to_string(i) + "]"));
  try {
    f.validate();
  } catch (const DomainError& err) {
    throw ConfigError("", err.what());
  }
  return f;
}

nlohmann::json SawtoothCombo::to_json() const {
  nlohmann::json jb = nlohmann::json::array(), jbeta = nlohmann::json::array();
  for (const auto& v : b) jb.push_back(to_string(v));
  for (const auto& v : beta) jbeta.push_back(to_string(v));
  return {{"b", jb}, {"beta", jbeta}};
}

Rational eval(const SawtoothCombo& f, const Rational& x) {
  Rational s = 0;
  for (std::size_t m = 0; m < f.d(); ++m) s += f.b[m] * (frac(x + f.beta[m]) - Rational(1, 2));
  return s;
}

Rational lipschitz_constant(const SawtoothCombo& f) {
  Rational s = 0;
  for (const auto& v : f.b) s += abs(v);
  return s;
}

Rational variation(const SawtoothCombo& f) { return 2 * lipschitz_constant(f); }

std::vector<Rational> discontinuities(const SawtoothCombo& f) {
  std::vector<Rational> out;
  for (const auto& be : f.beta) out.push_back(frac(-be));
  std::sort(out.begin(), out.end());
  return out;
}

double d_value(const std::vector<double>& b, const std::vector<double>& gamma) {
  if (b.size() != gamma.size()) throw DomainError("d_value: b and gamma lengths differ");
  double s = 0;
  for (std::size_t m = 0; m < b.size(); ++m)
    for (std::size_t j = 0; j < b.size(); ++j)
      s += b[m] * b[j] * std::cos(2 * std::numbers::pi * (gamma[m] - gamma[j]));
  return s / 2;
}

double d_value(const SawtoothCombo& f, const BigInt& n) {
  const std::size_t d = f.d();
  std::vector<double> bd(d);
  for (std::size_t m = 0; m < d; ++m) bd[m] = to_double(f.b[m]);
  // Diagonal terms contribute b_m^2; off-diagonal pairs 2 b_m b_j cos(...).
  double s = 0;
  for (std::size_t m = 0; m < d; ++m) {
    s += bd[m] * bd[m];
    for (std::size_t j = m + 1; j < d; ++j) s += 2 * bd[m] * bd[j] * cos2pi((f.beta[m] - f.beta[j]) * n);
  }
  return std::max(0.0, s / 2);
}

double d_value(const SawtoothCombo& f, std::int64_t n) { return d_value(f, BigInt(std::to_string(n))); }

BigInt d_period(const SawtoothCombo& f) {
  BigInt p = 1;
  for (const auto& be : f.beta) p = lcm(p, be.get_den());
  return p;
}

double max_d(const SawtoothCombo& f, std::int64_t n_max) {
  double best = 0;
  for (std::int64_t n = 1; n <= n_max; ++n) best = std::max(best, d_value(f, n));
  return best;
}

double default_eps0(const SawtoothCombo& f) { return max_d(f, 1000) / 2; }

bool in_n_set(const SawtoothCombo& f, const BigInt& n, double eps0) { return n >= 1 && d_value(f, n) > eps0; }

Rational l2_norm_sq(const SawtoothCombo& f) {
  Rational s = 0;
  for (std::size_t m = 0; m < f.d(); ++m)
    for (std::size_t j = 0; j < f.d(); ++j) {
      Rational t = frac(f.beta[m] - f.beta[j]);
      s += f.b[m] * f.b[j] * (Rational(1, 12) - t * (1 - t) / 2);
    }
  return s;
}

SeriesValue l2_norm_sq_series(const SawtoothCombo& f, std::int64_t N) {
  double s = 0;
  for (std::int64_t n = N; n >= 1; --n) s += d_value(f, n) / (double(n) * double(n));
  double c = to_double(lipschitz_constant(f));
  return {s / (std::numbers::pi * std::numbers::pi), c * c / double(N)};
}

bool SyndeticReport::contains(const BigInt& n) const { return in_n_set(f, n, eps0); }

nlohmann::json SyndeticReport::to_json() const {
  return {{"eps0", eps0},
          {"n_max", n_max},
          {"count", members.size()},
          {"max_gap", max_gap},
          {"lower_density_estimate", lower_density_estimate},
          {"period", period.get_str()},
          {"members", members},
          {"observable", f.to_json()}};
}

std::string SyndeticReport::to_csv() const {
  std::ostringstream os;
  os.precision(17);
  os << "n,D\n";
  for (std::int64_t n = 1; n <= n_max; ++n) os << n << ',' << d_value(f, n) << '\n';
  return os.str();
}

namespace {

SyndeticReport finish_scan(const SawtoothCombo& f, double eps0, std::int64_t n_max, const std::vector<char>& in) {
  SyndeticReport r;
  r.f = f;
  r.eps0 = eps0;
  r.n_max = n_max;
  r.period = d_period(f);
  std::int64_t last = 0;
  for (std::int64_t n = 1; n <= n_max; ++n)
    if (in[static_cast<std::size_t>(n)]) {
      r.members.push_back(n);
      r.max_gap = std::max(r.max_gap, n - last);
      last = n;
    }
  if (r.members.empty())
    throw EmptySetError("no n <= " + std::to_string(n_max) + " with D(beta n) > " + std::to_string(eps0));
  r.lower_density_estimate = double(r.members.size()) / double(n_max);
  return r;
}

void check_scan_args(const SawtoothCombo& f, double eps0, std::int64_t n_max) {
  f.validate();
  if (!(eps0 > 0)) throw DomainError("syndetic_scan: eps0 must be positive");
  if (n_max < 1) throw DomainError("syndetic_scan: n_max must be >= 1");
}

}  // namespace

SyndeticReport syndetic_scan_serial(const SawtoothCombo& f, double eps0, std::int64_t n_max) {
  check_scan_args(f, eps0, n_max);
  std::vector<char> in(static_cast<std::size_t>(n_max) + 1, 0);
  for (std::int64_t n = 1; n <= n_max; ++n) in[static_cast<std::size_t>(n)] = d_value(f, n) > eps0;
  return finish_scan(f, eps0, n_max, in);
}

SyndeticReport syndetic_scan(const SawtoothCombo& f, double eps0, std::int64_t n_max) {
  check_scan_args(f, eps0, n_max);
  std::vector<char> in(static_cast<std::size_t>(n_max) + 1, 0);
#pragma omp parallel for schedule(static)
  for (std::int64_t n = 1; n <= n_max; ++n) in[static_cast<std::size_t>(n)] = d_value(f, n) > eps0;
  return finish_scan(f, eps0, n_max, in);
}

}  // namespace rotor
