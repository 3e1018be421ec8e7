#include "rotor/numeric.hpp"

#include <cmath>
#include <string>

#include "rotor/errors.hpp"

namespace rotor {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace

BigInt parse_bigint(std::string_view text) {
  std::string_view s = trim(text);
  bool neg = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    neg = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) throw DomainError("not an integer: '" + std::string(text) + "'");
  BigInt v(std::string(s), 10);
  return neg ? BigInt(-v) : v;
}

Rational parse_rational(std::string_view text) {
  std::string_view s = trim(text);
  auto slash = s.find('/');
  if (slash != std::string_view::npos) {
    BigInt num = parse_bigint(s.substr(0, slash));
    BigInt den = parse_bigint(s.substr(slash + 1));
    if (den == 0) throw DomainError("zero denominator in '" + std::string(text) + "'");
    Rational r(num, den);
    r.canonicalize();
    return r;
  }
  // Decimal with optional exponent.
  bool neg = false;
  std::string_view body = s;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    neg = body.front() == '-';
    body.remove_prefix(1);
  }
  long exp10 = 0;
  auto e = body.find_first_of("eE");
  if (e != std::string_view::npos) {
    std::string_view es = body.substr(e + 1);
    BigInt ev = parse_bigint(es);
    if (!ev.fits_slong_p() || abs(ev) > 100000) throw DomainError("exponent out of range: '" + std::string(text) + "'");
    exp10 = ev.get_si();
    body = body.substr(0, e);
  }
  std::string digits;
  auto dot = body.find('.');
  if (dot != std::string_view::npos) {
    std::string_view ip = body.substr(0, dot), fp = body.substr(dot + 1);
    if ((!ip.empty() && !all_digits(ip)) || (!fp.empty() && !all_digits(fp)) || (ip.empty() && fp.empty()))
      throw DomainError("not a number: '" + std::string(text) + "'");
    digits = std::string(ip) + std::string(fp);
    exp10 -= static_cast<long>(fp.size());
  } else {
    if (!all_digits(body)) throw DomainError("not a number: '" + std::string(text) + "'");
    digits = std::string(body);
  }
  BigInt mant(digits, 10);
  BigInt scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exp10 < 0 ? -exp10 : exp10));
  Rational r = exp10 >= 0 ? Rational(mant * scale) : Rational(mant, scale);
  r.canonicalize();
  return neg ? Rational(-r) : r;
}

std::string to_string(const Rational& r) {
  Rational c = r;
  c.canonicalize();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

std::string to_string(const BigInt& n) { return n.get_str(); }

BigInt floor_div(const BigInt& a, const BigInt& b) {
  BigInt q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

BigInt mod_floor(const BigInt& a, const BigInt& b) {
  BigInt r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

BigInt floor_of(const Rational& r) { return floor_div(r.get_num(), r.get_den()); }

BigInt ceil_of(const Rational& r) {
  BigInt q;
  mpz_cdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

Rational frac(const Rational& r) {
  Rational f(mod_floor(r.get_num(), r.get_den()), r.get_den());
  f.canonicalize();
  return f;
}

BigInt lcm(const BigInt& a, const BigInt& b) {
  BigInt l;
  mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return l;
}

BigInt pow2(unsigned e) {
  BigInt v;
  mpz_ui_pow_ui(v.get_mpz_t(), 2, e);
  return v;
}

BigInt floor_sum(const BigInt& n_in, const BigInt& m_in, const BigInt& a_in, const BigInt& b_in) {
  if (m_in <= 0) throw DomainError("floor_sum: modulus must be positive");
  if (n_in < 0) throw DomainError("floor_sum: negative count");
  BigInt n = n_in, m = m_in, ans = 0;
  BigInt a = a_in, b = b_in;
  // Normalize a, b into [0, m).
  if (a < 0 || a >= m) {
    BigInt qa = floor_div(a, m);
    ans += qa * (n * (n - 1) / 2);
    a -= qa * m;
  }
  if (b < 0 || b >= m) {
    BigInt qb = floor_div(b, m);
    ans += qb * n;
    b -= qb * m;
  }
  BigInt t;
  while (true) {
    if (a >= m) {
      t = a / m;
      ans += (n * (n - 1) / 2) * t;
      a -= t * m;
    }
    if (b >= m) {
      t = b / m;
      ans += n * t;
      b -= t * m;
    }
    BigInt y_max = a * n + b;
    if (y_max < m) break;
    n = y_max / m;
    b = y_max % m;
    std::swap(m, a);
  }
  return ans;
}

double ratio_to_double(const BigInt& num, const BigInt& den) {
  if (den == 0) throw DomainError("ratio_to_double: zero denominator");
  if (num == 0) return 0.0;
  long en = 0, ed = 0;
  double mn = mpz_get_d_2exp(&en, num.get_mpz_t());
  double md = mpz_get_d_2exp(&ed, den.get_mpz_t());
  return std::ldexp(mn / md, static_cast<int>(en - ed));
}

double to_double(const Rational& r) { return ratio_to_double(r.get_num(), r.get_den()); }

Rational exact_rational(double v) {
  if (!std::isfinite(v)) throw DomainError("exact_rational: non-finite value");
  Rational r;
  mpq_set_d(r.get_mpq_t(), v);
  return r;
}

}  // namespace rotor
