#include "rotor/cf_core.hpp"

#include <algorithm>

#include "rotor/errors.hpp"

namespace rotor {

// ---------------------------------------------------------------- CfDigits

CfDigits CfDigits::exact(std::vector<BigInt> digits) {
  for (std::size_t i = 0; i < digits.size(); ++i)
    if (digits[i] < 1) throw DomainError("digit a_" + std::to_string(i + 1) + " must be >= 1");
  if (digits.size() > 1 && digits.back() == 1) {
    digits.pop_back();
    digits.back() += 1;
  }
  CfDigits d;
  d.digits_ = std::move(digits);
  d.exact_ = true;
  return d;
}

CfDigits CfDigits::prefix(std::vector<BigInt> digits) {
  for (std::size_t i = 0; i < digits.size(); ++i)
    if (digits[i] < 1) throw DomainError("digit a_" + std::to_string(i + 1) + " must be >= 1");
  CfDigits d;
  d.digits_ = std::move(digits);
  d.exact_ = false;
  return d;
}

CfDigits CfDigits::lazy(std::vector<BigInt> prefix, Tail tail, std::size_t horizon) {
  if (!tail) throw DomainError("lazy digits need a tail generator");
  CfDigits d = CfDigits::prefix(std::move(prefix));
  d.tail_ = std::move(tail);
  d.horizon_ = std::max(horizon, d.digits_.size());
  return d;
}

BigInt CfDigits::a(std::size_t i) const {
  if (i == 0) throw DomainError("digits are 1-based");
  if (i <= digits_.size()) return digits_[i - 1];
  if (tail_ && i <= horizon_) {
    BigInt v = tail_(i);
    if (v < 1) throw DomainError("generator produced digit a_" + std::to_string(i) + " < 1");
    return v;
  }
  throw HorizonError("digit a_" + std::to_string(i) + " not available (horizon " +
                     std::to_string(available()) + ")");
}

std::vector<BigInt> CfDigits::take(std::size_t n) const {
  if (n > available()) throw HorizonError("take: only " + std::to_string(available()) + " digits available");
  std::vector<BigInt> out;
  out.reserve(n);
  for (std::size_t i = 1; i <= n; ++i) out.push_back(a(i));
  return out;
}

CfDigits CfDigits::truncated(std::size_t n) const { return CfDigits::prefix(take(std::min(n, available()))); }

nlohmann::json CfDigits::to_json(std::size_t n) const {
  std::size_t len = std::min(n, available());
  if (len == kUnbounded) throw DomainError("cannot serialize an unbounded digit sequence without a length");
  nlohmann::json arr = nlohmann::json::array();
  for (std::size_t i = 1; i <= len; ++i) arr.push_back(a(i).get_str());
  return arr;
}

CfDigits CfDigits::from_json(const nlohmann::json& j, bool exact) {
  if (!j.is_array()) throw ConfigError("", "digits must be a JSON array");
  std::vector<BigInt> digits;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& e = j[i];
    std::string path = "[" + std::to_string(i) + "]";
    BigInt v;
    try {
      if (e.is_string())
        v = parse_bigint(e.get<std::string>());
      else if (e.is_number_integer())
        v = BigInt(std::to_string(e.get<long long>()));
      else
        throw ConfigError(path, "digit must be a decimal string or integer");
    } catch (const DomainError& err) {
      throw ConfigError(path, err.what());
    }
    if (v < 1) throw ConfigError(path, "digit must be >= 1");
    digits.push_back(v);
  }
  return exact ? CfDigits::exact(std::move(digits)) : CfDigits::prefix(std::move(digits));
}

// ---------------------------------------------------------------- intervals

RationalInterval RationalInterval::closed(Rational a, Rational b) {
  if (b < a) std::swap(a, b);
  return {a, b, true, true};
}

RationalInterval RationalInterval::open(Rational a, Rational b) {
  if (b < a) std::swap(a, b);
  return {a, b, false, false};
}

bool RationalInterval::contains(const Rational& x) const {
  bool above = lo_closed ? x >= lo : x > lo;
  bool below = hi_closed ? x <= hi : x < hi;
  return above && below;
}

bool RationalInterval::empty() const {
  if (lo < hi) return false;
  if (lo == hi) return !(lo_closed && hi_closed);
  return true;
}

std::string RationalInterval::to_string() const {
  return std::string(lo_closed ? "[" : "(") + rotor::to_string(lo) + ", " + rotor::to_string(hi) +
         (hi_closed ? "]" : ")");
}

// ---------------------------------------------------------------- matrices

Mat2 mat_mul(const Mat2& x, const Mat2& y) {
  Mat2 r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r[i][j] = x[i][0] * y[0][j] + x[i][1] * y[1][j];
  return r;
}

BigInt det(const Mat2& m) { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }

Mat2 digit_product(const std::vector<BigInt>& digits) {
  Mat2 r{{{BigInt(1), BigInt(0)}, {BigInt(0), BigInt(1)}}};
  for (const auto& a : digits) r = mat_mul(r, Mat2{{{BigInt(0), BigInt(1)}, {BigInt(1), a}}});
  return r;
}

Mat2 convergent_matrix(const std::vector<BigInt>& digits, std::size_t n) {
  if (n > digits.size()) throw HorizonError("convergent_matrix: index past the digits");
  BigInt pm = 1, qm = 0, p = 0, q = 1;
  for (std::size_t i = 0; i < n; ++i) {
    BigInt pn = digits[i] * p + pm, qn = digits[i] * q + qm;
    pm = p;
    qm = q;
    p = pn;
    q = qn;
  }
  return Mat2{{{pm, p}, {qm, q}}};
}

GlueResult glue(const std::vector<BigInt>& prefix, const std::vector<BigInt>& suffix) {
  GlueResult g;
  g.prefix_matrix = convergent_matrix(prefix, prefix.size());
  g.suffix_matrix = convergent_matrix(suffix, suffix.size());
  g.product = mat_mul(g.prefix_matrix, g.suffix_matrix);
  std::vector<BigInt> all = prefix;
  all.insert(all.end(), suffix.begin(), suffix.end());
  g.composed = convergent_matrix(all, all.size());
  g.holds = g.product == g.composed;
  return g;
}

// ---------------------------------------------------------------- expansions

CfDigits expand_rational(const BigInt& num, const BigInt& den) {
  if (den <= 0) throw DomainError("expand_rational: denominator must be positive");
  if (num < 0 || num >= den) throw DomainError("expand_rational: value must lie in [0, 1)");
  std::vector<BigInt> digits;
  BigInt a = den, b = num;  // alpha = b / a
  while (b != 0) {
    BigInt qt = a / b, r = a % b;
    digits.push_back(qt);
    a = b;
    b = r;
  }
  return CfDigits::exact(std::move(digits));
}

std::vector<Convergent> convergents(const CfDigits& d, std::size_t upto) {
  if (upto > d.available())
    throw HorizonError("convergents: need " + std::to_string(upto) + " digits, have " +
                       std::to_string(d.available()));
  std::vector<Convergent> out;
  out.reserve(upto + 1);
  BigInt pm = 1, qm = 0, p = 0, q = 1;
  out.push_back({p, q, 0});
  for (std::size_t k = 1; k <= upto; ++k) {
    BigInt a = d.a(k);
    BigInt pn = a * p + pm, qn = a * q + qm;
    pm = p;
    qm = q;
    p = std::move(pn);
    q = std::move(qn);
    out.push_back({p, q, k});
  }
  return out;
}

Rational value_of(const CfDigits& d) {
  if (d.available() == CfDigits::kUnbounded) throw DomainError("value_of: unbounded expansion");
  auto c = convergents(d, d.available());
  Rational r(c.back().p, c.back().q);
  r.canonicalize();
  return r;
}

std::size_t first_index_with_q_at_least(const CfDigits& d, const BigInt& bound, std::size_t max_index) {
  BigInt qm = 0, q = 1;
  std::size_t k = 0;
  while (q < bound) {
    if (k >= max_index || !d.has(k + 1))
      throw HorizonError("no principal denominator >= " + bound.get_str() + " within " +
                         std::to_string(std::min(max_index, d.available())) + " digits");
    BigInt qn = d.a(k + 1) * q + qm;
    qm = q;
    q = std::move(qn);
    ++k;
  }
  return k;
}

RationalInterval enclosure(const CfDigits& d, std::size_t k) {
  if (d.finite_exact() && k >= d.available()) {
    Rational v = value_of(d);
    return RationalInterval::closed(v, v);
  }
  auto c = convergents(d, k + 1);
  return RationalInterval::closed(Rational(c[k].p, c[k].q), Rational(c[k + 1].p, c[k + 1].q));
}

// ---------------------------------------------------------------- Ostrowski

OstrowskiRep ostrowski_encode(const BigInt& n, const CfDigits& d) {
  if (n < 0) throw DomainError("ostrowski_encode: n must be non-negative");
  std::vector<BigInt> qs{BigInt(1)};
  BigInt qm = 0;
  while (qs.back() <= n) {
    std::size_t k = qs.size() - 1;
    if (!d.has(k + 1))
      throw HorizonError("ostrowski_encode: " + n.get_str() + " >= q_" + std::to_string(k) + " = " +
                         qs.back().get_str() + " and no further digits");
    BigInt qn = d.a(k + 1) * qs.back() + qm;
    qm = qs.back();
    qs.push_back(std::move(qn));
  }
  std::size_t K = qs.size() - 1;  // q_K > n
  OstrowskiRep r;
  r.b.assign(K, BigInt(0));
  BigInt rem = n;
  for (std::size_t j = K; j-- > 0;) {
    r.b[j] = rem / qs[j];
    rem -= r.b[j] * qs[j];
  }
  return r;
}

std::string ostrowski_violation(const OstrowskiRep& r, const CfDigits& d) {
  std::size_t len = r.b.size();
  while (len > 0 && r.b[len - 1] == 0) --len;
  if (len > d.available()) return "digit b_" + std::to_string(len - 1) + " beyond the available horizon";
  for (std::size_t j = 0; j < len; ++j) {
    const BigInt& b = r.b[j];
    if (b < 0) return "b_" + std::to_string(j) + " < 0";
    BigInt cap = d.a(j + 1);
    if (j == 0) cap -= 1;
    if (b > cap) return "b_" + std::to_string(j) + " = " + b.get_str() + " exceeds " + cap.get_str();
    if (j >= 1 && b == d.a(j + 1) && r.b[j - 1] != 0)
      return "b_" + std::to_string(j) + " = a_" + std::to_string(j + 1) + " but b_" + std::to_string(j - 1) +
             " != 0";
  }
  return {};
}

BigInt ostrowski_decode(const OstrowskiRep& r, const CfDigits& d) {
  std::string why = ostrowski_violation(r, d);
  if (!why.empty()) throw DomainError("invalid Ostrowski digits: " + why);
  std::size_t len = r.b.size();
  while (len > 0 && r.b[len - 1] == 0) --len;
  if (len == 0) return 0;
  auto c = convergents(d, len - 1);
  BigInt n = 0;
  for (std::size_t j = 0; j < len; ++j) n += r.b[j] * c[j].q;
  return n;
}

// ---------------------------------------------------------------- cylinders

Cylinder cylinder(const std::vector<BigInt>& prefix) {
  for (std::size_t i = 0; i < prefix.size(); ++i)
    if (prefix[i] < 1) throw DomainError("cylinder: digit a_" + std::to_string(i + 1) + " must be >= 1");
  Mat2 m = convergent_matrix(prefix, prefix.size());
  const BigInt &pm = m[0][0], &p = m[0][1], &qm = m[1][0], &q = m[1][1];
  Rational e1(p, q), e2(p + pm, q + qm);
  e1.canonicalize();
  e2.canonicalize();
  Rational meas(BigInt(1), q * (q + qm));
  meas.canonicalize();
  return {RationalInterval::open(e1, e2), meas};
}

// ---------------------------------------------------------------- best approximations

std::optional<std::size_t> best_approx_classify(const BigInt& p, const BigInt& q, const CfDigits& d,
                                                const Rational& L, std::size_t max_depth) {
  if (q <= 0) throw DomainError("best_approx_classify: q must be positive");
  BigInt g;
  mpz_gcd(g.get_mpz_t(), p.get_mpz_t(), q.get_mpz_t());
  if (g != 1) throw DomainError("best_approx_classify: gcd(p, q) must be 1");
  if (L < 4) throw DomainError("best_approx_classify: L must be >= 4");

  Rational threshold = 1 / (Rational(q) * L);
  threshold.canonicalize();
  Rational target(p, q);
  target.canonicalize();
  auto deviation = [&](const Rational& a) -> Rational { return abs(Rational(q) * a - p); };

  bool holds = false;
  std::size_t depth_limit = std::min(max_depth, d.available());
  BigInt pm = 1, qm = 0, pk = 0, qk = 1;
  for (std::size_t k = 0;; ++k) {
    // enclosure [p_k/q_k, p_{k+1}/q_{k+1}] (a point once an exact expansion ends)
    Rational lo(pk, qk), hi = lo;
    bool point = false;
    if (k + 1 <= d.available() && k + 1 <= depth_limit) {
      BigInt a = d.a(k + 1);
      hi = Rational(a * pk + pm, a * qk + qm);
    } else if (d.finite_exact() && k == d.available()) {
      point = true;
    } else {
      throw UndecidableError("best_approx_classify: enclosure at depth " + std::to_string(k) +
                             " straddles |q alpha - p| = 1/(qL)");
    }
    lo.canonicalize();
    hi.canonicalize();
    if (hi < lo) std::swap(lo, hi);
    Rational dlo = deviation(lo), dhi = deviation(hi);
    Rational vmax = std::max(dlo, dhi);
    Rational vmin = (target >= lo && target <= hi) ? Rational(0) : std::min(dlo, dhi);
    if (vmax <= threshold) {
      holds = true;
      break;
    }
    if (vmin > threshold) break;
    if (point) break;  // unreachable: a point has vmin == vmax
    BigInt a = d.a(k + 1);
    BigInt pn = a * pk + pm, qn = a * qk + qm;
    pm = pk;
    qm = qk;
    pk = std::move(pn);
    qk = std::move(qn);
  }
  if (!holds) return std::nullopt;

  // Locate (p, q) among the convergents and check the quotient bound.
  pm = 1, qm = 0, pk = 0, qk = 1;
  for (std::size_t k = 0; qk <= q; ++k) {
    if (pk == p && qk == q) {
      if (!d.has(k + 1)) {
        if (d.finite_exact()) return k;  // alpha == p/q
        throw UndecidableError("best_approx_classify: a_" + std::to_string(k + 1) + " not available");
      }
      if (Rational(2 * d.a(k + 1)) < L)
        throw Error("best_approx_classify: a_" + std::to_string(k + 1) + " < L/2 despite the approximation");
      return k;
    }
    if (!d.has(k + 1)) break;
    BigInt a = d.a(k + 1);
    BigInt pn = a * pk + pm, qn = a * qk + qm;
    pm = pk;
    qm = qk;
    pk = std::move(pn);
    qk = std::move(qn);
  }
  throw Error("best_approx_classify: " + p.get_str() + "/" + q.get_str() +
              " approximates within 1/(qL) but is not a principal convergent");
}

}  // namespace rotor
