#include "rotor/alpha_builder.hpp"

#include <cmath>

#include "rotor/birkhoff.hpp"
#include "rotor/errors.hpp"

namespace rotor {

CfDigits constant_digits(const BigInt& a, std::size_t len) {
  if (a < 1) throw DomainError("constant_digits: a must be >= 1");
  return CfDigits::prefix(std::vector<BigInt>(len, a));
}

CfDigits constant_lazy(const BigInt& a) {
  if (a < 1) throw DomainError("constant_lazy: a must be >= 1");
  return CfDigits::lazy({}, [a](std::size_t) { return a; });
}

namespace {

constexpr std::uint64_t kGaussStream = 0x6761757373ULL;
constexpr int kMaxRedraws = 64;

unsigned gauss_bits(std::size_t len) {
  // log2 q_n grows like 1.712 n (Levy); 2.2x leaves room for q_len^2 plus slack
  return static_cast<unsigned>(std::ceil(2.2 * 1.712 * static_cast<double>(len))) + 64;
}

BigInt random_bits(std::uint64_t seed, std::uint64_t draw, unsigned bits) {
  std::size_t words = (bits + 63) / 64;
  std::vector<std::uint64_t> w(words);
  for (std::size_t i = 0; i < words; ++i) w[i] = mix_seed(mix_seed(seed, draw), i);
  BigInt v;
  mpz_import(v.get_mpz_t(), words, -1, sizeof(std::uint64_t), 0, 0, w.data());
  mpz_fdiv_r_2exp(v.get_mpz_t(), v.get_mpz_t(), bits);
  return v;
}

}  // namespace

CfDigits gauss_random(std::size_t len, std::uint64_t seed) {
  if (len < 1) throw DomainError("gauss_random: len must be >= 1");
  unsigned bits = gauss_bits(len);
  BigInt den = pow2(bits);
  for (int draw = 0; draw < kMaxRedraws; ++draw) {
    BigInt num = random_bits(seed, static_cast<std::uint64_t>(draw), bits);
    if (num == 0) continue;
    CfDigits full = expand_rational(num, den);
    // strictly longer, so the kept digits are shared by the whole dyadic cell
    if (full.available() > len) return CfDigits::prefix(full.take(len));
  }
  throw DomainError("gauss_random: expansion shorter than " + std::to_string(len) + " digits after " +
                    std::to_string(kMaxRedraws) + " draws");
}

BigInt gauss_digit(std::uint64_t seed, std::size_t i) {
  std::uint64_t u = mix_seed(seed ^ kGaussStream, i);
  double U = (static_cast<double>(u >> 11) + 0.5) * 0x1p-53;
  // x = 2^U - 1 has the Gauss density 1/((1+x) ln 2)
  double x = std::expm1(U * std::log(2.0));
  return BigInt(std::floor(1.0 / x));
}

nlohmann::json PlantingPlan::to_json() const {
  nlohmann::json st = nlohmann::json::array();
  for (const auto& s : stages)
    st.push_back({{"n_k", s.n_k},
                  {"r_k", s.r_k.get_str()},
                  {"a_planted", s.a_planted.get_str()},
                  {"L_k", s.L_k.get_str()},
                  {"q_nk", s.q_nk.get_str()}});
  return {{"stages", st}, {"filler", filler == Filler::Ones ? "ones" : "gauss"}, {"seed", seed}, {"M", M.get_str()}};
}

BuiltAlpha build_in_A(const SyndeticReport& nset, const BigInt& M, std::size_t n_stages, std::size_t search_budget,
                      std::uint64_t seed, Filler filler) {
  if (nset.members.empty()) throw EmptySetError("build_in_A: the syndetic set is empty");
  if (M < 1) throw DomainError("build_in_A: M must be >= 1");

  auto fill = [filler, seed](std::size_t i) -> BigInt {
    return filler == Filler::Ones ? BigInt(1) : gauss_digit(seed, i);
  };

  std::vector<BigInt> digits;
  BigInt q_prev = 0, q = 1;  // q_{n-1}, q_n
  BigInt L = 0;              // a_1 + ... + a_n
  auto push = [&](const BigInt& a) {
    digits.push_back(a);
    BigInt next = a * q + q_prev;
    q_prev = q;
    q = next;
    L += a;
  };

  PlantingPlan plan;
  plan.filler = filler;
  plan.seed = seed;
  plan.M = M;
  for (std::size_t k = 1; k <= n_stages; ++k) {
    if (digits.empty()) push(fill(1));
    std::vector<BigInt> trace;
    std::size_t appended = 0;
    BigInt r_found = 0;
    while (true) {
      trace.push_back(q);
      for (BigInt r = 1; r <= M; ++r)
        if (nset.contains(r * q)) {
          r_found = r;
          break;
        }
      if (r_found != 0) break;
      if (appended == search_budget) {
        std::string msg = "build_in_A: stage " + std::to_string(k) + " found no r <= " + M.get_str() +
                          " with r q_n in the set; q_n trace:";
        for (const auto& t : trace) msg += " " + t.get_str();
        throw BudgetExhausted(msg);
      }
      push(fill(digits.size() + 1));
      ++appended;
    }
    PlantingPlan::Stage s;
    s.n_k = digits.size();
    s.r_k = r_found;
    s.L_k = L;
    s.q_nk = q;
    BigInt kk = static_cast<unsigned long>(k);
    s.a_planted = kk * kk * kk * L;
    push(s.a_planted);
    plan.stages.push_back(s);
  }

  BuiltAlpha out;
  out.prefix_length = digits.size();
  out.digits = CfDigits::lazy(std::move(digits), fill);
  out.plan = std::move(plan);
  return out;
}

}  // namespace rotor
