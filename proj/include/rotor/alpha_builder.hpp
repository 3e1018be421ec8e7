#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "rotor/cf_core.hpp"
#include "rotor/observable.hpp"

namespace rotor {

// [a, a, ..., a] as a known prefix of the irrational [0; a, a, a, ...].
CfDigits constant_digits(const BigInt& a, std::size_t len);
// The same number with an unbounded lazy tail.
CfDigits constant_lazy(const BigInt& a);

// First `len` digits of a uniformly drawn dyadic rational with enough bits
// that these digits are those of every real in its dyadic cell.
CfDigits gauss_random(std::size_t len, std::uint64_t seed);
// Digit i of a pure per-(seed, i) stream with the Gauss-measure law of a_1.
BigInt gauss_digit(std::uint64_t seed, std::size_t i);

enum class Filler { Ones, Gauss };

struct PlantingPlan {
  struct Stage {
    std::size_t n_k = 0;
    BigInt r_k;
    BigInt a_planted;  // a_{n_k + 1}
    BigInt L_k;        // a_1 + ... + a_{n_k}
    BigInt q_nk;
  };
  std::vector<Stage> stages;
  Filler filler = Filler::Ones;
  std::uint64_t seed = 0;
  BigInt M;

  nlohmann::json to_json() const;
};

struct BuiltAlpha {
  CfDigits digits;  // planted prefix followed by the filler tail
  PlantingPlan plan;
  std::size_t prefix_length = 0;
};

// Greedy construction: at stage k append fillers until some r <= M gives
// r q_n in the syndetic set, then plant a_{n+1} = k^3 L_k. `search_budget`
// bounds the fillers appended per stage; BudgetExhausted carries the q_n trace.
BuiltAlpha build_in_A(const SyndeticReport& nset, const BigInt& M, std::size_t n_stages, std::size_t search_budget,
                      std::uint64_t seed, Filler filler = Filler::Ones);

}  // namespace rotor
