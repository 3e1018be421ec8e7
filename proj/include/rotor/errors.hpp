#pragma once

#include <stdexcept>
#include <string>

namespace rotor {

// Base of every error raised by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A precondition on the arguments does not hold.
struct DomainError : Error {
  using Error::Error;
};

// The operation needs more partial quotients, or a larger n, than available.
struct HorizonError : Error {
  using Error::Error;
};

// The available enclosure of alpha straddles a decision threshold.
struct UndecidableError : Error {
  using Error::Error;
};

// A set that must be non-empty (the syndetic set, Omega_k(I), ...) is empty.
struct EmptySetError : Error {
  using Error::Error;
};

// A bounded search ran out of budget.
struct BudgetExhausted : Error {
  using Error::Error;
};

// The starting point x does not satisfy |mu| >= eps1 at the requested stage.
struct BadSampleError : Error {
  using Error::Error;
};

// Config validation failure; `path` names the offending field ("alpha.digits[3]").
struct ConfigError : Error {
  ConfigError(std::string field_path, const std::string& what)
      : Error(field_path + ": " + what), path(std::move(field_path)) {}
  std::string path;
};

}  // namespace rotor
