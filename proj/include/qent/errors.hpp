#pragma once

#include <stdexcept>
#include <string>

namespace qent {

/// Invalid or inconsistent configuration. `key()` names the offending key
/// (empty when the problem is not tied to one key, e.g. a missing file).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::runtime_error(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

/// Argument outside the domain an operation is defined on.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Conditioning on an outcome whose probability is below the norm floor.
class UndefinedConditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numerical failure: non-convergence, non-Hermitian input, step too large...
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qent
