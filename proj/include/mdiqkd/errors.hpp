#pragma once

#include <stdexcept>
#include <string>

namespace mdiqkd {

// The two key states are too close to span a qubit, or the third state
// coincides with a key state.
class DegenerateEmbeddingError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A virtual state has vanishing norm and cannot be normalized.
class DegenerateStateError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// The single-party Bloch matrix is too ill-conditioned to invert.
class SingularSystemError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// No successful key rounds: the phase-error rate is undefined.
class ZeroGammaError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A Fock-space truncation drops more probability than the tolerance allows.
class CutoffError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidProbabilityError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Configuration failed validation. `field` names the offending key path.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace mdiqkd
