#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace berry {

// Invalid arguments are reported with std::invalid_argument. The types below
// cover the domain-specific failure modes.

/// The field vanishes, so no polar angle is defined.
class DegenerateFieldError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A phase was requested from a zero-length Bloch xy-vector.
class UndefinedPhaseError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Normalizing against a reference whose coherence is zero.
class DegenerateReferenceError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Too few samples for a statistical test.
class InsufficientDataError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A single Monte Carlo realization failed; carries its index.
class RealizationError : public std::runtime_error {
 public:
  RealizationError(std::uint64_t realization, const std::string& what)
      : std::runtime_error("realization " + std::to_string(realization) + ": " + what),
        realization_(realization) {}

  std::uint64_t realization() const noexcept { return realization_; }

 private:
  std::uint64_t realization_;
};

}  // namespace berry
