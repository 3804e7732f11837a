#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ccn {

// Tupleness, vector length or state-dimension mismatch.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Malformed or semantically invalid input document.
class SpecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Neighborhood too large for a subset enumeration.
class SizeCapError : public std::length_error {
 public:
  using std::length_error::length_error;
};

class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, std::size_t step)
      : std::runtime_error(what), step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

}  // namespace ccn
