#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace weylbessel {

/// Invalid argument or precondition violation.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input lies on a chamber wall where a drift or generator is singular.
class SingularInputError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Requested combination has no implemented formula.
class UnsupportedError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// ODE step control could not keep the configuration inside the chamber.
class IntegrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Importance weights collapsed onto too few samples.
class DegenerateWeightsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Failure while simulating one path of a Monte-Carlo batch.
class PathError : public std::runtime_error {
 public:
  PathError(std::size_t path_index, const std::string& what)
      : std::runtime_error("path " + std::to_string(path_index) + ": " + what), path_index_(path_index) {}

  std::size_t path_index() const noexcept { return path_index_; }

 private:
  std::size_t path_index_;
};

}  // namespace weylbessel
