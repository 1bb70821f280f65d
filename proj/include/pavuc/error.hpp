#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pavuc {

/// Bad argument value (out-of-range count, ratio outside [0,1], non-finite input).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Operand shapes incompatible with the operation.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Solver configuration inconsistent with itself or with the dataset.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Dataset directory could not be read or failed validation.
class LoadError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The objective became non-finite during optimization.
class NumericalFailure : public std::runtime_error {
 public:
  NumericalFailure(std::size_t iteration, const std::string& what)
      : std::runtime_error(what), iteration_(iteration) {}

  std::size_t iteration() const noexcept { return iteration_; }

 private:
  std::size_t iteration_;
};

}  // namespace pavuc
