#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace nnorm {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dimension, arity or element-kind mismatch. Carries the offending position
/// when one can be named.
class ShapeError : public Error {
 public:
  explicit ShapeError(const std::string& what,
                      std::optional<std::size_t> index = std::nullopt)
      : Error(index ? what + " (index " + std::to_string(*index) + ")" : what),
        index_(index) {}

  std::optional<std::size_t> index() const noexcept { return index_; }

 private:
  std::optional<std::size_t> index_;
};

/// NaN or infinite input.
class NonFiniteError : public Error {
 public:
  using Error::Error;
};

/// An operation's stated precondition does not hold for the given input.
/// Distinct from a property violation, which is reported, not thrown.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A sampled construction failed its own post-hoc validation after all
/// retries.
class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace nnorm
