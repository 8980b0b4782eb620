#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace csgpart {

/// Raised when a caller breaks a documented precondition.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Malformed or inconsistent input data (files, point clouds, primitives).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Tree text that does not follow the prefix grammar.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t position, const std::string& expected)
      : std::runtime_error("parse error at offset " + std::to_string(position) +
                           ": expected " + expected),
        position_(position),
        expected_(expected) {}

  std::size_t position() const noexcept { return position_; }
  const std::string& expected() const noexcept { return expected_; }

 private:
  std::size_t position_;
  std::string expected_;
};

/// The per-partition trees cannot be joined into one tree.
class NonMergeableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace csgpart
