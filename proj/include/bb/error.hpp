#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bb {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Syntax or name error in expression text. offset is a byte offset into the source.
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, std::size_t offset)
      : Error(msg + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Non-finite intermediate while evaluating an expression.
class DomainError : public Error {
 public:
  DomainError(const std::string& node, double x)
      : Error("non-finite value in '" + node + "' at x=" + std::to_string(x)), node_(node), x_(x) {}
  const std::string& node() const noexcept { return node_; }
  double x() const noexcept { return x_; }

 private:
  std::string node_;
  double x_;
};

/// A theorem's hypothesis does not hold for the given input (e.g. inf |f''| = 0 for the cor1 threshold).
class HypothesisError : public Error {
 public:
  using Error::Error;
};

/// Input for which a quantity is undefined, such as a ratio with a vanishing denominator.
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

/// Threshold search exhausted its horizon.
class NotFoundError : public Error {
 public:
  using Error::Error;
};

}  // namespace bb
