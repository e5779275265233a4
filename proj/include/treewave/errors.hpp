#pragma once

#include <stdexcept>
#include <string>

namespace treewave {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Mismatched or invalid parameters (e.g. two different branching numbers).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Division by zero and similar arithmetic failures.
class ArithmeticError : public Error {
 public:
  using Error::Error;
};

/// An operation would touch a vertex outside the explicit truncation ball.
class TruncationError : public Error {
 public:
  using Error::Error;
};

/// Input outside the domain of an operation (e.g. a non-even sequence).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Operation not available in the requested scalar mode.
class ModeError : public Error {
 public:
  using Error::Error;
};

/// Invalid experiment configuration or command line.
class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace treewave
