#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace agr {

/// Base for every error raised by the library. The CLI maps `DomainError`
/// subclasses to exit code 3 and `WorkBoundExceeded` to exit code 4.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class SyntaxError : public DomainError {
 public:
  SyntaxError(const std::string& what, std::size_t offset)
      : DomainError(what + " at byte " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class EvaluationError : public DomainError {
 public:
  using DomainError::DomainError;
};

class UnsupportedNode : public DomainError {
 public:
  using DomainError::DomainError;
};

class NotInFragment : public DomainError {
 public:
  using DomainError::DomainError;
};

class IndeterminateForm : public DomainError {
 public:
  using DomainError::DomainError;
};

class UnorderablePair : public DomainError {
 public:
  using DomainError::DomainError;
};

class NotPrime : public DomainError {
 public:
  using DomainError::DomainError;
};

class NotGenerator : public DomainError {
 public:
  using DomainError::DomainError;
};

class InvalidInstance : public DomainError {
 public:
  using DomainError::DomainError;
};

class ReductionFailed : public DomainError {
 public:
  using DomainError::DomainError;
};

class WorkBoundExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace agr
