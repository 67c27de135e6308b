#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace densitylab {

// Error families map one-to-one onto the CLI exit codes.
enum class ErrorClass : int {
  Parse = 2,
  Precondition = 3,
  NonConvergent = 4,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorClass cls, const std::string& what)
      : std::runtime_error(what), class_(cls) {}
  ErrorClass error_class() const { return class_; }

 private:
  ErrorClass class_;
};

// Argument outside the supported numeric range (alpha, theta, weights, ...).
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what)
      : Error(ErrorClass::Precondition, what) {}
};

class PreconditionFailed : public Error {
 public:
  explicit PreconditionFailed(const std::string& what)
      : Error(ErrorClass::Precondition, what) {}
};

class InsufficientHorizon : public PreconditionFailed {
 public:
  explicit InsufficientHorizon(const std::string& what)
      : PreconditionFailed(what) {}
};

class InsufficientElements : public PreconditionFailed {
 public:
  explicit InsufficientElements(const std::string& what)
      : PreconditionFailed(what) {}
};

class HorizonExceeded : public PreconditionFailed {
 public:
  explicit HorizonExceeded(const std::string& what)
      : PreconditionFailed(what) {}
};

class OutOfRange : public PreconditionFailed {
 public:
  explicit OutOfRange(const std::string& what) : PreconditionFailed(what) {}
};

class NotDisjoint : public PreconditionFailed {
 public:
  NotDisjoint(std::int64_t witness, const std::string& what)
      : PreconditionFailed(what), witness_(witness) {}
  std::int64_t witness() const { return witness_; }

 private:
  std::int64_t witness_;
};

// A filter surrogate failed to pin a single cluster point.
class NonConvergent : public Error {
 public:
  NonConvergent(double spread, const std::string& what)
      : Error(ErrorClass::NonConvergent, what), spread_(spread) {}
  double spread() const { return spread_; }

 private:
  double spread_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t offset, const std::string& what)
      : Error(ErrorClass::Parse, what + " (at offset " + std::to_string(offset) + ")"),
        offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace densitylab
