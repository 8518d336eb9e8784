#pragma once

#include <stdexcept>
#include <string>

namespace canon {

/// Base of every error thrown by the library. `code()` is the stable status
/// reported through the C API and used as the CLI exit code.
class Error : public std::runtime_error {
public:
  enum class Code : int {
    parse = 2,
    domain = 3,
    convergence = 4,
  };

  Error(Code code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Code code() const noexcept { return code_; }

private:
  Code code_;
};

class ParseError : public Error {
public:
  explicit ParseError(const std::string& what) : Error(Code::parse, what) {}
};

class DomainError : public Error {
public:
  explicit DomainError(const std::string& what) : Error(Code::domain, what) {}
};

/// Input Hamiltonian failed `validate`.
class ValidationError : public DomainError {
public:
  explicit ValidationError(const std::string& what) : DomainError(what) {}
};

/// Requested a feature the numerics do not cover (e.g. singular spectral parts).
class UnsupportedError : public DomainError {
public:
  explicit UnsupportedError(const std::string& what) : DomainError(what) {}
};

/// The Toeplitz/Wiener-Hopf data is not positive definite.
class SpectralPositivityError : public DomainError {
public:
  explicit SpectralPositivityError(const std::string& what) : DomainError(what) {}
};

class FactorizationError : public DomainError {
public:
  explicit FactorizationError(const std::string& what) : DomainError(what) {}
};

class ConvergenceError : public Error {
public:
  ConvergenceError(const std::string& what, double last_value)
      : Error(Code::convergence, what), last_value_(last_value) {}

  /// Last diagnostic reached before giving up (Weyl disk diameter, relative change, ...).
  double last_value() const noexcept { return last_value_; }

private:
  double last_value_;
};

}  // namespace canon
