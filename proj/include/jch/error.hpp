#pragma once

#include <stdexcept>
#include <string>

namespace jch {

/// Failure categories; each maps onto one CLI exit code.
enum class ErrorKind { config = 1, numerical = 2, io = 3 };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  int exit_code() const noexcept { return static_cast<int>(kind_); }

 private:
  ErrorKind kind_;
};

/// Invalid or inconsistent input: configuration values, lengths, record times.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ErrorKind::config, what) {}
};

/// Propagation failures, norm drift, boundary leaks, domain errors in reductions.
class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what) : Error(ErrorKind::numerical, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorKind::io, what) {}
};

/// Throws the subclass matching `kind` with the given message.
[[noreturn]] inline void throw_error(ErrorKind kind, const std::string& what) {
  switch (kind) {
    case ErrorKind::config: throw ConfigError(what);
    case ErrorKind::numerical: throw NumericalError(what);
    case ErrorKind::io: throw IoError(what);
  }
  throw Error(kind, what);
}

}  // namespace jch
