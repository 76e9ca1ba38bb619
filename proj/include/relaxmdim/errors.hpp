#pragma once

#include <stdexcept>
#include <string>

namespace relaxmdim {

// Error categories map one-to-one onto CLI exit codes.
enum class ErrorKind {
  validation = 2,
  incompatible_method = 3,
  resource_refusal = 4,
};

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  int exit_code() const noexcept { return static_cast<int>(kind_); }

private:
  ErrorKind kind_;
};

class ValidationError : public Error {
public:
  explicit ValidationError(const std::string& what)
      : Error(ErrorKind::validation, what) {}
};

class ParseError : public ValidationError {
public:
  ParseError(std::size_t line, const std::string& what)
      : ValidationError("line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

class IncompatibleMethodError : public Error {
public:
  explicit IncompatibleMethodError(const std::string& what)
      : Error(ErrorKind::incompatible_method, what) {}
};

class ResourceRefusalError : public Error {
public:
  explicit ResourceRefusalError(const std::string& what)
      : Error(ErrorKind::resource_refusal, what) {}
};

// Raised by the GW recursions when 1 - pgf'(d_r) is not positive.
class SingularityError : public ValidationError {
public:
  explicit SingularityError(const std::string& what) : ValidationError(what) {}
};

} // namespace relaxmdim
