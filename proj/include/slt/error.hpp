#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace slt {

// Broad failure classes. The CLI maps them onto exit codes 2 (data) and
// 3 (numerical); InvalidInput is reported as a data error at the CLI layer.
enum class ErrorKind { InvalidInput, Data, Numerical };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class InvalidInput : public Error {
 public:
  explicit InvalidInput(const std::string& what)
      : Error(ErrorKind::InvalidInput, what) {}
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(ErrorKind::Data,
              "line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// A class-conditional fraction was requested but the class has no samples.
class UndefinedClassRisk : public Error {
 public:
  explicit UndefinedClassRisk(const std::string& what)
      : Error(ErrorKind::Data, what) {}
};

class InvalidDistribution : public Error {
 public:
  explicit InvalidDistribution(const std::string& what)
      : Error(ErrorKind::Data, what) {}
};

class NotApplicable : public Error {
 public:
  explicit NotApplicable(const std::string& what)
      : Error(ErrorKind::InvalidInput, what) {}
};

class CountOverflow : public Error {
 public:
  explicit CountOverflow(const std::string& what)
      : Error(ErrorKind::Numerical, what) {}
};

class DimensionCapExceeded : public Error {
 public:
  explicit DimensionCapExceeded(const std::string& what)
      : Error(ErrorKind::Numerical, what) {}
};

class UnboundedComplexity : public Error {
 public:
  explicit UnboundedComplexity(const std::string& what)
      : Error(ErrorKind::Numerical, what) {}
};

}  // namespace slt
