#pragma once

#include <stdexcept>
#include <string>

namespace vat {

// Parameter outside the model's domain (a > 1, f <= 1, r == 0, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Level geometry that the summation forms or the simulators cannot represent,
// e.g. S_l / S_i not integral.
class GeometryError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Unreadable or malformed input files (traces, device profiles).
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public IoError {
 public:
  ParseError(std::string file, std::size_t line, const std::string& what)
      : IoError(file + ":" + std::to_string(line) + ": " + what),
        file_(std::move(file)),
        line_(line) {}

  const std::string& file() const noexcept { return file_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string file_;
  std::size_t line_;
};

}  // namespace vat
