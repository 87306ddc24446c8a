#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace skf {

// Elementary function evaluated outside its domain (log of a nonpositive
// value, sqrt of a negative, division by zero, tan at a pole, ...).
class DomainError : public std::runtime_error {
public:
  explicit DomainError(std::string msg) : std::runtime_error(std::move(msg)) {}
};

// Expression source rejected by the parser; offset is the byte position.
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& msg, std::size_t offset)
      : std::runtime_error(msg + " (at byte " + std::to_string(offset) + ")"),
        offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

private:
  std::size_t offset_;
};

// Unbound variable or malformed environment during evaluation.
class EvalError : public std::runtime_error {
public:
  explicit EvalError(std::string msg) : std::runtime_error(std::move(msg)) {}
};

// Invalid chart definition, inadmissible point, or degenerate metric.
class ChartError : public std::runtime_error {
public:
  explicit ChartError(std::string msg) : std::runtime_error(std::move(msg)) {}
};

}  // namespace skf
