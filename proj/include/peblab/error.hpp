#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace peblab {

// Root of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An exhaustive search or enumeration ran past its configured budget.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(const std::string& what, std::size_t visited)
      : Error(what + " (budget exceeded after " + std::to_string(visited) + " states)"),
        visited_(visited) {}
  std::size_t visited() const { return visited_; }

 private:
  std::size_t visited_;
};

// Malformed text input; line is 1-based, 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Default visited-state budget for exhaustive searches; PEBLAB_BUDGET overrides it.
std::size_t default_budget();

}  // namespace peblab
