#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ovi {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Violated precondition, e.g. a width mismatch between two vectors.
class ContractError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// A structure would exceed its configured memory budget. Nothing is built.
class CapacityError : public Error {
 public:
  using Error::Error;
};

class PlanningError : public Error {
 public:
  using Error::Error;
};

// random_opt build refused: some list is longer than the configured guard.
class GuardError : public Error {
 public:
  GuardError(std::size_t list_length, std::size_t guard)
      : Error("list of length " + std::to_string(list_length) +
              " exceeds guard " + std::to_string(guard) +
              "; rebuild in standard tlqg mode"),
        list_length_(list_length) {}

  std::size_t list_length() const noexcept { return list_length_; }

 private:
  std::size_t list_length_;
};

}  // namespace ovi
