#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace crn {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid distribution or model parameters.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of a function.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Caller misuse: mismatched lengths, non-positive counts, bad flags.
class UsageError : public Error {
 public:
  using Error::Error;
};

/// A required input file is missing or unreadable.
class FileNotFound : public UsageError {
 public:
  using UsageError::UsageError;
};

/// Malformed input file.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t row)
      : Error(what + " (row " + std::to_string(row) + ")"), row_(row) {}
  std::size_t row() const { return row_; }

 private:
  std::size_t row_;
};

/// Numeric failure during a computation: overflow, non-finite state, failed factorization.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// A simulated state became non-finite. Carries where it happened.
class NumericOverflow : public NumericError {
 public:
  NumericOverflow(std::size_t iteration, std::size_t replicate = npos)
      : NumericError(describe(iteration, replicate)),
        iteration_(iteration),
        replicate_(replicate) {}

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  std::size_t iteration() const { return iteration_; }
  std::size_t replicate() const { return replicate_; }

 private:
  static std::string describe(std::size_t iteration, std::size_t replicate) {
    std::string s = "non-finite state at iteration " + std::to_string(iteration);
    if (replicate != npos) s += " of replicate " + std::to_string(replicate);
    return s;
  }

  std::size_t iteration_;
  std::size_t replicate_;
};

}  // namespace crn
