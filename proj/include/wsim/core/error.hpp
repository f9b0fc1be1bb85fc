#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wsim {

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Input file does not match the expected column layout.
class SchemaError : public Error {
  public:
    using Error::Error;
};

/// A record violates a domain invariant. `row` is the 1-based data row, 0 when not row-bound.
class ValidationError : public Error {
  public:
    ValidationError(const std::string &what, std::size_t row = 0);
    [[nodiscard]] std::size_t row() const noexcept { return row_; }

  private:
    std::size_t row_;
};

class ConfigError : public Error {
  public:
    using Error::Error;
};

class ConvergenceError : public Error {
  public:
    ConvergenceError(const std::string &what, double last_residual);
    [[nodiscard]] double last_residual() const noexcept { return last_residual_; }

  private:
    double last_residual_;
};

class SeparationError : public Error {
  public:
    using Error::Error;
};

class InfeasibleError : public Error {
  public:
    using Error::Error;
};

/// Pipeline failure tagged with the stage that raised it.
class StageError : public Error {
  public:
    StageError(std::string stage, const std::string &cause);
    [[nodiscard]] const std::string &stage() const noexcept { return stage_; }

  private:
    std::string stage_;
};

} // namespace wsim
