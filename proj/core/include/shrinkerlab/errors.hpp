#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace shrinkerlab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A location, parameter or time lies outside the domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A local polynomial fit on a discrete surface was rank deficient.
class FitError : public Error {
 public:
  FitError(std::string element, const std::string& what)
      : Error("fit failed at " + element + ": " + what), element_(std::move(element)) {}
  const std::string& element() const noexcept { return element_; }

 private:
  std::string element_;
};

/// An operation's precondition failed; carries the measured quantity.
class PreconditionError : public Error {
 public:
  PreconditionError(const std::string& what, double measured)
      : Error(what), measured_(measured) {}
  double measured() const noexcept { return measured_; }

 private:
  double measured_;
};

/// The Gaussian tail beyond the truncation radius is not negligible.
class TruncationError : public Error {
 public:
  TruncationError(const std::string& what, double suggested_radius)
      : Error(what), suggested_radius_(suggested_radius) {}
  double suggested_radius() const noexcept { return suggested_radius_; }

 private:
  double suggested_radius_;
};

/// An iterative solve did not converge; keeps the residual history.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::vector<double> history)
      : Error(what), history_(std::move(history)) {}
  const std::vector<double>& history() const noexcept { return history_; }

 private:
  std::vector<double> history_;
};

/// Malformed input file or configuration.
class ParseError : public Error {
 public:
  ParseError(const std::string& source, int line, const std::string& what)
      : Error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace shrinkerlab
