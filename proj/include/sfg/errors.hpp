#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace sfg {

/// Base for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition of an operation was not met by the caller.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// An iterative solver exhausted its budget.
class NoConvergence : public Error {
 public:
  NoConvergence(const std::string& what, std::vector<std::complex<double>> last_iterate)
      : Error(what), last_iterate_(std::move(last_iterate)) {}

  const std::vector<std::complex<double>>& last_iterate() const noexcept { return last_iterate_; }

 private:
  std::vector<std::complex<double>> last_iterate_;
};

/// A closed form produced no root that survives substitution into the
/// fixed-point equations.
class InternalInconsistency : public Error {
 public:
  InternalInconsistency(const std::string& what, std::vector<std::complex<double>> candidates)
      : Error(what), candidates_(std::move(candidates)) {}

  const std::vector<std::complex<double>>& candidates() const noexcept { return candidates_; }

 private:
  std::vector<std::complex<double>> candidates_;
};

/// Linearized spectra were requested at an operating point whose drift
/// matrix has an eigenvalue with non-positive real part.
class UnstableOperatingPoint : public Error {
 public:
  UnstableOperatingPoint(const std::string& what, double margin) : Error(what), margin_(margin) {}
  double margin() const noexcept { return margin_; }

 private:
  double margin_;
};

/// Too many stochastic trajectories diverged for the averages to be trusted.
class EnsembleQualityError : public Error {
 public:
  EnsembleQualityError(const std::string& what, std::size_t diverged, std::size_t total)
      : Error(what), diverged_(diverged), total_(total) {}

  std::size_t diverged() const noexcept { return diverged_; }
  std::size_t total() const noexcept { return total_; }

 private:
  std::size_t diverged_;
  std::size_t total_;
};

/// A correlation measure hit its denominator guard.
class UndefinedObservable : public Error {
 public:
  using Error::Error;
};

/// Configuration text or flags could not be turned into a valid run.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, int line = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

  /// 1-based line of the offending entry, 0 when not tied to a line.
  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace sfg
