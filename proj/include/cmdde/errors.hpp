#pragma once

#include <stdexcept>
#include <string>

namespace cmdde {

/// Error categories raised by the numerical core. Every math-domain kind has a
/// stable kebab-case name that is surfaced through the C API and the CLI.
enum class ErrorKind {
  InvalidArgument,
  Domain,
  NoHopf,
  InvalidRoot,
  NotHopfPoint,
  RootOnContour,
  QuadratureNonConvergence,
  DegenerateE,
  Resonance12,
  ZeroEigenvalue,
  DegenerateDenominator,
  Inconsistency,
  InconsistentFamily,
  PerturbedResonance,
  IllConditioned,
  Divergence,
  TooFewCrossings,
  Parse,
  Io,
};

const char* error_name(ErrorKind kind) noexcept;

// Math errors map to CLI exit code 2; parse/IO/argument errors to 1.
bool is_math_error(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  const char* name() const noexcept { return error_name(kind_); }

 private:
  ErrorKind kind_;
};

class DivergenceError : public Error {
 public:
  DivergenceError(double time, const std::string& what)
      : Error(ErrorKind::Divergence, what), time_(time) {}

  double time() const noexcept { return time_; }

 private:
  double time_;
};

}  // namespace cmdde
