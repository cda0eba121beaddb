#pragma once

// Characteristic quasi-polynomial F(lambda) = lambda - A - B e^{-lambda r} of
// the linearization x'(t) = A x(t) + B x(t - r).

#include "cmdde/funcalg.hpp"

namespace cmdde::chareq {

inline constexpr double kDefaultHopfTol = 1e-10;
inline constexpr double kSimplicityTol = 1e-8;

struct LinearPart {
  double A = 0.0;
  double B = 0.0;
  double r = 1.0;

  // Throws InvalidArgument unless r > 0 and all fields are finite.
  void validate() const;
};

struct HopfPoint {
  double omega = 0.0;
  double residual = 0.0;  // |F(i omega)|
  bool simple = false;    // |F'(i omega)| > kSimplicityTol
};

struct HopfParameter {
  double A = 0.0;
  HopfPoint hopf;
  int iterations = 0;
};

struct Rect {
  double re_min = 0.0;
  double re_max = 0.0;
  double im_min = 0.0;
  double im_max = 0.0;
};

Complex char_value(const LinearPart& lin, Complex lambda);

/// F'(lambda) = 1 + B r e^{-lambda r}.
Complex char_derivative(const LinearPart& lin, Complex lambda);

/// Locates A such that +-i omega are characteristic roots for the given B, r
/// by a damped 2x2 Newton iteration in (A, omega).
HopfParameter find_hopf_parameter(double B, double r, double omega_guess);

HopfPoint verify_hopf(const LinearPart& lin, double omega, double tol = kDefaultHopfTol);

/// Complex Newton for a root of F near the guess.
Complex find_root_near(const LinearPart& lin, Complex guess, int max_iter = 100);

/// Number of roots inside the rectangle, by the argument principle.
int count_roots_rect(const LinearPart& lin, const Rect& rect);

Rect default_audit_rect(const LinearPart& lin, double omega);

struct SpectrumAudit {
  Rect rect;
  int count = 0;
  int expected = 2;
  bool ok = false;
};

// Advisory check that only the critical pair sits in the closed right half of
// the audit rectangle. Never throws for a wrong count; the caller decides.
SpectrumAudit audit_spectrum(const LinearPart& lin, double omega);

}  // namespace cmdde::chareq
