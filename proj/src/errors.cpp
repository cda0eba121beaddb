#include "cmdde/errors.hpp"

namespace cmdde {

const char* error_name(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::NoHopf: return "no-hopf";
    case ErrorKind::InvalidRoot: return "invalid-root";
    case ErrorKind::NotHopfPoint: return "not-a-hopf-point";
    case ErrorKind::RootOnContour: return "root-on-contour";
    case ErrorKind::QuadratureNonConvergence: return "quadrature-non-convergence";
    case ErrorKind::DegenerateE: return "degenerate-e";
    case ErrorKind::Resonance12: return "resonance-1-2";
    case ErrorKind::ZeroEigenvalue: return "zero-eigenvalue";
    case ErrorKind::DegenerateDenominator: return "degenerate-denominator";
    case ErrorKind::Inconsistency: return "inconsistency";
    case ErrorKind::InconsistentFamily: return "inconsistent-family";
    case ErrorKind::PerturbedResonance: return "perturbed-resonance";
    case ErrorKind::IllConditioned: return "ill-conditioned";
    case ErrorKind::Divergence: return "divergence";
    case ErrorKind::TooFewCrossings: return "too-few-crossings";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

bool is_math_error(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument:
    case ErrorKind::Parse:
    case ErrorKind::Io:
      return false;
    default:
      return true;
  }
}

}  // namespace cmdde
