#pragma once

// Perturbation oracle: nearby problems whose critical pair has moved to
// mu_eps +- i omega_eps with mu_eps > 0. There the w21 boundary system is
// regular, and its solution tends to the limit value as eps -> 0.

#include <optional>
#include <string>
#include <vector>

#include "cmdde/cmcore.hpp"

namespace cmdde::perturb {

inline constexpr double kCharResidualTol = 1e-12;
inline constexpr double kIllConditionedTol = 1e-14;
inline constexpr double kHFormSwitch = 1e-8;

enum class Family {
  ScaleB,         // B_eps = B (1 + eps), omega_eps = omega
  ScaleBSquared,  // B_eps = B (1 + eps)^2, omega_eps = omega
  ShiftA,         // A_eps = A + eps, B_eps = B, root tracked by Newton
};

const char* family_name(Family f);
Family parse_family(const std::string& name);

struct PerturbedProblem {
  double eps = 0.0;
  Family family = Family::ScaleB;
  double A_eps = 0.0;
  double B_eps = 0.0;
  double r = 1.0;
  double mu_eps = 0.0;
  double omega_eps = 0.0;
  Complex lambda_eps;
  double char_residual = 0.0;

  chareq::LinearPart lin() const { return {A_eps, B_eps, r}; }
};

PerturbedProblem make_perturbed(const chareq::LinearPart& lin, double omega, double eps,
                                Family family = Family::ScaleB);

struct PerturbedCoeffs {
  spectral::EigenData eig;
  Complex Psi_eps1_at_0;
  cmcore::SecondOrder so;
  cmcore::ThirdOrderRhs third;  // f, g at order 3, R_eps1, R_eps2, Delta_eps
  Complex Delta_eps;
};

PerturbedCoeffs perturbed_coeffs(const cmcore::ModelSpec& model, const PerturbedProblem& p);

struct W21Pair {
  Complex at_0;
  Complex at_mr;
};

/// Direct solve of the regular 2x2 system; ill-conditioned error when
/// |Delta_eps| <= 1e-14.
W21Pair solve_perturbed_w21(const PerturbedProblem& p, const PerturbedCoeffs& pc);

struct HDecomposition {
  Complex h1;
  Complex h2;
};

/// B_eps R_eps1 - R_eps2 = mu_eps h1 and Delta_eps = mu_eps h2, both formed
/// without dividing by mu_eps.
HDecomposition h_decomposition(const PerturbedProblem& p, const PerturbedCoeffs& pc);

/// w21 pair from h1 / h2.
W21Pair solve_perturbed_w21_h(const PerturbedProblem& p, const PerturbedCoeffs& pc,
                              const HDecomposition& h);

struct GridEstimate {
  double eps = 0.0;
  double mu_eps = 0.0;
  Complex w21_0;
  Complex w21_mr;
  Complex h1;
  Complex h2;
  Complex Delta_eps;
  bool via_h = false;
};

struct Extrapolation {
  Family family = Family::ScaleB;
  std::vector<GridEstimate> estimates;
  Complex extrapolated;
  Complex extrapolated_mr;
  Complex closed_form;
  double gap_to_closed_form = 0.0;
  std::optional<double> observed_order;  // log-log slope of |estimate - closed form|
  double error_constant = 0.0;           // max |estimate - closed form| / eps
  Complex h2_limit;                      // 2 r omega i - 2 r A + 2
  bool h2_monotone = true;
  bool estimates_monotone = true;
  std::vector<std::string> warnings;
};

std::vector<double> default_eps_grid();

/// Evaluates the oracle on the grid (strictly decreasing, positive, at least
/// three points) and extrapolates to eps = 0 with a Neville polynomial through
/// all grid points.
Extrapolation extrapolate_w21(const cmcore::ModelSpec& model, const spectral::EigenData& eig,
                              const std::vector<double>& eps_grid,
                              Family family = Family::ScaleB);

/// Neville evaluation at 0 of the interpolating polynomial through (x_i, y_i).
Complex neville_at_zero(const std::vector<double>& x, const std::vector<Complex>& y);

}  // namespace cmdde::perturb
