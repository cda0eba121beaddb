#pragma once

// Center-manifold coefficients of
//   x'(t) = A x(t) + B x(t-r) + sum_{2<=j+k<=3} C_jk x(t)^j x(t-r)^k / (j! k!)
// at a Hopf point: quadratic profiles w20, w11, w02, the singular system for
// w21 and its limit value.

#include <array>
#include <map>
#include <optional>
#include <utility>

#include "cmdde/chareq.hpp"
#include "cmdde/errors.hpp"
#include "cmdde/funcalg.hpp"
#include "cmdde/spectral.hpp"

namespace cmdde::cmcore {

using funcalg::ExpPoly;
using funcalg::Interval;

inline constexpr double kResonanceTol = 1e-10;
inline constexpr double kDenominatorTol = 1e-10;
inline constexpr double kConsistencyTol = 1e-9;

struct ModelSpec {
  chareq::LinearPart lin;
  std::map<std::pair<int, int>, double> C;  // (j, k) -> C_jk, 2 <= j+k <= 3
  std::optional<double> omega_hint;

  double coeff(int j, int k) const;
  void set_coeff(int j, int k, double value);
  bool is_linear() const;
  void validate() const;
};

struct SecondOrder {
  Complex f20, f11, f02;
  Complex g20, g11, g02;
  ExpPoly w20{Interval{}};
  ExpPoly w11{Interval{}};
  ExpPoly w02{Interval{}};
  Complex w20_0, w20_mr;
  Complex w11_0, w11_mr;
  Complex w02_0, w02_mr;
};

// How singular boundary systems are reported. The unperturbed problem names
// the two genuine extra degeneracies; the perturbed one lumps them together.
struct SingularityPolicy {
  double tol20 = kResonanceTol;
  ErrorKind kind20 = ErrorKind::Resonance12;
  double tol11 = kResonanceTol;
  ErrorKind kind11 = ErrorKind::ZeroEigenvalue;
};

SingularityPolicy perturbed_policy();

struct BoundarySolution {
  ExpPoly profile{Interval{}};
  Complex at_0;
  Complex at_mr;
  Complex rhs1;   // particular solution with w(0) = 0, evaluated at -r
  Complex rhs2;   // forcing(0) - f
  Complex det;    // kappa - A - B e^{-kappa r}
};

/// Solves w' = kappa w + forcing on [-r, 0] together with the boundary
/// condition (A - kappa) w(0) + B w(-r) = forcing(0) - f.
BoundarySolution solve_boundary(const chareq::LinearPart& lin, Complex kappa,
                                const ExpPoly& forcing, Complex f, double singular_tol,
                                ErrorKind kind);

/// Quadratic coefficients and profiles around the root eig.lambda of lin.
SecondOrder second_order_general(const ModelSpec& model, const chareq::LinearPart& lin,
                                 const spectral::EigenData& eig,
                                 const SingularityPolicy& policy);

SecondOrder second_order(const ModelSpec& model, const spectral::EigenData& eig);

struct ThirdOrderRhs {
  Complex f21, g21, g12_bar;
  Complex kappa;  // 2 lambda + conj(lambda)
  ExpPoly forcing{Interval{}};
  Complex R1, R2;
  Complex Delta;  // kappa - A - B e^{-kappa r}
};

ThirdOrderRhs third_order_rhs_general(const ModelSpec& model, const chareq::LinearPart& lin,
                                      const spectral::EigenData& eig, const SecondOrder& so);

ThirdOrderRhs third_order_rhs(const ModelSpec& model, const spectral::EigenData& eig,
                              const SecondOrder& so);

struct DegeneracyReport {
  Complex Delta;
  std::array<double, 4> residual{};  // identities (R1)..(R4), left minus right
  double BR1_minus_R2 = 0.0;
};

DegeneracyReport degeneracy_report(const ModelSpec& model, const spectral::EigenData& eig,
                                   const SecondOrder& so);

/// rho(s) = -2 s e^{i omega s} on [-r, 0].
ExpPoly rho(const spectral::EigenData& eig, double r);
/// rho~(z) = -2 z e^{-i omega z} on [0, r].
ExpPoly rho_tilde(const spectral::EigenData& eig, double r);

/// Limit value of w21(0) selected by the perturbation argument.
Complex w21_at_zero(const ModelSpec& model, const spectral::EigenData& eig,
                    const SecondOrder& so, Complex f21);

/// w21(-r) from the first row; the second row is re-checked against R2.
Complex w21_at_minus_r(Complex w21_0, const ThirdOrderRhs& rhs, const spectral::EigenData& eig,
                       const chareq::LinearPart& lin);

ExpPoly w21_profile(const ThirdOrderRhs& rhs, Complex w21_0);

struct ThirdOrder {
  Complex f21, g21, g12_bar;
  Complex R1, R2, Delta;
  double degeneracy_residual = 0.0;  // |B R1 - R2|
  DegeneracyReport degeneracy;
  Complex w21_0, w21_mr;
  ExpPoly w21{Interval{}};
  Complex psi1_pairing;  // <Psi1, w21>, diagnostic
};

ThirdOrder third_order(const ModelSpec& model, const spectral::EigenData& eig,
                       const SecondOrder& so);

}  // namespace cmdde::cmcore
