#pragma once

// Bilinear pairing between adjoint functions on [0, r] and state functions on
// [-r, 0], the eigenfunctions of the critical pair and their biorthogonal
// normalization.

#include <utility>

#include "cmdde/chareq.hpp"
#include "cmdde/funcalg.hpp"

namespace cmdde::spectral {

using funcalg::ExpPoly;
using funcalg::Interval;

inline constexpr double kDegenerateETol = 1e-12;
inline constexpr double kBiorthoTol = 1e-12;

struct EigenData {
  double omega = 0.0;
  Complex lambda;  // critical root; i*omega at a Hopf point
  ExpPoly phi1{Interval{}};
  ExpPoly phi2{Interval{}};
  ExpPoly psi1{Interval{}};
  ExpPoly psi2{Interval{}};
  Complex e11;
  Complex e22;
  ExpPoly Psi1{Interval{}};
  ExpPoly Psi2{Interval{}};
  Complex Psi1_at_0;
};

inline Interval state_domain(double r) { return Interval{-r, 0.0}; }
inline Interval adjoint_domain(double r) { return Interval{0.0, r}; }

/// <psi, phi> = psi(0) phi(0) + B int_{-r}^0 psi(s + r) phi(s) ds.
Complex bilinear(const ExpPoly& psi, const ExpPoly& phi, const chareq::LinearPart& lin);

/// Eigendata at a verified Hopf point (lambda = i omega).
EigenData build_eigendata(const chareq::LinearPart& lin, const chareq::HopfPoint& hopf);

/// Eigendata for an arbitrary non-real characteristic root lambda of lin.
EigenData build_eigendata_at(const chareq::LinearPart& lin, Complex lambda);

/// Largest |<Psi_i, phi_j> - delta_ij| over the four pairings.
double biorthogonality_error(const EigenData& eig, const chareq::LinearPart& lin);

/// (<Psi1, phi>, <Psi2, phi>).
std::pair<Complex, Complex> project_coordinates(const ExpPoly& phi, const EigenData& eig,
                                                const chareq::LinearPart& lin);

}  // namespace cmdde::spectral
