#include "cmdde/spectral.hpp"

#include <algorithm>
#include <sstream>

#include "cmdde/errors.hpp"

namespace cmdde::spectral {

using funcalg::shift_argument;

namespace {

void check_domain(const ExpPoly& p, const Interval& expected, const char* what) {
  if (!p.domain().same_as(expected)) {
    std::ostringstream os;
    os << "bilinear: " << what << " must live on [" << expected.lo << ", " << expected.hi
       << "], got [" << p.domain().lo << ", " << p.domain().hi << "]";
    throw Error(ErrorKind::Domain, os.str());
  }
}

}  // namespace

Complex bilinear(const ExpPoly& psi, const ExpPoly& phi, const chareq::LinearPart& lin) {
  lin.validate();
  check_domain(psi, adjoint_domain(lin.r), "adjoint argument");
  check_domain(phi, state_domain(lin.r), "state argument");
  const ExpPoly shifted = funcalg::with_domain(shift_argument(psi, lin.r), state_domain(lin.r));
  return psi(0.0) * phi(0.0) + lin.B * funcalg::integrate(shifted * phi, -lin.r, 0.0);
}

EigenData build_eigendata_at(const chareq::LinearPart& lin, Complex lambda) {
  lin.validate();
  const double r = lin.r;
  EigenData eig;
  eig.omega = lambda.imag();
  eig.lambda = lambda;
  eig.phi1 = ExpPoly::monomial(state_domain(r), 1.0, lambda);
  eig.phi2 = funcalg::conjugate(eig.phi1);
  eig.psi1 = ExpPoly::monomial(adjoint_domain(r), 1.0, -lambda);
  eig.psi2 = funcalg::conjugate(eig.psi1);

  eig.e11 = bilinear(eig.psi1, eig.phi1, lin);
  eig.e22 = bilinear(eig.psi2, eig.phi2, lin);
  if (std::abs(eig.e11 * eig.e22) < kDegenerateETol) {
    std::ostringstream os;
    os << "build_eigendata: |e11 e22| = " << std::abs(eig.e11 * eig.e22)
       << " too small to normalize";
    throw Error(ErrorKind::DegenerateE, os.str());
  }
  // The off-diagonal entries vanish for a non-real root, so E is diagonal.
  eig.Psi1_at_0 = 1.0 / eig.e11;
  eig.Psi1 = funcalg::scale(eig.psi1, eig.Psi1_at_0);
  eig.Psi2 = funcalg::conjugate(eig.Psi1);

  const double err = biorthogonality_error(eig, lin);
  if (!(err <= 1e3 * kBiorthoTol * (1.0 + std::abs(lambda) * r))) {
    std::ostringstream os;
    os << "build_eigendata: biorthogonality violated by " << err;
    throw Error(ErrorKind::DegenerateE, os.str());
  }
  return eig;
}

EigenData build_eigendata(const chareq::LinearPart& lin, const chareq::HopfPoint& hopf) {
  if (!(hopf.omega > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "build_eigendata: omega must be positive");
  }
  return build_eigendata_at(lin, Complex{0.0, hopf.omega});
}

double biorthogonality_error(const EigenData& eig, const chareq::LinearPart& lin) {
  const Complex m11 = bilinear(eig.Psi1, eig.phi1, lin);
  const Complex m12 = bilinear(eig.Psi1, eig.phi2, lin);
  const Complex m21 = bilinear(eig.Psi2, eig.phi1, lin);
  const Complex m22 = bilinear(eig.Psi2, eig.phi2, lin);
  return std::max({std::abs(m11 - 1.0), std::abs(m12), std::abs(m21), std::abs(m22 - 1.0)});
}

std::pair<Complex, Complex> project_coordinates(const ExpPoly& phi, const EigenData& eig,
                                                const chareq::LinearPart& lin) {
  return {bilinear(eig.Psi1, phi, lin), bilinear(eig.Psi2, phi, lin)};
}

}  // namespace cmdde::spectral
