#pragma once

// Adaptive Gauss-Kronrod (7/15) for complex-valued integrands on a real
// parameter interval. Internal to the library.

#include <array>
#include <cmath>
#include <complex>

#include "cmdde/errors.hpp"

namespace cmdde::detail {

struct GaussKronrod15 {
  static constexpr std::array<double, 8> xgk = {
      0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
      0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
      0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
      0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
  static constexpr std::array<double, 8> wgk = {
      0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
      0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
      0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
      0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
  static constexpr std::array<double, 4> wg = {
      0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
      0.381830050505118944950369775488975, 0.417959183673469387755102040816327};
};

template <class F>
std::complex<double> gk15(F& f, double a, double b, double& err, double& abs_int) {
  using GK = GaussKronrod15;
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const std::complex<double> fc = f(c);
  std::complex<double> kron = fc * GK::wgk[7];
  std::complex<double> gauss = fc * GK::wg[3];
  double mass = std::abs(fc) * GK::wgk[7];
  for (int j = 0; j < 7; ++j) {
    const std::complex<double> f1 = f(c - h * GK::xgk[j]);
    const std::complex<double> f2 = f(c + h * GK::xgk[j]);
    kron += GK::wgk[j] * (f1 + f2);
    mass += GK::wgk[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) gauss += GK::wg[j / 2] * (f1 + f2);
  }
  err = std::abs((kron - gauss) * h);
  abs_int = mass * std::abs(h);
  return kron * h;
}

// Accepts a panel when its error estimate is below the absolute tolerance or
// below rel_floor times the integral of |f| over the panel; the floor stops
// refinement once the integrand's own evaluation noise dominates.
template <class F>
std::complex<double> adaptive_gk(F& f, double a, double b, double tol, int depth,
                                 int max_depth, double rel_floor = 1e-13) {
  double err = 0.0;
  double abs_int = 0.0;
  const std::complex<double> whole = gk15(f, a, b, err, abs_int);
  if (err <= tol || err <= rel_floor * abs_int) return whole;
  if (depth >= max_depth) {
    throw Error(ErrorKind::QuadratureNonConvergence,
                "adaptive quadrature: subdivision limit reached");
  }
  const double m = 0.5 * (a + b);
  return adaptive_gk(f, a, m, 0.5 * tol, depth + 1, max_depth, rel_floor) +
         adaptive_gk(f, m, b, 0.5 * tol, depth + 1, max_depth, rel_floor);
}

}  // namespace cmdde::detail
