#include "cmdde/chareq.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "cmdde/errors.hpp"
#include "quadrature.hpp"

namespace cmdde::chareq {

void LinearPart::validate() const {
  if (!std::isfinite(A) || !std::isfinite(B) || !std::isfinite(r)) {
    throw Error(ErrorKind::InvalidArgument, "linear part: non-finite coefficient");
  }
  if (!(r > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "linear part: delay r must be positive");
  }
}

Complex char_value(const LinearPart& lin, Complex lambda) {
  return lambda - lin.A - lin.B * std::exp(-lambda * lin.r);
}

Complex char_derivative(const LinearPart& lin, Complex lambda) {
  return 1.0 + lin.B * lin.r * std::exp(-lambda * lin.r);
}

HopfParameter find_hopf_parameter(double B, double r, double omega_guess) {
  if (!(omega_guess > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "find_hopf_parameter: omega guess must be positive");
  }
  LinearPart{0.0, B, r}.validate();
  if (std::abs(B) < 1e-300) {
    throw Error(ErrorKind::NoHopf, "find_hopf_parameter: B = 0 leaves only the real root A");
  }

  // Unknowns (A, omega); F(i omega) = (-A - B cos(omega r)) + i (omega + B sin(omega r)).
  auto residual = [&](double A, double w) {
    return std::hypot(-A - B * std::cos(w * r), w + B * std::sin(w * r));
  };

  double w = omega_guess;
  double A = -B * std::cos(w * r);
  double res = residual(A, w);
  const double target = 1e-14 * (1.0 + std::abs(B));
  int it = 0;
  for (; it < 100 && res > target; ++it) {
    const double re = -A - B * std::cos(w * r);
    const double im = w + B * std::sin(w * r);
    const double jw = 1.0 + B * r * std::cos(w * r);
    if (std::abs(jw) < 1e-300) break;
    const double dw = -im / jw;
    const double dA = re + B * r * std::sin(w * r) * dw;

    double step = 1.0;
    double A_new = A + dA;
    double w_new = w + dw;
    double res_new = residual(A_new, w_new);
    for (int k = 0; k < 40 && res_new > res; ++k) {
      step *= 0.5;
      A_new = A + step * dA;
      w_new = w + step * dw;
      res_new = residual(A_new, w_new);
    }
    if (res_new > res) break;
    A = A_new;
    w = w_new;
    res = res_new;
  }
  if (!(res <= 1e-12)) {
    std::ostringstream os;
    os << "find_hopf_parameter: Newton did not converge (residual " << res << ")";
    throw Error(ErrorKind::NoHopf, os.str());
  }
  if (!(w > 0.0)) {
    std::ostringstream os;
    os << "find_hopf_parameter: converged to non-positive frequency " << w;
    throw Error(ErrorKind::InvalidRoot, os.str());
  }
  HopfParameter out;
  out.A = A;
  out.iterations = it;
  out.hopf.omega = w;
  out.hopf.residual = res;
  out.hopf.simple = std::abs(char_derivative({A, B, r}, Complex{0.0, w})) > kSimplicityTol;
  return out;
}

HopfPoint verify_hopf(const LinearPart& lin, double omega, double tol) {
  lin.validate();
  if (!(omega > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "verify_hopf: omega must be positive");
  }
  HopfPoint hp;
  hp.omega = omega;
  hp.residual = std::abs(char_value(lin, Complex{0.0, omega}));
  hp.simple = std::abs(char_derivative(lin, Complex{0.0, omega})) > kSimplicityTol;
  if (!(hp.residual <= tol)) {
    std::ostringstream os;
    os << "verify_hopf: |F(i*" << omega << ")| = " << hp.residual << " exceeds " << tol;
    throw Error(ErrorKind::NotHopfPoint, os.str());
  }
  return hp;
}

Complex find_root_near(const LinearPart& lin, Complex guess, int max_iter) {
  lin.validate();
  Complex z = guess;
  double res = std::abs(char_value(lin, z));
  for (int it = 0; it < max_iter; ++it) {
    if (res <= 1e-15 * (1.0 + std::abs(z))) return z;
    const Complex d = -char_value(lin, z) / char_derivative(lin, z);
    double step = 1.0;
    Complex z_new = z + d;
    double res_new = std::abs(char_value(lin, z_new));
    for (int k = 0; k < 40 && res_new > res; ++k) {
      step *= 0.5;
      z_new = z + step * d;
      res_new = std::abs(char_value(lin, z_new));
    }
    if (res_new >= res) break;
    z = z_new;
    res = res_new;
  }
  if (res <= 1e-12 * (1.0 + std::abs(z))) return z;
  throw Error(ErrorKind::InvalidRoot, "find_root_near: Newton did not converge");
}

int count_roots_rect(const LinearPart& lin, const Rect& rect) {
  lin.validate();
  if (!(rect.re_min < rect.re_max) || !(rect.im_min < rect.im_max)) {
    throw Error(ErrorKind::InvalidArgument, "count_roots_rect: empty rectangle");
  }
  const std::array<Complex, 5> corners = {
      Complex{rect.re_min, rect.im_min}, Complex{rect.re_max, rect.im_min},
      Complex{rect.re_max, rect.im_max}, Complex{rect.re_min, rect.im_max},
      Complex{rect.re_min, rect.im_min}};

  // Screen each edge: wherever the Newton distance |F/F'| is below the
  // sample spacing, polish the nearby root and reject it if it lies on the
  // edge. Quadrature alone would return a rounded principal value.
  constexpr int kScreenSamples = 400;
  for (int e = 0; e < 4; ++e) {
    const Complex z0 = corners[e];
    const Complex dz = corners[e + 1] - corners[e];
    const double spacing = std::abs(dz) / kScreenSamples;
    for (int k = 0; k <= kScreenSamples; ++k) {
      const Complex z = z0 + dz * (double(k) / kScreenSamples);
      const Complex fp = char_derivative(lin, z);
      if (!(std::abs(char_value(lin, z)) < 2.0 * spacing * std::abs(fp))) continue;
      Complex root;
      try {
        root = find_root_near(lin, z, 60);
      } catch (const Error&) {
        continue;
      }
      const double t = std::clamp(((root - z0) / dz).real(), 0.0, 1.0);
      if (std::abs(root - (z0 + t * dz)) <= 1e-9 * (1.0 + std::abs(root))) {
        std::ostringstream os;
        os << "count_roots_rect: characteristic root " << root << " lies on the contour";
        throw Error(ErrorKind::RootOnContour, os.str());
      }
    }
  }

  Complex total{};
  for (int e = 0; e < 4; ++e) {
    const Complex z0 = corners[e];
    const Complex dz = corners[e + 1] - corners[e];
    auto integrand = [&](double t) {
      const Complex z = z0 + t * dz;
      const Complex f = char_value(lin, z);
      const Complex fp = char_derivative(lin, z);
      // Newton distance |F/F'| estimates how close the nearest root is.
      if (std::abs(f) <= 1e-8 * std::max(std::abs(fp), 1e-300)) {
        std::ostringstream os;
        os << "count_roots_rect: characteristic root within 1e-8 of the contour near " << z;
        throw Error(ErrorKind::RootOnContour, os.str());
      }
      return fp / f * dz;
    };
    // Only the nearest integer matters, so panels are accepted at 1e-8 of
    // their absolute mass: F loses relative accuracy next to its roots.
    total += detail::adaptive_gk(integrand, 0.0, 1.0, 1e-9, 0, 60, 1e-8);
  }
  const Complex winding = total / (2.0 * std::numbers::pi * kI);
  const double n = std::round(winding.real());
  const double gap = std::abs(winding - Complex{n, 0.0});
  if (!(gap <= 0.25)) {
    std::ostringstream os;
    os << "count_roots_rect: winding number " << winding << " is not near an integer";
    throw Error(ErrorKind::QuadratureNonConvergence, os.str());
  }
  return static_cast<int>(n);
}

Rect default_audit_rect(const LinearPart& lin, double omega) {
  const double span = 2.0 * std::numbers::pi / lin.r * 6.0;
  return Rect{-1e-6, 10.0 * omega, -span, span};
}

SpectrumAudit audit_spectrum(const LinearPart& lin, double omega) {
  SpectrumAudit audit;
  audit.rect = default_audit_rect(lin, omega);
  try {
    audit.count = count_roots_rect(lin, audit.rect);
  } catch (const Error&) {
    audit.count = -1;
  }
  audit.ok = audit.count == audit.expected;
  return audit;
}

}  // namespace cmdde::chareq
