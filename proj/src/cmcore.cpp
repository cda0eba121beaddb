#include "cmdde/cmcore.hpp"

#include <cmath>
#include <sstream>

#include "cmdde/errors.hpp"

namespace cmdde::cmcore {

using spectral::bilinear;
using spectral::EigenData;

double ModelSpec::coeff(int j, int k) const {
  const auto it = C.find({j, k});
  return it == C.end() ? 0.0 : it->second;
}

void ModelSpec::set_coeff(int j, int k, double value) {
  if (j < 0 || k < 0 || j + k < 2 || j + k > 3) {
    std::ostringstream os;
    os << "model: coefficient C(" << j << "," << k << ") must have order 2 or 3";
    throw Error(ErrorKind::InvalidArgument, os.str());
  }
  if (!std::isfinite(value)) {
    throw Error(ErrorKind::InvalidArgument, "model: non-finite nonlinear coefficient");
  }
  if (value == 0.0) {
    C.erase({j, k});
  } else {
    C[{j, k}] = value;
  }
}

bool ModelSpec::is_linear() const {
  for (const auto& [key, value] : C) {
    if (value != 0.0) return false;
  }
  return true;
}

void ModelSpec::validate() const {
  lin.validate();
  for (const auto& [key, value] : C) {
    const auto [j, k] = key;
    if (j < 0 || k < 0 || j + k < 2 || j + k > 3) {
      std::ostringstream os;
      os << "model: coefficient C(" << j << "," << k << ") must have order 2 or 3";
      throw Error(ErrorKind::InvalidArgument, os.str());
    }
    if (!std::isfinite(value)) {
      throw Error(ErrorKind::InvalidArgument, "model: non-finite nonlinear coefficient");
    }
  }
  if (omega_hint && !(*omega_hint > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "model: omega_hint must be positive");
  }
}

SingularityPolicy perturbed_policy() {
  return SingularityPolicy{1e-12, ErrorKind::PerturbedResonance, 1e-12,
                           ErrorKind::PerturbedResonance};
}

BoundarySolution solve_boundary(const chareq::LinearPart& lin, Complex kappa,
                                const ExpPoly& forcing, Complex f, double singular_tol,
                                ErrorKind kind) {
  const double r = lin.r;
  BoundarySolution out;
  out.rhs1 = funcalg::linear_ode_particular_at(kappa, forcing, -r);
  out.rhs2 = forcing(0.0) - f;
  out.det = chareq::char_value(lin, kappa);
  if (std::abs(out.det) <= singular_tol) {
    std::ostringstream os;
    os << "boundary system for rate " << kappa << " is singular (|det| = "
       << std::abs(out.det) << ")";
    throw Error(kind, os.str());
  }
  out.at_0 = (lin.B * out.rhs1 - out.rhs2) / out.det;
  out.at_mr = out.rhs1 + std::exp(-kappa * r) * out.at_0;
  out.profile = funcalg::solve_linear_ode(kappa, forcing, out.at_0);
  return out;
}

SecondOrder second_order_general(const ModelSpec& model, const chareq::LinearPart& lin,
                                 const EigenData& eig, const SingularityPolicy& policy) {
  const double r = lin.r;
  const Complex lam = eig.lambda;
  const Complex lam_bar = std::conj(lam);
  const Complex e1 = std::exp(-lam * r);
  const double c20 = model.coeff(2, 0);
  const double c11 = model.coeff(1, 1);
  const double c02 = model.coeff(0, 2);

  SecondOrder so;
  so.f20 = c20 + 2.0 * c11 * e1 + c02 * e1 * e1;
  so.f11 = c20 + c11 * (e1 + std::conj(e1)) + c02 * std::exp(-2.0 * lam.real() * r);
  so.f02 = std::conj(so.f20);
  const Complex psi0 = eig.Psi1_at_0;
  so.g20 = psi0 * so.f20;
  so.g11 = psi0 * so.f11;
  so.g02 = psi0 * so.f02;

  const Interval dom = spectral::state_domain(r);
  ExpPoly forcing20 = ExpPoly::monomial(dom, so.g20, lam);
  forcing20.add_term(funcalg::ExpMonomial(std::conj(so.g02), lam_bar));
  const BoundarySolution b20 =
      solve_boundary(lin, 2.0 * lam, forcing20, so.f20, policy.tol20, policy.kind20);

  ExpPoly forcing11 = ExpPoly::monomial(dom, so.g11, lam);
  forcing11.add_term(funcalg::ExpMonomial(std::conj(so.g11), lam_bar));
  const BoundarySolution b11 =
      solve_boundary(lin, lam + lam_bar, forcing11, so.f11, policy.tol11, policy.kind11);

  so.w20 = b20.profile;
  so.w20_0 = b20.at_0;
  so.w20_mr = b20.at_mr;
  so.w11 = b11.profile;
  so.w11_0 = b11.at_0;
  so.w11_mr = b11.at_mr;
  so.w02 = funcalg::conjugate(so.w20);
  so.w02_0 = std::conj(so.w20_0);
  so.w02_mr = std::conj(so.w20_mr);
  return so;
}

SecondOrder second_order(const ModelSpec& model, const EigenData& eig) {
  return second_order_general(model, model.lin, eig, SingularityPolicy{});
}

ThirdOrderRhs third_order_rhs_general(const ModelSpec& model, const chareq::LinearPart& lin,
                                      const EigenData& eig, const SecondOrder& so) {
  const double r = lin.r;
  const Complex lam = eig.lambda;
  const Complex lam_bar = std::conj(lam);
  const Complex e1 = std::exp(-lam * r);
  const Complex e1b = std::conj(e1);
  const double e2mu = std::exp(-2.0 * lam.real() * r);
  const Complex e2 = e1 * e1;

  const double c20 = model.coeff(2, 0);
  const double c11 = model.coeff(1, 1);
  const double c02 = model.coeff(0, 2);
  const double c30 = model.coeff(3, 0);
  const double c21 = model.coeff(2, 1);
  const double c12 = model.coeff(1, 2);
  const double c03 = model.coeff(0, 3);

  ThirdOrderRhs out;
  out.f21 = c20 * (2.0 * so.w11_0 + so.w20_0) +
            c11 * (so.w20_0 * e1b + 2.0 * so.w11_0 * e1 + so.w20_mr + 2.0 * so.w11_mr) +
            c02 * (2.0 * so.w11_mr * e1 + so.w20_mr * e1b) + c30 + c21 * (2.0 * e1 + e1b) +
            c12 * (2.0 * e2mu + e2) + c03 * e1b * e2;
  out.g21 = eig.Psi1_at_0 * out.f21;
  out.g12_bar = std::conj(eig.Psi1_at_0) * out.f21;
  out.kappa = 2.0 * lam + lam_bar;

  const Complex g11_bar = std::conj(so.g11);
  const Complex g02_bar = std::conj(so.g02);
  ExpPoly forcing = ExpPoly::monomial(spectral::state_domain(r), out.g21, lam);
  forcing.add_term(funcalg::ExpMonomial(out.g12_bar, lam_bar));
  forcing = forcing + funcalg::scale(so.w20, 2.0 * so.g11) +
            funcalg::scale(so.w11, so.g20 + 2.0 * g11_bar) + funcalg::scale(so.w02, g02_bar);
  out.forcing = forcing;

  out.R1 = funcalg::linear_ode_particular_at(out.kappa, forcing, -r);
  out.R2 = forcing(0.0) - out.f21;
  out.Delta = chareq::char_value(lin, out.kappa);
  return out;
}

ThirdOrderRhs third_order_rhs(const ModelSpec& model, const EigenData& eig,
                              const SecondOrder& so) {
  return third_order_rhs_general(model, model.lin, eig, so);
}

DegeneracyReport degeneracy_report(const ModelSpec& model, const EigenData& eig,
                                   const SecondOrder& so) {
  const chareq::LinearPart& lin = model.lin;
  const double r = lin.r;
  const double w = eig.omega;
  const double B = lin.B;
  const Complex e = std::exp(Complex{0.0, -w * r});
  const ThirdOrderRhs rhs = third_order_rhs(model, eig, so);

  DegeneracyReport rep;
  rep.Delta = rhs.Delta;

  const Complex lhs1 =
      B * (-rhs.g21 * r * e + kI / (2.0 * w) * rhs.g12_bar * (std::conj(e) - e));
  rep.residual[0] = std::abs(lhs1 - (rhs.g21 + rhs.g12_bar - rhs.f21));

  const ExpPoly weight = ExpPoly::monomial(spectral::state_domain(r), 1.0, Complex{0.0, -w});
  auto pairing_residual = [&](Complex coeff, const ExpPoly& wjk, Complex wjk_0) {
    const Complex integral = funcalg::integrate(wjk * weight, -r, 0.0);
    return std::abs(-B * coeff * e * integral - coeff * wjk_0);
  };
  rep.residual[1] = pairing_residual(2.0 * so.g11, so.w20, so.w20_0);
  rep.residual[2] = pairing_residual(so.g20 + 2.0 * std::conj(so.g11), so.w11, so.w11_0);
  rep.residual[3] = pairing_residual(std::conj(so.g02), so.w02, so.w02_0);
  rep.BR1_minus_R2 = std::abs(B * rhs.R1 - rhs.R2);
  return rep;
}

ExpPoly rho(const EigenData& eig, double r) {
  return ExpPoly::monomial(spectral::state_domain(r), -2.0, Complex{0.0, eig.omega}, 1);
}

ExpPoly rho_tilde(const EigenData& eig, double r) {
  return ExpPoly::monomial(spectral::adjoint_domain(r), -2.0, Complex{0.0, -eig.omega}, 1);
}

Complex w21_at_zero(const ModelSpec& model, const EigenData& eig, const SecondOrder& so,
                    Complex f21) {
  const chareq::LinearPart& lin = model.lin;
  const double r = lin.r;
  const Complex den{2.0 - 2.0 * r * lin.A, 2.0 * r * eig.omega};
  if (std::abs(den) <= kDenominatorTol) {
    std::ostringstream os;
    os << "w21_at_zero: denominator 2r*omega*i - 2rA + 2 = " << den << " is degenerate";
    throw Error(ErrorKind::DegenerateDenominator, os.str());
  }
  const ExpPoly rh = rho(eig, r);
  const ExpPoly rt = rho_tilde(eig, r);
  const Complex num = f21 * bilinear(eig.Psi1 + eig.Psi2, rh, lin) -
                      2.0 * so.g11 * bilinear(rt, so.w20, lin) -
                      (so.g20 + 2.0 * std::conj(so.g11)) * bilinear(rt, so.w11, lin) -
                      std::conj(so.g02) * bilinear(rt, so.w02, lin);
  return num / den;
}

Complex w21_at_minus_r(Complex w21_0, const ThirdOrderRhs& rhs, const EigenData& eig,
                       const chareq::LinearPart& lin) {
  (void)eig;
  const Complex w21_mr = std::exp(-rhs.kappa * lin.r) * w21_0 + rhs.R1;
  const Complex row2 = (lin.A - rhs.kappa) * w21_0 + lin.B * w21_mr;
  const double residual = std::abs(row2 - rhs.R2);
  if (!(residual <= kConsistencyTol * (1.0 + std::abs(rhs.R2)))) {
    std::ostringstream os;
    os << "w21_at_minus_r: second boundary row violated by " << residual;
    throw Error(ErrorKind::Inconsistency, os.str());
  }
  return w21_mr;
}

ExpPoly w21_profile(const ThirdOrderRhs& rhs, Complex w21_0) {
  return funcalg::solve_linear_ode(rhs.kappa, rhs.forcing, w21_0);
}

ThirdOrder third_order(const ModelSpec& model, const EigenData& eig, const SecondOrder& so) {
  const ThirdOrderRhs rhs = third_order_rhs(model, eig, so);
  ThirdOrder t;
  t.f21 = rhs.f21;
  t.g21 = rhs.g21;
  t.g12_bar = rhs.g12_bar;
  t.R1 = rhs.R1;
  t.R2 = rhs.R2;
  t.Delta = rhs.Delta;
  t.degeneracy = degeneracy_report(model, eig, so);
  t.degeneracy_residual = t.degeneracy.BR1_minus_R2;
  t.w21_0 = w21_at_zero(model, eig, so, rhs.f21);
  t.w21_mr = w21_at_minus_r(t.w21_0, rhs, eig, model.lin);
  t.w21 = w21_profile(rhs, t.w21_0);
  t.psi1_pairing = bilinear(eig.Psi1, t.w21, model.lin);
  return t;
}

}  // namespace cmdde::cmcore
