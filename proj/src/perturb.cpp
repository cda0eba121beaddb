#include "cmdde/perturb.hpp"

#include <cmath>
#include <sstream>

#include "cmdde/errors.hpp"

namespace cmdde::perturb {

using funcalg::ExpPoly;

const char* family_name(Family f) {
  switch (f) {
    case Family::ScaleB: return "scale-b";
    case Family::ScaleBSquared: return "scale-b-squared";
    case Family::ShiftA: return "shift-a";
  }
  return "unknown";
}

Family parse_family(const std::string& name) {
  if (name == "scale-b") return Family::ScaleB;
  if (name == "scale-b-squared") return Family::ScaleBSquared;
  if (name == "shift-a") return Family::ShiftA;
  throw Error(ErrorKind::InvalidArgument, "unknown perturbation family '" + name + "'");
}

namespace {

[[noreturn]] void family_error(const std::string& what) {
  throw Error(ErrorKind::InconsistentFamily, "make_perturbed: " + what);
}

}  // namespace

PerturbedProblem make_perturbed(const chareq::LinearPart& lin, double omega, double eps,
                                Family family) {
  lin.validate();
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw Error(ErrorKind::InvalidArgument, "make_perturbed: eps must be positive");
  }
  if (!(omega > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "make_perturbed: omega must be positive");
  }
  const double r = lin.r;
  PerturbedProblem p;
  p.eps = eps;
  p.family = family;
  p.r = r;

  if (family == Family::ScaleB || family == Family::ScaleBSquared) {
    // Imaginary part of the characteristic equation at eps = 0.
    const double identity = -lin.B * std::sin(omega * r) / omega;
    if (!(std::abs(identity - 1.0) <= 1e-9)) {
      std::ostringstream os;
      os << "-B sin(omega r)/omega = " << identity << ", expected 1 at a Hopf point";
      family_error(os.str());
    }
    const double factor = family == Family::ScaleB ? 1.0 + eps : (1.0 + eps) * (1.0 + eps);
    p.B_eps = lin.B * factor;
    p.omega_eps = omega;
    const double arg = -lin.B * std::sin(omega * r) * factor / omega;
    if (!(arg > 0.0)) family_error("logarithm argument is not positive");
    p.mu_eps = std::log(arg) / r;
    p.A_eps = p.mu_eps - p.B_eps * std::exp(-p.mu_eps * r) * std::cos(omega * r);
    p.lambda_eps = Complex{p.mu_eps, p.omega_eps};
  } else {
    p.A_eps = lin.A + eps;
    p.B_eps = lin.B;
    const chareq::LinearPart shifted{p.A_eps, p.B_eps, r};
    Complex root;
    try {
      root = chareq::find_root_near(shifted, Complex{0.0, omega});
    } catch (const Error& e) {
      family_error(std::string("root tracking failed: ") + e.what());
    }
    if (root.imag() < 0.0) root = std::conj(root);
    p.lambda_eps = root;
    p.mu_eps = root.real();
    p.omega_eps = root.imag();
  }

  if (!(p.mu_eps > 0.0)) {
    std::ostringstream os;
    os << "mu_eps = " << p.mu_eps << " is not positive";
    family_error(os.str());
  }
  if (!(p.omega_eps > 0.0)) family_error("omega_eps is not positive");
  p.char_residual = std::abs(chareq::char_value(p.lin(), p.lambda_eps));
  if (!(p.char_residual <= kCharResidualTol)) {
    std::ostringstream os;
    os << "characteristic residual " << p.char_residual << " exceeds " << kCharResidualTol;
    family_error(os.str());
  }
  return p;
}

PerturbedCoeffs perturbed_coeffs(const cmcore::ModelSpec& model, const PerturbedProblem& p) {
  const chareq::LinearPart lin = p.lin();
  PerturbedCoeffs pc;
  pc.eig = spectral::build_eigendata_at(lin, p.lambda_eps);
  pc.Psi_eps1_at_0 = pc.eig.Psi1_at_0;
  pc.so = cmcore::second_order_general(model, lin, pc.eig, cmcore::perturbed_policy());
  pc.third = cmcore::third_order_rhs_general(model, lin, pc.eig, pc.so);
  pc.Delta_eps = pc.third.Delta;
  return pc;
}

W21Pair solve_perturbed_w21(const PerturbedProblem& p, const PerturbedCoeffs& pc) {
  if (!(std::abs(pc.Delta_eps) > kIllConditionedTol)) {
    std::ostringstream os;
    os << "solve_perturbed_w21: |Delta_eps| = " << std::abs(pc.Delta_eps)
       << " too small for the direct solve";
    throw Error(ErrorKind::IllConditioned, os.str());
  }
  const auto& t = pc.third;
  W21Pair w;
  w.at_0 = (p.B_eps * t.R1 - t.R2) / pc.Delta_eps;
  w.at_mr = t.R1 + std::exp(-t.kappa * p.r) * w.at_0;
  return w;
}

HDecomposition h_decomposition(const PerturbedProblem& p, const PerturbedCoeffs& pc) {
  const double r = p.r;
  const double B = p.B_eps;
  const Complex lam = p.lambda_eps;
  const double mu = p.mu_eps;
  const Complex e1 = std::exp(-lam * r);
  const auto& so = pc.so;
  const auto& eig = pc.eig;
  const auto dom = spectral::state_domain(r);

  HDecomposition h;
  h.h2 = 2.0 + 2.0 * B * r * e1 * funcalg::expm1_ratio(Complex{-2.0 * mu * r, 0.0});

  // <Psi, rho_eps> with rho_eps(s) = -2 e^{lambda s} (e^{2 mu s} - 1)/(2 mu); rho_eps(0) = 0.
  const ExpPoly Psi_sum = eig.Psi1 + eig.Psi2;
  const ExpPoly kernel =
      funcalg::with_domain(funcalg::shift_argument(Psi_sum, r), dom) * eig.phi1;
  const Complex psi_rho =
      -2.0 * B * funcalg::integrate_expm1_weighted(kernel, Complex{2.0 * mu, 0.0}, -r, 0.0);

  // <rho~_eps, w> with rho~_eps(z) = -2 e^{-lambda z} (e^{-2 mu z} - 1)/(-2 mu); rho~(0) = 0.
  const Complex delta{-2.0 * mu, 0.0};
  const Complex shift_weight = std::exp(delta * r);
  const Complex g_r = r * funcalg::expm1_ratio(delta * r);
  auto rho_tilde_pairing = [&](const ExpPoly& w) {
    const ExpPoly q = ExpPoly::monomial(dom, e1, -lam) * w;
    return -2.0 * B *
           (shift_weight * funcalg::integrate_expm1_weighted(q, delta, -r, 0.0) +
            g_r * funcalg::integrate(q, -r, 0.0));
  };

  const Complex g11_bar = std::conj(so.g11);
  const Complex g02_bar = std::conj(so.g02);
  h.h1 = pc.third.f21 * psi_rho - 2.0 * so.g11 * rho_tilde_pairing(so.w20) -
         (so.g20 + 2.0 * g11_bar) * rho_tilde_pairing(so.w11) -
         g02_bar * rho_tilde_pairing(so.w02);
  return h;
}

W21Pair solve_perturbed_w21_h(const PerturbedProblem& p, const PerturbedCoeffs& pc,
                              const HDecomposition& h) {
  W21Pair w;
  w.at_0 = h.h1 / h.h2;
  w.at_mr = pc.third.R1 + std::exp(-pc.third.kappa * p.r) * w.at_0;
  return w;
}

std::vector<double> default_eps_grid() { return {1e-2, 5e-3, 2.5e-3, 1.25e-3}; }

Complex neville_at_zero(const std::vector<double>& x, const std::vector<Complex>& y) {
  if (x.size() != y.size() || x.empty()) {
    throw Error(ErrorKind::InvalidArgument, "neville_at_zero: size mismatch");
  }
  std::vector<Complex> p = y;
  const std::size_t n = x.size();
  for (std::size_t level = 1; level < n; ++level) {
    for (std::size_t i = 0; i + level < n; ++i) {
      const double xi = x[i];
      const double xj = x[i + level];
      p[i] = (xj * p[i] - xi * p[i + 1]) / (xj - xi);
    }
  }
  return p[0];
}

Extrapolation extrapolate_w21(const cmcore::ModelSpec& model, const spectral::EigenData& eig,
                              const std::vector<double>& eps_grid, Family family) {
  if (eps_grid.size() < 3) {
    throw Error(ErrorKind::InvalidArgument, "extrapolate_w21: need at least three grid points");
  }
  for (std::size_t i = 0; i < eps_grid.size(); ++i) {
    if (!(eps_grid[i] > 0.0) || !std::isfinite(eps_grid[i])) {
      throw Error(ErrorKind::InvalidArgument, "extrapolate_w21: grid entries must be positive");
    }
    if (i > 0 && !(eps_grid[i] < eps_grid[i - 1])) {
      throw Error(ErrorKind::InvalidArgument,
                  "extrapolate_w21: grid must be strictly decreasing");
    }
  }

  const chareq::LinearPart& lin = model.lin;
  Extrapolation ex;
  ex.family = family;
  {
    const cmcore::SecondOrder so = cmcore::second_order(model, eig);
    const cmcore::ThirdOrderRhs rhs = cmcore::third_order_rhs(model, eig, so);
    ex.closed_form = cmcore::w21_at_zero(model, eig, so, rhs.f21);
  }
  ex.h2_limit = Complex{2.0 - 2.0 * lin.r * lin.A, 2.0 * lin.r * eig.omega};

  std::vector<Complex> at_0;
  std::vector<Complex> at_mr;
  for (double eps : eps_grid) {
    const PerturbedProblem p = make_perturbed(lin, eig.omega, eps, family);
    const PerturbedCoeffs pc = perturbed_coeffs(model, p);
    const HDecomposition h = h_decomposition(p, pc);
    GridEstimate g;
    g.eps = eps;
    g.mu_eps = p.mu_eps;
    g.h1 = h.h1;
    g.h2 = h.h2;
    g.Delta_eps = pc.Delta_eps;
    g.via_h = std::abs(pc.Delta_eps) < kHFormSwitch;
    const W21Pair w = g.via_h ? solve_perturbed_w21_h(p, pc, h) : solve_perturbed_w21(p, pc);
    g.w21_0 = w.at_0;
    g.w21_mr = w.at_mr;
    at_0.push_back(w.at_0);
    at_mr.push_back(w.at_mr);
    ex.estimates.push_back(g);
  }

  ex.extrapolated = neville_at_zero(eps_grid, at_0);
  ex.extrapolated_mr = neville_at_zero(eps_grid, at_mr);
  ex.gap_to_closed_form = std::abs(ex.extrapolated - ex.closed_form);

  // Empirical order: least-squares slope of log|error| against log eps.
  std::vector<double> lx;
  std::vector<double> ly;
  for (const auto& g : ex.estimates) {
    const double err = std::abs(g.w21_0 - ex.closed_form);
    ex.error_constant = std::max(ex.error_constant, err / g.eps);
    if (err > 0.0) {
      lx.push_back(std::log(g.eps));
      ly.push_back(std::log(err));
    }
  }
  if (lx.size() == ex.estimates.size() && lx.size() >= 2) {
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      mx += lx[i];
      my += ly[i];
    }
    mx /= double(lx.size());
    my /= double(lx.size());
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      sxy += (lx[i] - mx) * (ly[i] - my);
      sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    ex.observed_order = sxy / sxx;
  }

  for (std::size_t i = 1; i < ex.estimates.size(); ++i) {
    const auto& prev = ex.estimates[i - 1];
    const auto& cur = ex.estimates[i];
    if (!(std::abs(cur.h2 - ex.h2_limit) < std::abs(prev.h2 - ex.h2_limit))) {
      ex.h2_monotone = false;
    }
    const double d_prev = std::abs(prev.w21_0 - ex.extrapolated);
    const double d_cur = std::abs(cur.w21_0 - ex.extrapolated);
    if (d_cur > d_prev + 1e-12 * (1.0 + std::abs(ex.extrapolated))) {
      ex.estimates_monotone = false;
    }
  }
  if (!ex.estimates_monotone) {
    ex.warnings.push_back("no-convergence: estimates do not approach the limit monotonically");
  }
  if (!ex.h2_monotone && ex.h2_limit != Complex{}) {
    ex.warnings.push_back("h2 does not approach its limit monotonically on the grid");
  }
  return ex;
}

}  // namespace cmdde::perturb
