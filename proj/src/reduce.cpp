#include "cmdde/reduce.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

#include "cmdde/errors.hpp"

namespace cmdde::reduce {

Complex ReducedEquation::coeff(int j, int k) const {
  const auto it = g.find({j, k});
  return it == g.end() ? Complex{} : it->second;
}

ReducedEquation assemble_reduced(const spectral::EigenData& eig, const cmcore::SecondOrder& so,
                                 const cmcore::ThirdOrderRhs& third) {
  ReducedEquation red;
  red.lambda1 = eig.lambda;
  red.g[{2, 0}] = so.g20;
  red.g[{1, 1}] = so.g11;
  red.g[{0, 2}] = so.g02;
  red.g[{2, 1}] = third.g21;
  return red;
}

double lyapunov_l1(const ReducedEquation& red) {
  const double w = red.lambda1.imag();
  if (!(w > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "lyapunov_l1: lambda1 must be i*omega with omega > 0");
  }
  const Complex g20 = red.coeff(2, 0);
  const Complex g11 = red.coeff(1, 1);
  const Complex g02 = red.coeff(0, 2);
  const Complex g21 = red.coeff(2, 1);
  const Complex c =
      kI / (2.0 * w) * (g20 * g11 - 2.0 * std::norm(g11) - std::norm(g02) / 3.0) + g21 / 2.0;
  return c.real();
}

chareq::HopfPoint resolve_hopf(const cmcore::ModelSpec& model, double tol) {
  model.validate();
  const auto& lin = model.lin;
  if (std::abs(lin.A + lin.B) <= cmcore::kResonanceTol) {
    std::ostringstream os;
    os << "A + B = " << lin.A + lin.B << ": lambda = 0 is a characteristic root";
    throw Error(ErrorKind::ZeroEigenvalue, os.str());
  }
  double omega = 0.0;
  if (model.omega_hint) {
    omega = *model.omega_hint;
  } else {
    const double d = lin.B * lin.B - lin.A * lin.A;
    if (!(d > 0.0)) {
      throw Error(ErrorKind::NoHopf, "no imaginary root: |B| <= |A|");
    }
    omega = std::sqrt(d);
  }
  return chareq::verify_hopf(lin, omega, tol);
}

SweepParam SweepParam::parse(const std::string& text) {
  SweepParam p;
  if (text == "B") {
    p.kind = Kind::B;
    return p;
  }
  const auto comma = text.find(',');
  if (comma == std::string::npos) {
    throw Error(ErrorKind::InvalidArgument, "sweep param must be \"j,k\" or \"B\", got '" + text + "'");
  }
  try {
    std::size_t used = 0;
    const std::string js = text.substr(0, comma);
    const std::string ks = text.substr(comma + 1);
    p.j = std::stoi(js, &used);
    if (used != js.size()) throw std::invalid_argument(js);
    p.k = std::stoi(ks, &used);
    if (used != ks.size()) throw std::invalid_argument(ks);
  } catch (const std::logic_error&) {
    throw Error(ErrorKind::InvalidArgument, "sweep param '" + text + "' is not \"j,k\"");
  }
  if (p.j < 0 || p.k < 0 || p.j + p.k < 2 || p.j + p.k > 3) {
    throw Error(ErrorKind::InvalidArgument, "sweep param '" + text + "' must have order 2 or 3");
  }
  return p;
}

std::string SweepParam::name() const {
  if (kind == Kind::B) return "B";
  return std::to_string(j) + "," + std::to_string(k);
}

double l1_at(const cmcore::ModelSpec& model_template, const SweepParam& param, double value,
             double hopf_tol) {
  cmcore::ModelSpec model = model_template;
  chareq::HopfPoint hopf;
  if (param.kind == SweepParam::Kind::B) {
    double guess = 1.0;
    if (model.omega_hint) {
      guess = *model.omega_hint;
    } else {
      const double d = model.lin.B * model.lin.B - model.lin.A * model.lin.A;
      if (d > 0.0) guess = std::sqrt(d);
    }
    const chareq::HopfParameter hp = chareq::find_hopf_parameter(value, model.lin.r, guess);
    model.lin.A = hp.A;
    model.lin.B = value;
    model.omega_hint = hp.hopf.omega;
    hopf = chareq::verify_hopf(model.lin, hp.hopf.omega, hopf_tol);
  } else {
    model.set_coeff(param.j, param.k, value);
    hopf = resolve_hopf(model, hopf_tol);
  }
  const spectral::EigenData eig = spectral::build_eigendata(model.lin, hopf);
  const cmcore::SecondOrder so = cmcore::second_order(model, eig);
  const cmcore::ThirdOrderRhs rhs = cmcore::third_order_rhs(model, eig, so);
  return lyapunov_l1(assemble_reduced(eig, so, rhs));
}

SweepResult sweep_l1_zeros(const cmcore::ModelSpec& model_template, const SweepParam& param,
                           double min, double max, int n_points, int jobs, double hopf_tol) {
  if (!std::isfinite(min) || !std::isfinite(max) || !(min < max)) {
    throw Error(ErrorKind::InvalidArgument, "sweep: range must be finite with min < max");
  }
  if (n_points < 2) throw Error(ErrorKind::InvalidArgument, "sweep: need at least two points");
  if (jobs < 1) throw Error(ErrorKind::InvalidArgument, "sweep: jobs must be at least 1");

  SweepResult res;
  res.param = param;
  res.grid.resize(n_points);
  res.l1.assign(n_points, std::numeric_limits<double>::quiet_NaN());
  std::vector<std::string> errors(n_points);
  for (int i = 0; i < n_points; ++i) {
    res.grid[i] = i == n_points - 1 ? max : min + (max - min) * double(i) / double(n_points - 1);
  }

  auto work = [&](int first) {
    for (int i = first; i < n_points; i += jobs) {
      try {
        res.l1[i] = l1_at(model_template, param, res.grid[i], hopf_tol);
      } catch (const Error& e) {
        errors[i] = e.name() + std::string(": ") + e.what();
      }
    }
  };
  if (jobs == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }
  for (int i = 0; i < n_points; ++i) {
    if (!errors[i].empty()) {
      std::ostringstream os;
      os.precision(17);
      os << res.grid[i] << ": " << errors[i];
      res.point_errors.push_back(os.str());
    }
  }

  // Values within the floor count as zero; an isolated zero grid point is a
  // root, a run of them (an identically vanishing l1) is not.
  auto is_zero = [&](int i) {
    return i >= 0 && i < n_points && std::isfinite(res.l1[i]) && std::abs(res.l1[i]) <= kL1ZeroFloor;
  };
  for (int i = 0; i < n_points; ++i) {
    if (is_zero(i) && !is_zero(i - 1) && !is_zero(i + 1)) res.roots.push_back(res.grid[i]);
    if (i + 1 >= n_points) break;
    const double f = res.l1[i];
    const double g = res.l1[i + 1];
    if (!std::isfinite(f) || !std::isfinite(g) || is_zero(i) || is_zero(i + 1)) continue;
    if ((f < 0.0) == (g < 0.0)) continue;
    double lo = res.grid[i];
    double hi = res.grid[i + 1];
    double flo = f;
    bool ok = true;
    while (hi - lo > kBisectionTol * std::max(1.0, std::abs(lo))) {
      const double mid = 0.5 * (lo + hi);
      double fm = 0.0;
      try {
        fm = l1_at(model_template, param, mid, hopf_tol);
      } catch (const Error&) {
        ok = false;
        break;
      }
      if (fm == 0.0) {
        lo = hi = mid;
        break;
      }
      if ((fm < 0.0) == (flo < 0.0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
    }
    if (ok) res.roots.push_back(0.5 * (lo + hi));
  }
  std::sort(res.roots.begin(), res.roots.end());
  return res;
}

AnalysisReport analyze(const cmcore::ModelSpec& model, const AnalyzeOptions& opts) {
  using clock = std::chrono::steady_clock;
  auto seconds_since = [](clock::time_point t0) {
    return std::chrono::duration<double>(clock::now() - t0).count();
  };
  AnalysisReport rep;
  rep.model = model;

  const auto start = clock::now();
  auto t = start;
  rep.hopf = resolve_hopf(model, opts.hopf_tol);
  rep.audit = chareq::audit_spectrum(model.lin, rep.hopf.omega);
  if (!rep.audit.ok) {
    std::ostringstream os;
    os << "spectrum audit found " << rep.audit.count
       << " roots in the closed right half of the audit rectangle (expected 2)";
    rep.warnings.push_back(os.str());
  }
  if (!rep.hopf.simple) rep.warnings.push_back("critical root is not simple");
  rep.timing_seconds["hopf"] = seconds_since(t);

  t = clock::now();
  rep.eig = spectral::build_eigendata(model.lin, rep.hopf);
  rep.biorthogonality_error = spectral::biorthogonality_error(rep.eig, model.lin);
  rep.so = cmcore::second_order(model, rep.eig);
  const std::array<const funcalg::ExpPoly*, 3> ws = {&rep.so.w20, &rep.so.w11, &rep.so.w02};
  for (int i = 0; i < 3; ++i) {
    rep.psi1_pairings[i] = spectral::bilinear(rep.eig.psi1, *ws[i], model.lin);
    rep.psi2_pairings[i] = spectral::bilinear(rep.eig.psi2, *ws[i], model.lin);
  }
  rep.third = cmcore::third_order(model, rep.eig, rep.so);
  const cmcore::ThirdOrderRhs rhs = cmcore::third_order_rhs(model, rep.eig, rep.so);
  rep.reduced = assemble_reduced(rep.eig, rep.so, rhs);
  rep.l1 = lyapunov_l1(rep.reduced);
  rep.timing_seconds["closed_form"] = seconds_since(t);

  if (opts.run_oracle) {
    t = clock::now();
    rep.oracle = perturb::extrapolate_w21(model, rep.eig, opts.eps_grid, opts.family);
    for (const auto& w : rep.oracle->warnings) rep.warnings.push_back(w);
    if (!(rep.oracle->gap_to_closed_form <= 1e-6 * (1.0 + std::abs(rep.third.w21_0)))) {
      std::ostringstream os;
      os << "perturbation oracle differs from the closed form by " << rep.oracle->gap_to_closed_form;
      rep.warnings.push_back(os.str());
    }
    rep.timing_seconds["oracle"] = seconds_since(t);
  }
  rep.timing_seconds["total"] = seconds_since(start);
  return rep;
}

}  // namespace cmdde::reduce
