#include "cmdde/ddesim.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "cmdde/errors.hpp"

namespace cmdde::ddesim {

void SimConfig::validate(double r) const {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw Error(ErrorKind::InvalidArgument, "simulate: dt must be positive");
  }
  if (!(dt <= r / 20.0 * (1.0 + 1e-12))) {
    std::ostringstream os;
    os << "simulate: dt = " << dt << " exceeds r/20 = " << r / 20.0;
    throw Error(ErrorKind::InvalidArgument, os.str());
  }
  if (!(horizon >= 10.0 * r * (1.0 - 1e-12)) || !std::isfinite(horizon)) {
    std::ostringstream os;
    os << "simulate: horizon = " << horizon << " is shorter than 10 r = " << 10.0 * r;
    throw Error(ErrorKind::InvalidArgument, os.str());
  }
  if (!std::isfinite(history_constant)) {
    throw Error(ErrorKind::InvalidArgument, "simulate: non-finite history");
  }
  if (history && !history->domain().same_as(funcalg::Interval{-r, 0.0})) {
    throw Error(ErrorKind::InvalidArgument, "simulate: history must be defined on [-r, 0]");
  }
}

double SimConfig::history_at(double s) const {
  return history ? (*history)(s).real() : history_constant;
}

namespace {

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

struct Rhs {
  double A, B;
  std::vector<std::pair<std::pair<int, int>, double>> terms;  // C_jk / (j! k!)

  explicit Rhs(const cmcore::ModelSpec& m) : A(m.lin.A), B(m.lin.B) {
    for (const auto& [key, c] : m.C) {
      terms.push_back({key, c / (factorial(key.first) * factorial(key.second))});
    }
  }

  double operator()(double x, double y) const {
    double v = A * x + B * y;
    for (const auto& [key, c] : terms) {
      v += c * std::pow(x, key.first) * std::pow(y, key.second);
    }
    return v;
  }
};

[[noreturn]] void diverge(double t) {
  std::ostringstream os;
  os << "solution left |x| <= " << kDivergenceBound << " at t = " << t;
  throw DivergenceError(t, os.str());
}

}  // namespace

Trajectory integrate_dde(const cmcore::ModelSpec& model, const SimConfig& cfg) {
  model.validate();
  const double r = model.lin.r;
  cfg.validate(r);
  const int N = std::max(1, static_cast<int>(std::ceil(r / cfg.dt - 1e-9)));
  const double h = r / N;
  const long steps = static_cast<long>(std::ceil(cfg.horizon / h - 1e-9));
  const Rhs rhs(model);

  Trajectory traj;
  double hist_max = 0.0;
  for (int i = 0; i <= 4 * N; ++i) {
    hist_max = std::max(hist_max, std::abs(cfg.history_at(-r + r * i / (4.0 * N))));
  }
  if (hist_max > kLargeHistory) {
    std::ostringstream os;
    os << "history amplitude " << hist_max
       << " exceeds 0.5; the cubic truncation of the nonlinearity may be meaningless";
    traj.warnings.push_back(os.str());
  }

  std::vector<double> x(steps + 1);
  std::vector<double> f(steps + 1);
  x[0] = cfg.history_at(0.0);

  // Delayed value x(t_n + c h - r).
  auto delayed = [&](long n, double c) {
    const long m = n - N;
    if (m < 0) return cfg.history_at(std::min(0.0, (double(m) + c) * h));
    if (c == 0.0) return x[m];
    const double c2 = c * c;
    const double c3 = c2 * c;
    const double h00 = 2 * c3 - 3 * c2 + 1;
    const double h10 = c3 - 2 * c2 + c;
    const double h01 = -2 * c3 + 3 * c2;
    const double h11 = c3 - c2;
    return h00 * x[m] + h10 * h * f[m] + h01 * x[m + 1] + h11 * h * f[m + 1];
  };

  traj.times.reserve(steps + 1);
  traj.values.reserve(steps + 1);
  traj.times.push_back(0.0);
  traj.values.push_back(x[0]);
  for (long n = 0; n < steps; ++n) {
    const double t = n * h;
    f[n] = rhs(x[n], delayed(n, 0.0));
    const double k1 = f[n];
    const double y_half = delayed(n, 0.5);
    const double k2 = rhs(x[n] + 0.5 * h * k1, y_half);
    const double k3 = rhs(x[n] + 0.5 * h * k2, y_half);
    const double k4 = rhs(x[n] + h * k3, delayed(n, 1.0));
    x[n + 1] = x[n] + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
    if (!std::isfinite(x[n + 1]) || std::abs(x[n + 1]) > kDivergenceBound) diverge(t + h);
    traj.times.push_back((n + 1) * h);
    traj.values.push_back(x[n + 1]);
  }
  return traj;
}

ComplexTrajectory integrate_reduced(const reduce::ReducedEquation& red, Complex u0,
                                    const SimConfig& cfg) {
  if (!(std::abs(u0) <= 0.5)) {
    throw Error(ErrorKind::InvalidArgument, "integrate_reduced: |u0| must not exceed 0.5");
  }
  if (!(cfg.dt > 0.0) || !(cfg.horizon > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "integrate_reduced: dt and horizon must be positive");
  }
  const Complex l1 = red.lambda1;
  const Complex g20 = red.coeff(2, 0);
  const Complex g11 = red.coeff(1, 1);
  const Complex g02 = red.coeff(0, 2);
  const Complex g21 = red.coeff(2, 1);
  auto F = [&](Complex u) {
    const Complex ub = std::conj(u);
    return l1 * u + 0.5 * g20 * u * u + g11 * u * ub + 0.5 * g02 * ub * ub + 0.5 * g21 * u * u * ub;
  };
  const long steps = static_cast<long>(std::ceil(cfg.horizon / cfg.dt - 1e-9));
  const double h = cfg.horizon / steps;
  ComplexTrajectory traj;
  traj.times.reserve(steps + 1);
  traj.values.reserve(steps + 1);
  Complex u = u0;
  traj.times.push_back(0.0);
  traj.values.push_back(u);
  for (long n = 0; n < steps; ++n) {
    const Complex k1 = F(u);
    const Complex k2 = F(u + 0.5 * h * k1);
    const Complex k3 = F(u + 0.5 * h * k2);
    const Complex k4 = F(u + h * k3);
    u += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!std::isfinite(u.real()) || !std::isfinite(u.imag()) || std::abs(u) > kDivergenceBound) {
      diverge((n + 1) * h);
    }
    traj.times.push_back((n + 1) * h);
    traj.values.push_back(u);
  }
  return traj;
}

double measure_frequency(const Trajectory& traj, double t_min) {
  std::vector<double> up;
  int crossings = 0;
  for (std::size_t i = 0; i + 1 < traj.values.size(); ++i) {
    if (traj.times[i] < t_min) continue;
    const double a = traj.values[i];
    const double b = traj.values[i + 1];
    if ((a < 0.0 && b >= 0.0) || (a >= 0.0 && b < 0.0)) {
      ++crossings;
      if (a < 0.0) {
        const double frac = a / (a - b);
        up.push_back(traj.times[i] + frac * (traj.times[i + 1] - traj.times[i]));
      }
    }
  }
  if (crossings < 5 || up.size() < 2) {
    std::ostringstream os;
    os << "measure_frequency: only " << crossings << " zero crossings after t = " << t_min;
    throw Error(ErrorKind::TooFewCrossings, os.str());
  }
  return 2.0 * std::numbers::pi * double(up.size() - 1) / (up.back() - up.front());
}

Trajectory reconstruct(const ComplexTrajectory& u, const cmcore::SecondOrder& so,
                       Complex w21_0) {
  Trajectory x;
  x.times = u.times;
  x.values.reserve(u.values.size());
  for (const Complex z : u.values) {
    const Complex zb = std::conj(z);
    const Complex quad = 0.5 * so.w20_0 * z * z + so.w11_0 * z * zb + 0.5 * so.w02_0 * zb * zb;
    const Complex cubic = 0.5 * w21_0 * z * z * zb;
    x.values.push_back(2.0 * z.real() + quad.real() + 2.0 * cubic.real());
  }
  return x;
}

Trajectory envelope(const Trajectory& traj, double window) {
  if (!(window > 0.0)) throw Error(ErrorKind::InvalidArgument, "envelope: window must be positive");
  Trajectory env;
  if (traj.times.empty()) return env;
  double start = traj.times.front();
  double peak = 0.0;
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    if (traj.times[i] >= start + window) {
      env.times.push_back(start + 0.5 * window);
      env.values.push_back(peak);
      start += window;
      peak = 0.0;
    }
    peak = std::max(peak, std::abs(traj.values[i]));
  }
  return env;
}

}  // namespace cmdde::ddesim
