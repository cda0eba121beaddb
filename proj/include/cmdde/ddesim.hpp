#pragma once

// Time integration of the full delay equation and of the reduced equation,
// for dynamics-level comparisons.

#include <optional>
#include <string>
#include <vector>

#include "cmdde/cmcore.hpp"
#include "cmdde/reduce.hpp"

namespace cmdde::ddesim {

inline constexpr double kDivergenceBound = 1e6;
inline constexpr double kLargeHistory = 0.5;

struct SimConfig {
  double dt = 0.01;
  double horizon = 100.0;
  double history_constant = 0.0;
  std::optional<funcalg::ExpPoly> history;  // real part is used; overrides the constant

  // dt <= r/20, horizon >= 10 r, history on [-r, 0].
  void validate(double r) const;
  double history_at(double s) const;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<double> values;
  std::vector<std::string> warnings;
};

struct ComplexTrajectory {
  std::vector<double> times;
  std::vector<Complex> values;
};

/// Classic RK4 with step r/N (N = ceil(r/dt)); delayed values come from the
/// history on [-r, 0] and from cubic Hermite interpolation of stored steps.
Trajectory integrate_dde(const cmcore::ModelSpec& model, const SimConfig& cfg);

/// RK4 on u' = lambda1 u + g20 u^2/2 + g11 u conj(u) + g02 conj(u)^2/2 + g21 u^2 conj(u)/2.
ComplexTrajectory integrate_reduced(const reduce::ReducedEquation& red, Complex u0,
                                    const SimConfig& cfg);

/// Angular frequency from the mean spacing of upward zero crossings after
/// t_min (linear interpolation between samples).
double measure_frequency(const Trajectory& traj, double t_min);

/// x(t) = 2 Re u + w20(0) u^2/2 + w11(0) |u|^2 + w02(0) conj(u)^2/2
///        + Re[w21(0) u^2 conj(u)].
Trajectory reconstruct(const ComplexTrajectory& u, const cmcore::SecondOrder& so, Complex w21_0);

/// Maximum of |x| over consecutive windows of the given length; times are the
/// window centers.
Trajectory envelope(const Trajectory& traj, double window);

}  // namespace cmdde::ddesim
