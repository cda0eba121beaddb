#pragma once

// Reduced equation on the center manifold,
//   u' = lambda1 u + sum g_jk u^j conj(u)^k / (j! k!),
// its first Lyapunov coefficient, parameter sweeps for its zeros and the
// end-to-end analysis pipeline.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cmdde/cmcore.hpp"
#include "cmdde/perturb.hpp"

namespace cmdde::reduce {

struct ReducedEquation {
  Complex lambda1;
  std::map<std::pair<int, int>, Complex> g;  // keys (2,0), (1,1), (0,2), (2,1)

  Complex coeff(int j, int k) const;
};

ReducedEquation assemble_reduced(const spectral::EigenData& eig, const cmcore::SecondOrder& so,
                                 const cmcore::ThirdOrderRhs& third);

/// Re[(i/(2 omega)) (g20 g11 - 2|g11|^2 - |g02|^2/3) + g21/2].
double lyapunov_l1(const ReducedEquation& red);

/// Critical frequency of the model: zero-eigenvalue screening, then the
/// candidate omega (omega_hint or sqrt(B^2 - A^2)) is verified.
chareq::HopfPoint resolve_hopf(const cmcore::ModelSpec& model,
                               double tol = chareq::kDefaultHopfTol);

// Swept parameter: a nonlinear coefficient C_jk, or B with A re-solved so the
// model stays at a Hopf point.
struct SweepParam {
  enum class Kind { Coefficient, B } kind = Kind::Coefficient;
  int j = 1;
  int k = 1;

  static SweepParam parse(const std::string& text);
  std::string name() const;
};

struct SweepResult {
  SweepParam param;
  std::vector<double> grid;
  std::vector<double> l1;  // NaN where the point raised an error
  std::vector<std::string> point_errors;
  std::vector<double> roots;
};

inline constexpr double kBisectionTol = 1e-10;
// |l1| at or below this is treated as an exact zero by the sweep.
inline constexpr double kL1ZeroFloor = 1e-13;

/// l1 at a single parameter value.
double l1_at(const cmcore::ModelSpec& model_template, const SweepParam& param, double value,
             double hopf_tol = chareq::kDefaultHopfTol);

SweepResult sweep_l1_zeros(const cmcore::ModelSpec& model_template, const SweepParam& param,
                           double min, double max, int n_points, int jobs = 1,
                           double hopf_tol = chareq::kDefaultHopfTol);

struct AnalyzeOptions {
  double hopf_tol = chareq::kDefaultHopfTol;
  std::vector<double> eps_grid = perturb::default_eps_grid();
  perturb::Family family = perturb::Family::ScaleB;
  bool run_oracle = true;
};

struct AnalysisReport {
  cmcore::ModelSpec model;
  chareq::HopfPoint hopf;
  chareq::SpectrumAudit audit;
  spectral::EigenData eig;
  double biorthogonality_error = 0.0;
  cmcore::SecondOrder so;
  std::array<Complex, 3> psi1_pairings;  // <psi1, w20>, <psi1, w11>, <psi1, w02>
  std::array<Complex, 3> psi2_pairings;
  cmcore::ThirdOrder third;
  ReducedEquation reduced;
  double l1 = 0.0;
  std::optional<perturb::Extrapolation> oracle;
  std::vector<std::string> warnings;
  std::map<std::string, double> timing_seconds;
};

AnalysisReport analyze(const cmcore::ModelSpec& model, const AnalyzeOptions& opts = {});

}  // namespace cmdde::reduce
