#pragma once

// Model files, report documents and the command pipelines behind the CLI.

#include <optional>
#include <string>
#include <vector>

#include "cmdde/ddesim.hpp"
#include "cmdde/perturb.hpp"
#include "cmdde/reduce.hpp"

namespace cmdde::app {

inline constexpr int kSchemaVersion = 1;

struct SweepBlock {
  std::string param = "1,1";
  double min = 0.0;
  double max = 0.0;
  int points = 200;
};

struct PerturbBlock {
  std::vector<double> eps_grid = perturb::default_eps_grid();
  perturb::Family family = perturb::Family::ScaleB;
};

struct SimulateBlock {
  std::optional<double> dt;       // default r/100
  std::optional<double> horizon;  // default 50 r
  double amplitude = 0.01;
  std::string history = "constant";  // "constant" or "eigen" (2 a cos(omega s))
};

struct ModelFile {
  cmcore::ModelSpec model;
  std::optional<SweepBlock> sweep;
  std::optional<PerturbBlock> perturb;
  std::optional<SimulateBlock> simulate;
};

/// Parses a JSON model document; unknown keys and malformed values raise
/// Parse errors naming the offending key.
ModelFile parse_model(const std::string& text);
ModelFile load_model(const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

/// Deterministic JSON report. Timing is emitted only on request, under its
/// own top-level key.
std::string report_json(const reduce::AnalysisReport& rep, bool include_timing = false);

std::string extrapolation_json(const perturb::Extrapolation& ex);

std::string sweep_json(const reduce::SweepResult& res, double min, double max);
std::string sweep_csv(const reduce::SweepResult& res);

struct SimulationOutput {
  ddesim::Trajectory traj;
  double omega = 0.0;
  std::optional<double> measured_frequency;
};

SimulationOutput run_simulation(const ModelFile& mf, double hopf_tol = chareq::kDefaultHopfTol);
std::string trajectory_csv(const ddesim::Trajectory& traj);
std::string simulation_json(const SimulationOutput& out);

/// Parses a comma-separated list of numbers.
std::vector<double> parse_csv_floats(const std::string& text);

}  // namespace cmdde::app
