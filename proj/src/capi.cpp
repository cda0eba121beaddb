#include "cmdde/cmdde.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <memory>
#include <new>
#include <string>

#include "cmdde/app.hpp"
#include "cmdde/errors.hpp"

struct cmdde_model {
  cmdde::app::ModelFile file;
};

struct cmdde_analysis {
  cmdde::reduce::AnalysisReport report;
};

namespace {

using namespace cmdde;

thread_local std::string g_message;
thread_local std::string g_name;
thread_local double g_divergence_time = std::numeric_limits<double>::quiet_NaN();

cmdde_status status_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return CMDDE_INVALID_ARGUMENT;
    case ErrorKind::Parse: return CMDDE_PARSE;
    case ErrorKind::Io: return CMDDE_IO;
    default: return CMDDE_MATH;
  }
}

cmdde_status fail(cmdde_status st, const char* name, const std::string& msg) {
  g_name = name;
  g_message = msg;
  return st;
}

// Runs body, translating exceptions into status codes and the thread-local
// error record.
template <class F>
cmdde_status guarded(F&& body) {
  g_message.clear();
  g_name.clear();
  g_divergence_time = std::numeric_limits<double>::quiet_NaN();
  try {
    body();
    return CMDDE_OK;
  } catch (const DivergenceError& e) {
    g_divergence_time = e.time();
    return fail(CMDDE_MATH, e.name(), e.what());
  } catch (const Error& e) {
    return fail(status_for(e.kind()), e.name(), e.what());
  } catch (const std::bad_alloc&) {
    return fail(CMDDE_INTERNAL, "internal", "out of memory");
  } catch (const std::exception& e) {
    return fail(CMDDE_INTERNAL, "internal", e.what());
  } catch (...) {
    return fail(CMDDE_INTERNAL, "internal", "unknown exception");
  }
}

void require(bool cond, const char* what) {
  if (!cond) throw Error(ErrorKind::InvalidArgument, what);
}

char* dup_string(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

void put(char** out, const std::string& s) {
  if (out) *out = dup_string(s);
}

struct Resolved {
  std::vector<double> eps_grid;
  perturb::Family family;
  double hopf_tol;
  bool run_oracle;
};

Resolved resolve_options(const app::ModelFile& mf, const cmdde_options* opts) {
  cmdde_options o;
  cmdde_options_init(&o);
  if (opts) o = *opts;
  Resolved r;
  r.hopf_tol = o.hopf_tol;
  r.run_oracle = o.run_oracle != 0;
  const app::PerturbBlock block = mf.perturb.value_or(app::PerturbBlock{});
  if (o.eps_grid) {
    require(o.eps_count > 0, "eps_grid given with zero entries");
    r.eps_grid.assign(o.eps_grid, o.eps_grid + o.eps_count);
  } else {
    r.eps_grid = block.eps_grid;
  }
  r.family = o.family ? perturb::parse_family(o.family) : block.family;
  require(std::isfinite(r.hopf_tol) && r.hopf_tol > 0.0, "hopf tolerance must be positive");
  return r;
}

}  // namespace

extern "C" {

const char* cmdde_version(void) { return "1.0.0"; }

const char* cmdde_last_error(void) { return g_message.c_str(); }

const char* cmdde_last_error_name(void) { return g_name.c_str(); }

double cmdde_last_divergence_time(void) { return g_divergence_time; }

int cmdde_exit_code(cmdde_status status) {
  if (status == CMDDE_OK) return 0;
  return status == CMDDE_MATH ? 2 : 1;
}

void cmdde_options_init(cmdde_options* opts) {
  if (!opts) return;
  opts->hopf_tol = chareq::kDefaultHopfTol;
  opts->eps_grid = nullptr;
  opts->eps_count = 0;
  opts->family = nullptr;
  opts->run_oracle = 1;
}

cmdde_status cmdde_model_from_json(const char* text, cmdde_model** out) {
  return guarded([&] {
    require(text && out, "cmdde_model_from_json: null argument");
    auto m = std::make_unique<cmdde_model>();
    m->file = app::parse_model(text);
    *out = m.release();
  });
}

cmdde_status cmdde_model_load(const char* path, cmdde_model** out) {
  return guarded([&] {
    require(path && out, "cmdde_model_load: null argument");
    auto m = std::make_unique<cmdde_model>();
    m->file = app::load_model(path);
    *out = m.release();
  });
}

cmdde_status cmdde_model_create(double A, double B, double r, cmdde_model** out) {
  return guarded([&] {
    require(out != nullptr, "cmdde_model_create: null argument");
    auto m = std::make_unique<cmdde_model>();
    m->file.model.lin = chareq::LinearPart{A, B, r};
    m->file.model.lin.validate();
    *out = m.release();
  });
}

cmdde_status cmdde_model_set_coefficient(cmdde_model* model, int j, int k, double value) {
  return guarded([&] {
    require(model != nullptr, "cmdde_model_set_coefficient: null model");
    model->file.model.set_coeff(j, k, value);
  });
}

cmdde_status cmdde_model_set_omega_hint(cmdde_model* model, double omega) {
  return guarded([&] {
    require(model != nullptr, "cmdde_model_set_omega_hint: null model");
    require(std::isfinite(omega) && omega > 0.0, "omega hint must be positive");
    model->file.model.omega_hint = omega;
  });
}

void cmdde_model_free(cmdde_model* model) { delete model; }

cmdde_status cmdde_analyze(const cmdde_model* model, const cmdde_options* opts,
                           cmdde_analysis** out) {
  return guarded([&] {
    require(model && out, "cmdde_analyze: null argument");
    const Resolved r = resolve_options(model->file, opts);
    reduce::AnalyzeOptions ao;
    ao.hopf_tol = r.hopf_tol;
    ao.eps_grid = r.eps_grid;
    ao.family = r.family;
    ao.run_oracle = r.run_oracle;
    auto a = std::make_unique<cmdde_analysis>();
    a->report = reduce::analyze(model->file.model, ao);
    *out = a.release();
  });
}

cmdde_status cmdde_analysis_w21(const cmdde_analysis* a, double out[4]) {
  return guarded([&] {
    require(a && out, "cmdde_analysis_w21: null argument");
    out[0] = a->report.third.w21_0.real();
    out[1] = a->report.third.w21_0.imag();
    out[2] = a->report.third.w21_mr.real();
    out[3] = a->report.third.w21_mr.imag();
  });
}

cmdde_status cmdde_analysis_l1(const cmdde_analysis* a, double* out) {
  return guarded([&] {
    require(a && out, "cmdde_analysis_l1: null argument");
    *out = a->report.l1;
  });
}

cmdde_status cmdde_analysis_omega(const cmdde_analysis* a, double* out) {
  return guarded([&] {
    require(a && out, "cmdde_analysis_omega: null argument");
    *out = a->report.hopf.omega;
  });
}

cmdde_status cmdde_analysis_oracle_gap(const cmdde_analysis* a, double* out) {
  return guarded([&] {
    require(a && out, "cmdde_analysis_oracle_gap: null argument");
    require(a->report.oracle.has_value(), "oracle was not run for this analysis");
    *out = a->report.oracle->gap_to_closed_form;
  });
}

cmdde_status cmdde_analysis_to_json(const cmdde_analysis* a, int include_timing, char** out) {
  return guarded([&] {
    require(a && out, "cmdde_analysis_to_json: null argument");
    *out = dup_string(app::report_json(a->report, include_timing != 0));
  });
}

void cmdde_analysis_free(cmdde_analysis* a) { delete a; }

cmdde_status cmdde_sweep(const cmdde_model* model, const cmdde_sweep_spec* spec, int jobs,
                         double hopf_tol, char** json_out, char** csv_out) {
  return guarded([&] {
    require(model != nullptr, "cmdde_sweep: null model");
    app::SweepBlock block;
    if (spec) {
      require(spec->param != nullptr, "cmdde_sweep: null param");
      block.param = spec->param;
      block.min = spec->min;
      block.max = spec->max;
      block.points = spec->points;
    } else {
      require(model->file.sweep.has_value(), "model file has no sweep block");
      block = *model->file.sweep;
    }
    const auto param = reduce::SweepParam::parse(block.param);
    const auto res = reduce::sweep_l1_zeros(model->file.model, param, block.min, block.max,
                                            block.points, jobs, hopf_tol);
    put(json_out, app::sweep_json(res, block.min, block.max));
    put(csv_out, app::sweep_csv(res));
  });
}

cmdde_status cmdde_perturb_check(const cmdde_model* model, const cmdde_options* opts,
                                 char** json_out, double* gap_out) {
  return guarded([&] {
    require(model != nullptr, "cmdde_perturb_check: null model");
    const Resolved r = resolve_options(model->file, opts);
    const auto& m = model->file.model;
    m.validate();
    const auto hopf = reduce::resolve_hopf(m, r.hopf_tol);
    const auto eig = spectral::build_eigendata(m.lin, hopf);
    const auto ex = perturb::extrapolate_w21(m, eig, r.eps_grid, r.family);
    if (gap_out) *gap_out = ex.gap_to_closed_form;
    put(json_out, app::extrapolation_json(ex));
  });
}

cmdde_status cmdde_simulate(const cmdde_model* model, double hopf_tol, char** csv_out,
                            char** json_out) {
  return guarded([&] {
    require(model != nullptr, "cmdde_simulate: null model");
    const auto sim = app::run_simulation(model->file, hopf_tol);
    put(csv_out, app::trajectory_csv(sim.traj));
    put(json_out, app::simulation_json(sim));
  });
}

cmdde_status cmdde_count_roots(const cmdde_model* model, const double* rect, double hopf_tol,
                               int* count) {
  return guarded([&] {
    require(model && count, "cmdde_count_roots: null argument");
    const auto& lin = model->file.model.lin;
    chareq::Rect box;
    if (rect) {
      box = chareq::Rect{rect[0], rect[1], rect[2], rect[3]};
    } else {
      box = chareq::default_audit_rect(lin, reduce::resolve_hopf(model->file.model, hopf_tol).omega);
    }
    *count = chareq::count_roots_rect(lin, box);
  });
}

void cmdde_string_free(char* s) { std::free(s); }

}  // extern "C"
