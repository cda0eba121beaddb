#include "cmdde/app.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "cmdde/errors.hpp"
#include "json.hpp"

namespace cmdde::app {

using nlohmann::json;

namespace {

[[noreturn]] void parse_error(const std::string& what) {
  throw Error(ErrorKind::Parse, "model file: " + what);
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key())) parse_error("unknown key '" + it.key() + "' in " + where);
  }
}

double get_number(const json& obj, const std::string& key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end()) parse_error("missing key '" + key + "' in " + where);
  if (!it->is_number()) parse_error("key '" + key + "' in " + where + " must be a number");
  const double v = it->get<double>();
  if (!std::isfinite(v)) parse_error("key '" + key + "' in " + where + " must be finite");
  return v;
}

std::pair<int, int> parse_jk(const std::string& key) {
  const auto comma = key.find(',');
  auto digits = [](const std::string& s) {
    return !s.empty() && s.size() <= 2 && s.find_first_not_of("0123456789") == std::string::npos;
  };
  if (comma == std::string::npos || !digits(key.substr(0, comma)) ||
      !digits(key.substr(comma + 1))) {
    parse_error("coefficient key '" + key + "' must have the form \"j,k\"");
  }
  const int j = std::stoi(key.substr(0, comma));
  const int k = std::stoi(key.substr(comma + 1));
  if (j + k < 2 || j + k > 3) parse_error("coefficient key '" + key + "' must have order 2 or 3");
  return {j, k};
}

json cplx(Complex z) { return json::array({z.real(), z.imag()}); }

json terms_json(const funcalg::ExpPoly& p) {
  json arr = json::array();
  for (const auto& t : p.terms()) {
    arr.push_back({{"coeff", cplx(t.coeff())}, {"rate", cplx(t.rate())}, {"degree", t.degree()}});
  }
  return {{"domain", json::array({p.domain().lo, p.domain().hi})}, {"terms", arr}};
}

json opt_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json model_json(const cmcore::ModelSpec& m) {
  json c = json::object();
  for (const auto& [key, value] : m.C) {
    c[std::to_string(key.first) + "," + std::to_string(key.second)] = value;
  }
  json out = {{"A", m.lin.A}, {"B", m.lin.B}, {"r", m.lin.r}, {"C", c}};
  if (m.omega_hint) out["omega_hint"] = *m.omega_hint;
  return out;
}

json extrapolation_object(const perturb::Extrapolation& ex) {
  json est = json::array();
  json grid = json::array();
  for (const auto& g : ex.estimates) {
    grid.push_back(g.eps);
    est.push_back({{"eps", g.eps},
                   {"mu_eps", g.mu_eps},
                   {"w21_0", cplx(g.w21_0)},
                   {"w21_minus_r", cplx(g.w21_mr)},
                   {"h1", cplx(g.h1)},
                   {"h2", cplx(g.h2)},
                   {"Delta_eps", cplx(g.Delta_eps)},
                   {"path", g.via_h ? "h1/h2" : "direct"}});
  }
  return {{"family", perturb::family_name(ex.family)},
          {"eps_grid", grid},
          {"estimates", est},
          {"extrapolated", cplx(ex.extrapolated)},
          {"extrapolated_minus_r", cplx(ex.extrapolated_mr)},
          {"closed_form", cplx(ex.closed_form)},
          {"gap_to_closed_form", ex.gap_to_closed_form},
          {"observed_order", opt_number(ex.observed_order)},
          {"error_constant", ex.error_constant},
          {"h2_limit", cplx(ex.h2_limit)},
          {"h2_monotone", ex.h2_monotone},
          {"estimates_monotone", ex.estimates_monotone},
          {"warnings", ex.warnings}};
}

}  // namespace

ModelFile parse_model(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    parse_error(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) parse_error("top level must be an object");
  reject_unknown(doc, {"A", "B", "r", "C", "omega_hint", "sweep", "perturb", "simulate"},
                 "model");

  ModelFile mf;
  auto& m = mf.model;
  m.lin.A = get_number(doc, "A", "model");
  m.lin.B = get_number(doc, "B", "model");
  m.lin.r = get_number(doc, "r", "model");
  if (!(m.lin.r > 0.0)) parse_error("key 'r' must be positive");
  if (doc.contains("C")) {
    const json& c = doc["C"];
    if (!c.is_object()) parse_error("key 'C' must be an object of \"j,k\": number");
    for (auto it = c.begin(); it != c.end(); ++it) {
      const auto [j, k] = parse_jk(it.key());
      if (!it->is_number()) parse_error("coefficient '" + it.key() + "' must be a number");
      const double v = it->get<double>();
      if (!std::isfinite(v)) parse_error("coefficient '" + it.key() + "' must be finite");
      m.C[{j, k}] = v;
    }
  }
  if (doc.contains("omega_hint")) {
    const double w = get_number(doc, "omega_hint", "model");
    if (!(w > 0.0)) parse_error("key 'omega_hint' must be positive");
    m.omega_hint = w;
  }

  if (doc.contains("sweep")) {
    const json& s = doc["sweep"];
    if (!s.is_object()) parse_error("key 'sweep' must be an object");
    reject_unknown(s, {"param", "min", "max", "points"}, "sweep");
    SweepBlock b;
    if (s.contains("param")) {
      if (!s["param"].is_string()) parse_error("sweep.param must be a string");
      b.param = s["param"].get<std::string>();
    }
    b.min = get_number(s, "min", "sweep");
    b.max = get_number(s, "max", "sweep");
    if (s.contains("points")) {
      if (!s["points"].is_number_integer()) parse_error("sweep.points must be an integer");
      b.points = s["points"].get<int>();
    }
    mf.sweep = b;
  }

  if (doc.contains("perturb")) {
    const json& p = doc["perturb"];
    if (!p.is_object()) parse_error("key 'perturb' must be an object");
    reject_unknown(p, {"eps_grid", "family"}, "perturb");
    PerturbBlock b;
    if (p.contains("eps_grid")) {
      if (!p["eps_grid"].is_array()) parse_error("perturb.eps_grid must be an array");
      b.eps_grid.clear();
      for (const auto& v : p["eps_grid"]) {
        if (!v.is_number()) parse_error("perturb.eps_grid entries must be numbers");
        b.eps_grid.push_back(v.get<double>());
      }
    }
    if (p.contains("family")) {
      if (!p["family"].is_string()) parse_error("perturb.family must be a string");
      try {
        b.family = perturb::parse_family(p["family"].get<std::string>());
      } catch (const Error& e) {
        parse_error(e.what());
      }
    }
    mf.perturb = b;
  }

  if (doc.contains("simulate")) {
    const json& s = doc["simulate"];
    if (!s.is_object()) parse_error("key 'simulate' must be an object");
    reject_unknown(s, {"dt", "horizon", "amplitude", "history"}, "simulate");
    SimulateBlock b;
    if (s.contains("dt")) b.dt = get_number(s, "dt", "simulate");
    if (s.contains("horizon")) b.horizon = get_number(s, "horizon", "simulate");
    if (s.contains("amplitude")) b.amplitude = get_number(s, "amplitude", "simulate");
    if (s.contains("history")) {
      if (!s["history"].is_string()) parse_error("simulate.history must be a string");
      b.history = s["history"].get<std::string>();
      if (b.history != "constant" && b.history != "eigen") {
        parse_error("simulate.history must be \"constant\" or \"eigen\"");
      }
    }
    mf.simulate = b;
  }
  return mf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw Error(ErrorKind::Io, "write to '" + path + "' failed");
}

ModelFile load_model(const std::string& path) { return parse_model(read_file(path)); }

std::string report_json(const reduce::AnalysisReport& rep, bool include_timing) {
  const auto& so = rep.so;
  const auto& t = rep.third;
  json doc;
  doc["version"] = kSchemaVersion;
  doc["model"] = model_json(rep.model);
  doc["hopf"] = {{"omega", rep.hopf.omega},
                 {"residual", rep.hopf.residual},
                 {"simple", rep.hopf.simple}};
  doc["spectrum_audit"] = {
      {"rect", json::array({rep.audit.rect.re_min, rep.audit.rect.re_max, rep.audit.rect.im_min,
                            rep.audit.rect.im_max})},
      {"count", rep.audit.count},
      {"expected", rep.audit.expected},
      {"ok", rep.audit.ok}};
  doc["eigendata"] = {{"lambda", cplx(rep.eig.lambda)},
                      {"e11", cplx(rep.eig.e11)},
                      {"e22", cplx(rep.eig.e22)},
                      {"Psi1_at_0", cplx(rep.eig.Psi1_at_0)},
                      {"biorthogonality_error", rep.biorthogonality_error}};
  json pair1 = json::array();
  json pair2 = json::array();
  for (int i = 0; i < 3; ++i) {
    pair1.push_back(cplx(rep.psi1_pairings[i]));
    pair2.push_back(cplx(rep.psi2_pairings[i]));
  }
  doc["second_order"] = {
      {"f20", cplx(so.f20)},
      {"f11", cplx(so.f11)},
      {"f02", cplx(so.f02)},
      {"g20", cplx(so.g20)},
      {"g11", cplx(so.g11)},
      {"g02", cplx(so.g02)},
      {"w20", {{"at_0", cplx(so.w20_0)}, {"at_minus_r", cplx(so.w20_mr)}, {"profile", terms_json(so.w20)}}},
      {"w11", {{"at_0", cplx(so.w11_0)}, {"at_minus_r", cplx(so.w11_mr)}, {"profile", terms_json(so.w11)}}},
      {"w02", {{"at_0", cplx(so.w02_0)}, {"at_minus_r", cplx(so.w02_mr)}, {"profile", terms_json(so.w02)}}},
      {"psi1_pairings", pair1},
      {"psi2_pairings", pair2}};
  json ids = json::array();
  for (double v : t.degeneracy.residual) ids.push_back(v);
  doc["third_order"] = {{"f21", cplx(t.f21)},
                        {"g21", cplx(t.g21)},
                        {"g12_bar", cplx(t.g12_bar)},
                        {"R1", cplx(t.R1)},
                        {"R2", cplx(t.R2)},
                        {"Delta", cplx(t.Delta)},
                        {"BR1_minus_R2", t.degeneracy_residual},
                        {"identity_residuals", ids},
                        {"w21_0", cplx(t.w21_0)},
                        {"w21_minus_r", cplx(t.w21_mr)},
                        {"w21_profile", terms_json(t.w21)},
                        {"Psi1_w21_pairing", cplx(t.psi1_pairing)}};
  json g = json::object();
  for (const auto& [key, value] : rep.reduced.g) {
    g[std::to_string(key.first) + "," + std::to_string(key.second)] = cplx(value);
  }
  doc["reduced"] = {{"lambda1", cplx(rep.reduced.lambda1)}, {"g", g}};
  doc["l1"] = {{"value", rep.l1},
               {"convention", "Re[(i/(2 omega))(g20 g11 - 2|g11|^2 - |g02|^2/3) + g21/2]"}};
  doc["oracle"] = rep.oracle ? extrapolation_object(*rep.oracle) : json(nullptr);
  doc["warnings"] = rep.warnings;
  if (include_timing) {
    json tm = json::object();
    for (const auto& [k, v] : rep.timing_seconds) tm[k] = v;
    doc["timing"] = tm;
  }
  return doc.dump(2) + "\n";
}

std::string extrapolation_json(const perturb::Extrapolation& ex) {
  json doc = extrapolation_object(ex);
  doc["version"] = kSchemaVersion;
  return doc.dump(2) + "\n";
}

std::string sweep_json(const reduce::SweepResult& res, double min, double max) {
  json grid = json::array();
  for (std::size_t i = 0; i < res.grid.size(); ++i) {
    grid.push_back({{"value", res.grid[i]},
                    {"l1", std::isfinite(res.l1[i]) ? json(res.l1[i]) : json(nullptr)}});
  }
  json doc = {{"version", kSchemaVersion},
              {"param", res.param.name()},
              {"min", min},
              {"max", max},
              {"points", res.grid.size()},
              {"roots", res.roots},
              {"grid", grid},
              {"point_errors", res.point_errors}};
  return doc.dump(2) + "\n";
}

std::string sweep_csv(const reduce::SweepResult& res) {
  std::ostringstream os;
  os.precision(17);
  os << "value,l1\n";
  for (std::size_t i = 0; i < res.grid.size(); ++i) {
    os << res.grid[i] << ",";
    if (std::isfinite(res.l1[i])) os << res.l1[i];
    os << "\n";
  }
  return os.str();
}

SimulationOutput run_simulation(const ModelFile& mf, double hopf_tol) {
  const auto& model = mf.model;
  model.validate();
  const double r = model.lin.r;
  const SimulateBlock block = mf.simulate.value_or(SimulateBlock{});
  ddesim::SimConfig cfg;
  cfg.dt = block.dt.value_or(r / 100.0);
  cfg.horizon = block.horizon.value_or(50.0 * r);

  SimulationOutput out;
  std::optional<chareq::HopfPoint> hopf;
  try {
    hopf = reduce::resolve_hopf(model, hopf_tol);
    out.omega = hopf->omega;
  } catch (const Error&) {
    if (block.history == "eigen") throw;
  }
  if (block.history == "eigen") {
    funcalg::ExpPoly h(funcalg::Interval{-r, 0.0});
    h.add_term(funcalg::ExpMonomial(block.amplitude, Complex{0.0, out.omega}));
    h.add_term(funcalg::ExpMonomial(block.amplitude, Complex{0.0, -out.omega}));
    cfg.history = h;
  } else {
    cfg.history_constant = block.amplitude;
  }
  out.traj = ddesim::integrate_dde(model, cfg);
  try {
    out.measured_frequency = ddesim::measure_frequency(out.traj, 10.0 * r);
  } catch (const Error&) {
  }
  return out;
}

std::string trajectory_csv(const ddesim::Trajectory& traj) {
  std::ostringstream os;
  os.precision(17);
  os << "t,x\n";
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    os << traj.times[i] << "," << traj.values[i] << "\n";
  }
  return os.str();
}

std::string simulation_json(const SimulationOutput& out) {
  json doc = {{"version", kSchemaVersion},
              {"samples", out.traj.times.size()},
              {"omega", out.omega > 0.0 ? json(out.omega) : json(nullptr)},
              {"measured_frequency", opt_number(out.measured_frequency)},
              {"warnings", out.traj.warnings}};
  return doc.dump(2) + "\n";
}

std::vector<double> parse_csv_floats(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) {
      throw Error(ErrorKind::InvalidArgument, "empty entry in number list '" + text + "'");
    }
    const std::string tok = item.substr(b, e - b + 1);
    try {
      std::size_t used = 0;
      const double v = std::stod(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      out.push_back(v);
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::InvalidArgument, "'" + tok + "' is not a number");
    }
  }
  if (out.empty()) throw Error(ErrorKind::InvalidArgument, "empty number list");
  return out;
}

}  // namespace cmdde::app
