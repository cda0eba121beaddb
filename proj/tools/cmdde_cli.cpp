// Command-line front end. Talks to the library only through the C API.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cmdde/cmdde.h"

namespace {

struct Owned {
  char* p = nullptr;
  ~Owned() { cmdde_string_free(p); }
};

struct ModelHandle {
  cmdde_model* m = nullptr;
  ~ModelHandle() { cmdde_model_free(m); }
};

int report_failure(cmdde_status st) {
  std::cerr << "error [" << cmdde_last_error_name() << "]: " << cmdde_last_error() << "\n";
  const double t = cmdde_last_divergence_time();
  if (!std::isnan(t)) std::cerr << "divergence time: " << t << "\n";
  return cmdde_exit_code(st);
}

int usage_error(const std::string& msg) {
  std::cerr << "error [invalid-argument]: " << msg << "\n";
  return 1;
}

// Writes to path, or to stdout when path is empty.
int emit(const std::string& path, const char* text) {
  if (path.empty()) {
    std::cout << text;
    return 0;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !(out << text)) {
    std::cerr << "error [io]: cannot write '" << path << "'\n";
    return 1;
  }
  return 0;
}

std::optional<std::vector<double>> parse_list(const std::string& text, std::string& err) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const double v = std::stod(item, &used);
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      err = "'" + item + "' is not a number";
      return std::nullopt;
    }
  }
  if (out.empty()) {
    err = "empty number list";
    return std::nullopt;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Center-manifold reduction of scalar delay equations at a Hopf point"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(cmdde_version()));

  std::string model_path;
  std::string out_path;
  std::string csv_path;
  std::string eps_text;
  std::string family;
  std::string rect_text;
  double tol = 0.0;
  int jobs = 1;
  bool timing = false;
  bool no_oracle = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--model", model_path, "Model file (JSON)")->required();
    sub->add_option("--out", out_path, "Output file (default: stdout)");
    sub->add_option("--tol", tol, "Hopf residual tolerance override");
  };

  auto* analyze = app.add_subcommand("analyze", "Full reduction and report");
  add_common(analyze);
  analyze->add_option("--eps-grid", eps_text, "Oracle epsilon grid, comma separated");
  analyze->add_option("--family", family, "Perturbation family");
  analyze->add_flag("--timing", timing, "Include timing metadata");
  analyze->add_flag("--no-oracle", no_oracle, "Skip the perturbation oracle");

  auto* sweep = app.add_subcommand("sweep", "Zeros of l1 along the model's sweep block");
  add_common(sweep);
  sweep->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  sweep->add_option("--csv", csv_path, "Also write value,l1 CSV");

  auto* perturb = app.add_subcommand("perturb-check", "Perturbation oracle for w21");
  add_common(perturb);
  perturb->add_option("--eps-grid", eps_text, "Epsilon grid, comma separated");
  perturb->add_option("--family", family, "Perturbation family");

  auto* simulate = app.add_subcommand("simulate", "Integrate the full equation; trajectory CSV");
  add_common(simulate);
  simulate->add_option("--summary", csv_path, "Also write a JSON summary");

  auto* roots = app.add_subcommand("roots", "Count characteristic roots in a rectangle");
  add_common(roots);
  roots->add_option("--rect", rect_text, "re_min,re_max,im_min,im_max");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  ModelHandle model;
  if (cmdde_status st = cmdde_model_load(model_path.c_str(), &model.m); st != CMDDE_OK) {
    return report_failure(st);
  }

  cmdde_options opts;
  cmdde_options_init(&opts);
  if (tol != 0.0) opts.hopf_tol = tol;
  if (!family.empty()) opts.family = family.c_str();
  opts.run_oracle = no_oracle ? 0 : 1;
  std::vector<double> eps;
  if (!eps_text.empty()) {
    std::string err;
    auto parsed = parse_list(eps_text, err);
    if (!parsed) return usage_error("--eps-grid: " + err);
    eps = *parsed;
    opts.eps_grid = eps.data();
    opts.eps_count = eps.size();
  }

  if (analyze->parsed()) {
    cmdde_analysis* a = nullptr;
    if (cmdde_status st = cmdde_analyze(model.m, &opts, &a); st != CMDDE_OK) {
      return report_failure(st);
    }
    Owned json;
    const cmdde_status st = cmdde_analysis_to_json(a, timing ? 1 : 0, &json.p);
    cmdde_analysis_free(a);
    if (st != CMDDE_OK) return report_failure(st);
    return emit(out_path, json.p);
  }

  if (sweep->parsed()) {
    Owned json, csv;
    if (cmdde_status st = cmdde_sweep(model.m, nullptr, jobs, opts.hopf_tol, &json.p, &csv.p);
        st != CMDDE_OK) {
      return report_failure(st);
    }
    if (!csv_path.empty() && emit(csv_path, csv.p) != 0) return 1;
    return emit(out_path, json.p);
  }

  if (perturb->parsed()) {
    Owned json;
    if (cmdde_status st = cmdde_perturb_check(model.m, &opts, &json.p, nullptr); st != CMDDE_OK) {
      return report_failure(st);
    }
    return emit(out_path, json.p);
  }

  if (simulate->parsed()) {
    Owned csv, json;
    if (cmdde_status st = cmdde_simulate(model.m, opts.hopf_tol, &csv.p, &json.p);
        st != CMDDE_OK) {
      return report_failure(st);
    }
    if (!csv_path.empty() && emit(csv_path, json.p) != 0) return 1;
    return emit(out_path, csv.p);
  }

  if (roots->parsed()) {
    std::vector<double> rect;
    if (!rect_text.empty()) {
      std::string err;
      auto parsed = parse_list(rect_text, err);
      if (!parsed) return usage_error("--rect: " + err);
      if (parsed->size() != 4) return usage_error("--rect needs exactly four numbers");
      rect = *parsed;
    }
    int count = 0;
    if (cmdde_status st =
            cmdde_count_roots(model.m, rect.empty() ? nullptr : rect.data(), opts.hopf_tol, &count);
        st != CMDDE_OK) {
      return report_failure(st);
    }
    const std::string text = "{\n  \"version\": 1,\n  \"count\": " + std::to_string(count) + "\n}\n";
    return emit(out_path, text.c_str());
  }
  return 1;
}
