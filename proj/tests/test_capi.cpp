#include <cmath>
#include <cstdlib>
#include <cstring>
#include <string>
#include <thread>

#include "cmdde/cmdde.h"
#include "doctest.h"

namespace {

const char* kBautin = R"({"A": 0, "B": -1, "r": 1.5707963267948966,
  "C": {"2,0": 2, "1,1": 1.5279963111346078}})";

struct Model {
  cmdde_model* m = nullptr;
  ~Model() { cmdde_model_free(m); }
};

struct Str {
  char* p = nullptr;
  ~Str() { cmdde_string_free(p); }
};

std::string models_dir() {
  const char* env = std::getenv("CMDDE_MODELS");
  return env ? env : "models";
}

}  // namespace

TEST_CASE("version and exit-code mapping") {
  CHECK(std::strlen(cmdde_version()) > 0);
  CHECK(cmdde_exit_code(CMDDE_OK) == 0);
  CHECK(cmdde_exit_code(CMDDE_MATH) == 2);
  CHECK(cmdde_exit_code(CMDDE_PARSE) == 1);
  CHECK(cmdde_exit_code(CMDDE_IO) == 1);
  CHECK(cmdde_exit_code(CMDDE_INVALID_ARGUMENT) == 1);
  CHECK(cmdde_exit_code(CMDDE_INTERNAL) == 1);
}

TEST_CASE("analyze through the C API") {
  Model model;
  REQUIRE(cmdde_model_from_json(kBautin, &model.m) == CMDDE_OK);
  cmdde_analysis* a = nullptr;
  REQUIRE(cmdde_analyze(model.m, nullptr, &a) == CMDDE_OK);
  double w[4];
  CHECK(cmdde_analysis_w21(a, w) == CMDDE_OK);
  CHECK(w[0] == doctest::Approx(0.342342872129172).epsilon(1e-12));
  CHECK(w[1] == doctest::Approx(-0.314165853430712).epsilon(1e-12));
  CHECK(w[2] == doctest::Approx(1.633128595069).epsilon(1e-10));
  double l1 = 1.0, omega = 0.0, gap = 1.0;
  CHECK(cmdde_analysis_l1(a, &l1) == CMDDE_OK);
  CHECK(std::abs(l1) < 1e-9);
  CHECK(cmdde_analysis_omega(a, &omega) == CMDDE_OK);
  CHECK(omega == doctest::Approx(1.0));
  CHECK(cmdde_analysis_oracle_gap(a, &gap) == CMDDE_OK);
  CHECK(gap < 1e-6);
  Str json;
  CHECK(cmdde_analysis_to_json(a, 0, &json.p) == CMDDE_OK);
  CHECK(std::string(json.p).find("\"version\": 1") != std::string::npos);
  CHECK(std::string(json.p).find("\"timing\"") == std::string::npos);
  cmdde_analysis_free(a);
}

TEST_CASE("models built programmatically match parsed ones") {
  Model model;
  REQUIRE(cmdde_model_create(0.0, -1.0, 1.5707963267948966, &model.m) == CMDDE_OK);
  REQUIRE(cmdde_model_set_coefficient(model.m, 2, 0, 2.0) == CMDDE_OK);
  REQUIRE(cmdde_model_set_coefficient(model.m, 1, 1, 1.5279963111346078) == CMDDE_OK);
  CHECK(cmdde_model_set_coefficient(model.m, 4, 0, 1.0) == CMDDE_INVALID_ARGUMENT);
  CHECK(cmdde_model_set_omega_hint(model.m, -1.0) == CMDDE_INVALID_ARGUMENT);
  cmdde_options opts;
  cmdde_options_init(&opts);
  opts.run_oracle = 0;
  cmdde_analysis* a = nullptr;
  REQUIRE(cmdde_analyze(model.m, &opts, &a) == CMDDE_OK);
  double w[4];
  cmdde_analysis_w21(a, w);
  CHECK(w[0] == doctest::Approx(0.342342872129172).epsilon(1e-12));
  double gap = 0.0;
  CHECK(cmdde_analysis_oracle_gap(a, &gap) == CMDDE_INVALID_ARGUMENT);
  cmdde_analysis_free(a);
}

TEST_CASE("errors carry status, name and message") {
  cmdde_model* m = nullptr;
  CHECK(cmdde_model_from_json("{\"A\": 0}", &m) == CMDDE_PARSE);
  CHECK(std::string(cmdde_last_error_name()) == "parse");
  CHECK(std::string(cmdde_last_error()).find("'B'") != std::string::npos);
  CHECK(m == nullptr);

  CHECK(cmdde_model_load("/nonexistent/model.json", &m) == CMDDE_IO);
  CHECK(std::string(cmdde_last_error_name()) == "io");

  CHECK(cmdde_model_create(0.0, -1.0, -1.0, &m) == CMDDE_INVALID_ARGUMENT);
  CHECK(cmdde_analyze(nullptr, nullptr, nullptr) == CMDDE_INVALID_ARGUMENT);

  Model zero;
  REQUIRE(cmdde_model_load((models_dir() + "/zero_eigenvalue.json").c_str(), &zero.m) == CMDDE_OK);
  cmdde_analysis* a = nullptr;
  CHECK(cmdde_analyze(zero.m, nullptr, &a) == CMDDE_MATH);
  CHECK(std::string(cmdde_last_error_name()) == "zero-eigenvalue");
  CHECK(a == nullptr);
}

TEST_CASE("error records are per thread") {
  cmdde_model* m = nullptr;
  CHECK(cmdde_model_from_json("not json", &m) == CMDDE_PARSE);
  std::string other;
  std::thread t([&] {
    Model ok;
    cmdde_model_create(0.0, -1.0, 1.0, &ok.m);
    other = cmdde_last_error_name();
  });
  t.join();
  CHECK(other.empty());
  CHECK(std::string(cmdde_last_error_name()) == "parse");
}

TEST_CASE("sweep, perturbation check, simulation and root count") {
  Model model;
  REQUIRE(cmdde_model_load((models_dir() + "/bautin_sweep.json").c_str(), &model.m) == CMDDE_OK);
  Str json, csv;
  REQUIRE(cmdde_sweep(model.m, nullptr, 2, 1e-10, &json.p, &csv.p) == CMDDE_OK);
  CHECK(std::string(json.p).find("1.52799631") != std::string::npos);
  CHECK(std::string(csv.p).rfind("value,l1\n", 0) == 0);

  cmdde_sweep_spec bad{"1,1", 2.0, -2.0, 10};
  CHECK(cmdde_sweep(model.m, &bad, 1, 1e-10, nullptr, nullptr) == CMDDE_INVALID_ARGUMENT);

  double gap = 1.0;
  CHECK(cmdde_perturb_check(model.m, nullptr, nullptr, &gap) == CMDDE_OK);
  CHECK(gap < 1e-6);
  const double grid[] = {1e-2, -1e-3, 1e-4};
  cmdde_options opts;
  cmdde_options_init(&opts);
  opts.eps_grid = grid;
  opts.eps_count = 3;
  CHECK(cmdde_perturb_check(model.m, &opts, nullptr, nullptr) == CMDDE_INVALID_ARGUMENT);

  int count = 0;
  CHECK(cmdde_count_roots(model.m, nullptr, 1e-10, &count) == CMDDE_OK);
  CHECK(count == 2);
  const double on_contour[] = {0.0, 0.3, -2.0, 2.0};
  CHECK(cmdde_count_roots(model.m, on_contour, 1e-10, &count) == CMDDE_MATH);
  CHECK(std::string(cmdde_last_error_name()) == "root-on-contour");

  Model blow;
  REQUIRE(cmdde_model_from_json(R"({"A": 0, "B": -1, "r": 1.5707963267948966, "C": {"2,0": 2},
      "simulate": {"amplitude": 3}})", &blow.m) == CMDDE_OK);
  CHECK(cmdde_simulate(blow.m, 1e-10, nullptr, nullptr) == CMDDE_MATH);
  CHECK(std::string(cmdde_last_error_name()) == "divergence");
  CHECK(cmdde_last_divergence_time() > 0.0);

  Model lin;
  REQUIRE(cmdde_model_load((models_dir() + "/linear_critical.json").c_str(), &lin.m) == CMDDE_OK);
  Str traj, summary;
  CHECK(cmdde_simulate(lin.m, 1e-10, &traj.p, &summary.p) == CMDDE_OK);
  CHECK(std::isnan(cmdde_last_divergence_time()));
  CHECK(std::string(traj.p).rfind("t,x\n", 0) == 0);
}
