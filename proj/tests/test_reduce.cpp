#include <numbers>

#include "cmdde/errors.hpp"
#include "cmdde/reduce.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace cmdde;
using namespace cmdde::reduce;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::InvalidArgument;
}

cmcore::ModelSpec bautin_template() {
  cmcore::ModelSpec m;
  m.lin = {0.0, -1.0, std::numbers::pi / 2.0};
  m.set_coeff(2, 0, 2.0);
  return m;
}

}  // namespace

TEST_CASE("l1 follows its defining combination of reduced coefficients") {
  ReducedEquation red;
  red.lambda1 = Complex{0.0, 2.0};
  red.g[{2, 0}] = Complex{1.0, 0.5};
  red.g[{1, 1}] = Complex{-0.3, 0.2};
  red.g[{0, 2}] = Complex{0.7, -0.1};
  red.g[{2, 1}] = Complex{0.4, 0.9};
  const Complex g20 = red.g[{2, 0}], g11 = red.g[{1, 1}], g02 = red.g[{0, 2}], g21 = red.g[{2, 1}];
  const double expected =
      (Complex{0.0, 1.0} / 4.0 * (g20 * g11 - 2.0 * std::norm(g11) - std::norm(g02) / 3.0) +
       g21 / 2.0)
          .real();
  CHECK(lyapunov_l1(red) == doctest::Approx(expected).epsilon(1e-15));
  red.lambda1 = Complex{0.0, -2.0};
  CHECK(kind_of([&] { lyapunov_l1(red); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("resolve_hopf screens the zero eigenvalue and uses the hint or sqrt(B^2 - A^2)") {
  cmcore::ModelSpec m;
  m.lin = {1.0, -1.0, 1.0};
  CHECK(kind_of([&] { resolve_hopf(m); }) == ErrorKind::ZeroEigenvalue);
  m.lin = {-2.0, 1.0, 1.0};
  CHECK(kind_of([&] { resolve_hopf(m); }) == ErrorKind::NoHopf);
  m.lin = {0.0, -1.0, std::numbers::pi / 2.0};
  CHECK(resolve_hopf(m).omega == doctest::Approx(1.0));
  m.omega_hint = 1.2;
  CHECK(kind_of([&] { resolve_hopf(m); }) == ErrorKind::NotHopfPoint);
}

TEST_CASE("sweep parameters parse and name themselves") {
  CHECK(SweepParam::parse("1,1").name() == "1,1");
  CHECK(SweepParam::parse("B").kind == SweepParam::Kind::B);
  CHECK(kind_of([] { SweepParam::parse("4,0"); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] { SweepParam::parse("x"); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("sweep recovers both closed-form Bautin values") {
  const auto res = sweep_l1_zeros(bautin_template(), SweepParam::parse("1,1"), -4.0, 4.0, 200);
  REQUIRE(res.roots.size() == 2);
  CHECK(std::abs(res.roots[0] - oracle::bautin_c2()) < 1e-8);
  CHECK(std::abs(res.roots[1] - oracle::bautin_c1()) < 1e-8);
  CHECK(res.point_errors.empty());
  for (double root : res.roots) {
    CHECK(std::abs(l1_at(bautin_template(), SweepParam::parse("1,1"), root)) < 1e-9);
  }
}

TEST_CASE("sweep is independent of the worker count") {
  const auto a = sweep_l1_zeros(bautin_template(), SweepParam::parse("1,1"), -4.0, 4.0, 64, 1);
  const auto b = sweep_l1_zeros(bautin_template(), SweepParam::parse("1,1"), -4.0, 4.0, 64, 4);
  CHECK(a.l1 == b.l1);
  CHECK(a.roots == b.roots);
}

TEST_CASE("an identically vanishing l1 has no roots") {
  cmcore::ModelSpec m;
  m.lin = {0.0, -1.0, std::numbers::pi / 2.0};
  const auto res = sweep_l1_zeros(m, SweepParam::parse("B"), -1.5, -0.8, 20);
  CHECK(res.roots.empty());
  CHECK(res.point_errors.empty());
}

TEST_CASE("sweep over B re-solves A and keeps a Hopf point") {
  auto m = bautin_template();
  m.set_coeff(1, 1, 1.0);
  const double v = l1_at(m, SweepParam::parse("B"), -1.3);
  CHECK(std::isfinite(v));
}

TEST_CASE("malformed sweep ranges are argument errors") {
  const auto m = bautin_template();
  CHECK(kind_of([&] { sweep_l1_zeros(m, SweepParam{}, 1.0, -1.0, 10); }) ==
        ErrorKind::InvalidArgument);
  CHECK(kind_of([&] { sweep_l1_zeros(m, SweepParam{}, -1.0, 1.0, 1); }) ==
        ErrorKind::InvalidArgument);
  CHECK(kind_of([&] { sweep_l1_zeros(m, SweepParam{}, -1.0, 1.0, 10, 0); }) ==
        ErrorKind::InvalidArgument);
}

TEST_CASE("analyze on a Bautin model is clean and consistent") {
  auto m = bautin_template();
  m.set_coeff(1, 1, oracle::bautin_c1());
  const auto rep = analyze(m);
  CHECK(rep.warnings.empty());
  CHECK(rep.audit.ok);
  CHECK(std::abs(rep.l1) < 1e-9);
  REQUIRE(rep.oracle.has_value());
  CHECK(rep.oracle->gap_to_closed_form <= 1e-6);
  CHECK(rep.biorthogonality_error <= 1e-12);
  for (int i = 0; i < 3; ++i) CHECK(std::abs(rep.psi2_pairings[i]) <= 1e-10);
  CHECK(rep.reduced.coeff(2, 1) == rep.third.g21);
  CHECK(rep.timing_seconds.count("total") == 1);
}

TEST_CASE("analyze of a linear model gives zero coefficients and l1") {
  cmcore::ModelSpec m;
  m.lin = {0.0, -1.0, std::numbers::pi / 2.0};
  const auto rep = analyze(m);
  CHECK(rep.l1 == 0.0);
  CHECK(std::abs(rep.third.w21_0) == 0.0);
  for (const auto& [key, g] : rep.reduced.g) CHECK(std::abs(g) == 0.0);
}
