#include <numbers>
#include <random>

#include "cmdde/chareq.hpp"
#include "cmdde/errors.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace cmdde;
using namespace cmdde::chareq;

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

}  // namespace

TEST_CASE("Hopf parameter for B = -1, r = pi/2 is A = 0, omega = 1") {
  const auto hp = find_hopf_parameter(-1.0, std::numbers::pi / 2.0, 0.9);
  CHECK(std::abs(hp.A) < 1e-12);
  CHECK(hp.hopf.omega == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(hp.hopf.residual <= 1e-12);
  CHECK(hp.hopf.simple);
}

TEST_CASE("Hopf search failures carry their error names") {
  CHECK(kind_of([] { find_hopf_parameter(0.0, 1.0, 1.0); }) == ErrorKind::NoHopf);
  CHECK(kind_of([] { find_hopf_parameter(-1.0, 1.0, -1.0); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] { find_hopf_parameter(-1.0, 0.0, 1.0); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("verify_hopf accepts a true crossing and rejects a perturbed one") {
  const LinearPart lin{0.0, -1.0, std::numbers::pi / 2.0};
  const auto hp = verify_hopf(lin, 1.0);
  CHECK(hp.residual < 1e-15);
  CHECK(hp.simple);
  CHECK(kind_of([&] { verify_hopf(LinearPart{0.1, -1.0, std::numbers::pi / 2.0}, 1.0); }) ==
        ErrorKind::NotHopfPoint);
}

TEST_CASE("property: random Hopf constructions are found by Newton from a nearby guess") {
  std::mt19937_64 rng(31337);
  for (int trial = 0; trial < 50; ++trial) {
    const auto h = oracle::random_hopf_model(rng);
    const auto& lin = h.model.lin;
    const auto hp = find_hopf_parameter(lin.B, lin.r, h.omega * 1.02);
    CHECK(hp.A == doctest::Approx(lin.A).epsilon(1e-10));
    CHECK(hp.hopf.omega == doctest::Approx(h.omega).epsilon(1e-10));
    CHECK(std::abs(char_value(lin, Complex{0.0, h.omega})) < 1e-12);
  }
}

TEST_CASE("char_derivative matches a central difference") {
  const LinearPart lin{-0.3, -1.2, 1.1};
  const Complex z{0.2, 0.9};
  const double h = 1e-5;
  const Complex fd = (char_value(lin, z + h) - char_value(lin, z - h)) / (2.0 * h);
  CHECK(std::abs(fd - char_derivative(lin, z)) < 1e-9);
}

TEST_CASE("find_root_near converges to a root off the imaginary axis") {
  const LinearPart lin{0.1, -1.0, std::numbers::pi / 2.0};
  const Complex z = find_root_near(lin, Complex{0.05, 1.0});
  CHECK(std::abs(char_value(lin, z)) < 1e-13);
  CHECK(z.real() > 0.0);
}

TEST_CASE("root counts agree with the sampled-argument oracle") {
  const LinearPart lin{0.0, -1.0, std::numbers::pi / 2.0};
  CHECK(count_roots_rect(lin, Rect{-0.2, 0.3, -2.0, 2.0}) == 2);
  CHECK(count_roots_rect(lin, Rect{-0.2, 0.3, 0.5, 2.0}) == 1);
  CHECK(oracle::winding_count(lin, -0.2, 0.3, -2.0, 2.0) == 2);

  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 20; ++trial) {
    const LinearPart l{u(rng), u(rng), 0.5 + std::abs(u(rng))};
    const double re0 = -2.0 - std::abs(u(rng));
    const double re1 = 1.0 + std::abs(u(rng));
    int expected = 0;
    try {
      expected = oracle::winding_count(l, re0, re1, -15.0, 15.0, 40000);
    } catch (...) {
      continue;
    }
    try {
      CHECK(count_roots_rect(l, Rect{re0, re1, -15.0, 15.0}) == expected);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::RootOnContour);
    }
  }
}

TEST_CASE("a root on the contour is reported, not miscounted") {
  const LinearPart lin{0.0, -1.0, std::numbers::pi / 2.0};
  CHECK(kind_of([&] { count_roots_rect(lin, Rect{0.0, 0.3, -2.0, 2.0}); }) ==
        ErrorKind::RootOnContour);
  CHECK(kind_of([&] { count_roots_rect(lin, Rect{0.3, 0.0, -2.0, 2.0}); }) ==
        ErrorKind::InvalidArgument);
}

TEST_CASE("spectrum audit finds exactly the critical pair at a stable Hopf point") {
  const LinearPart lin{0.0, -1.0, std::numbers::pi / 2.0};
  const auto audit = audit_spectrum(lin, 1.0);
  CHECK(audit.count == 2);
  CHECK(audit.ok);
  // With |B| > 5 a second pair has crossed into the right half plane.
  const auto unstable = audit_spectrum(LinearPart{0.0, -6.0, std::numbers::pi / 2.0}, 1.0);
  CHECK(unstable.count == 4);
  CHECK_FALSE(unstable.ok);
}
