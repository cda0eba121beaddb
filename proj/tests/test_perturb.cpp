#include <numbers>
#include <random>

#include "cmdde/errors.hpp"
#include "cmdde/perturb.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace cmdde;
using namespace cmdde::perturb;

namespace {

spectral::EigenData eigendata(const cmcore::ModelSpec& m, double omega) {
  return spectral::build_eigendata(m.lin, chareq::verify_hopf(m.lin, omega));
}

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

TEST_CASE("family names round-trip") {
  for (Family f : {Family::ScaleB, Family::ScaleBSquared, Family::ShiftA}) {
    CHECK(parse_family(family_name(f)) == f);
  }
  CHECK(kind_of([] { parse_family("scale-c"); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("perturbed problems move the critical root to the right") {
  const chareq::LinearPart lin{0.0, -1.0, std::numbers::pi / 2.0};
  for (Family f : {Family::ScaleB, Family::ScaleBSquared, Family::ShiftA}) {
    for (double eps : {1e-2, 1e-3, 1e-5}) {
      const auto p = make_perturbed(lin, 1.0, eps, f);
      CHECK(p.mu_eps > 0.0);
      CHECK(p.char_residual <= kCharResidualTol);
      CHECK(std::abs(oracle::char_fn(p.lin(), p.lambda_eps)) <= 1e-12);
    }
  }
  // scale-b keeps omega and sets mu = ln((1 + eps) * (-B sin(omega r) / omega)) / r.
  const auto p = make_perturbed(lin, 1.0, 1e-2, Family::ScaleB);
  CHECK(p.omega_eps == doctest::Approx(1.0));
  CHECK(p.mu_eps == doctest::Approx(std::log(1.01) / lin.r).epsilon(1e-12));
}

TEST_CASE("perturbed eigendata stay biorthogonal and second-order terms stay in the complement") {
  const auto m = oracle::bautin_model(oracle::bautin_c1());
  for (double eps : {1e-2, 1e-3}) {
    const auto p = make_perturbed(m.lin, 1.0, eps);
    const auto pc = perturbed_coeffs(m, p);
    CHECK(spectral::biorthogonality_error(pc.eig, p.lin()) <= 1e-12);
    for (const auto* w : {&pc.so.w20, &pc.so.w11, &pc.so.w02}) {
      CHECK(std::abs(oracle::bilinear(pc.eig.Psi2, *w, p.lin())) <= 1e-10);
      CHECK(std::abs(oracle::bilinear(pc.eig.Psi1, *w, p.lin())) <= 1e-10);
    }
  }
}

TEST_CASE("property: direct solve and the h1/h2 route agree up to the direct solve's roundoff") {
  // The direct solve divides B R1 - R2 by Delta_eps ~ mu_eps, so it carries an
  // absolute error of order eps_mach (|B R1| + |R2|) / |Delta_eps|, times the
  // cancellation already present in R1.
  std::mt19937_64 rng(1234);
  for (int trial = 0; trial < 20; ++trial) {
    const auto h = oracle::random_hopf_model(rng);
    for (double eps : {1e-2, 1e-3, 1e-4}) {
      PerturbedProblem p;
      try {
        p = make_perturbed(h.model.lin, h.omega, eps);
      } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::InconsistentFamily);
        continue;
      }
      const auto pc = perturbed_coeffs(h.model, p);
      const auto direct = solve_perturbed_w21(p, pc);
      const auto hd = h_decomposition(p, pc);
      const auto via_h = solve_perturbed_w21_h(p, pc, hd);
      const double roundoff = 1024.0 * 2.2e-16 *
                              (std::abs(p.B_eps * pc.third.R1) + std::abs(pc.third.R2)) /
                              std::abs(pc.Delta_eps);
      CHECK(std::abs(via_h.at_0 - direct.at_0) <=
            std::max(1e-9 * std::abs(direct.at_0), roundoff));
      CHECK(std::abs(pc.Delta_eps - p.mu_eps * hd.h2) <= 1e-14 * (1.0 + std::abs(hd.h2)));
    }
  }
}

TEST_CASE("direct solve and the h1/h2 route agree to 1e-9 on the Bautin models") {
  for (double c : {oracle::bautin_c1(), oracle::bautin_c2()}) {
    const auto m = oracle::bautin_model(c);
    for (double eps : {1e-2, 5e-3, 1e-3, 1e-4}) {
      const auto p = make_perturbed(m.lin, 1.0, eps);
      const auto pc = perturbed_coeffs(m, p);
      const auto direct = solve_perturbed_w21(p, pc);
      const auto via_h = solve_perturbed_w21_h(p, pc, h_decomposition(p, pc));
      CHECK(std::abs(via_h.at_0 - direct.at_0) <= 1e-9 * std::abs(direct.at_0));
      CHECK(std::abs(via_h.at_mr - direct.at_mr) <= 1e-9 * std::abs(direct.at_mr));
    }
  }
}

TEST_CASE("Neville extrapolation is exact for polynomial data") {
  const std::vector<double> x = {0.4, 0.2, 0.1, 0.05};
  std::vector<Complex> y;
  for (double t : x) y.push_back(Complex{2.0, -1.0} + 3.0 * t - Complex{0, 5} * t * t + t * t * t);
  CHECK(std::abs(neville_at_zero(x, y) - Complex{2.0, -1.0}) < 1e-12);
}

TEST_CASE("oracle reproduces the closed form for every family") {
  for (double c : {oracle::bautin_c1(), oracle::bautin_c2()}) {
    const auto m = oracle::bautin_model(c);
    const auto eig = eigendata(m, 1.0);
    Complex first{};
    for (Family f : {Family::ScaleB, Family::ScaleBSquared, Family::ShiftA}) {
      const auto ex = extrapolate_w21(m, eig, default_eps_grid(), f);
      CHECK(ex.gap_to_closed_form <= 1e-6);
      REQUIRE(ex.observed_order.has_value());
      CHECK(*ex.observed_order >= 0.9);
      CHECK(ex.h2_monotone);
      CHECK(ex.estimates_monotone);
      CHECK(std::abs(ex.h2_limit - Complex{2.0, std::numbers::pi}) < 1e-14);
      if (f == Family::ScaleB) {
        first = ex.extrapolated;
      } else {
        CHECK(std::abs(ex.extrapolated - first) <= 1e-6);
      }
    }
  }
}

TEST_CASE("linear model gives a zero gap") {
  cmcore::ModelSpec m;
  m.lin = {0.0, -1.0, std::numbers::pi / 2.0};
  const auto ex = extrapolate_w21(m, eigendata(m, 1.0), default_eps_grid());
  CHECK(ex.gap_to_closed_form == 0.0);
  CHECK(std::abs(ex.extrapolated) == 0.0);
}

TEST_CASE("grid validation") {
  const auto m = oracle::bautin_model(1.0);
  const auto eig = eigendata(m, 1.0);
  CHECK(kind_of([&] { extrapolate_w21(m, eig, {1e-2, -1e-3, 1e-4}); }) ==
        ErrorKind::InvalidArgument);
  CHECK(kind_of([&] { extrapolate_w21(m, eig, {1e-2, 1e-3}); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([&] { extrapolate_w21(m, eig, {1e-3, 1e-2, 1e-4}); }) ==
        ErrorKind::InvalidArgument);
}
