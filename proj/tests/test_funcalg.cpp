#include <random>

#include "cmdde/errors.hpp"
#include "cmdde/funcalg.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace cmdde;
using namespace cmdde::funcalg;

namespace {

ExpPoly random_poly(std::mt19937_64& rng, Interval dom, int max_terms = 4) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::uniform_int_distribution<int> nt(1, max_terms);
  std::uniform_int_distribution<int> deg(0, 2);
  ExpPoly p(dom);
  const int n = nt(rng);
  for (int i = 0; i < n; ++i) {
    p.add_term(ExpMonomial({u(rng), u(rng)}, {u(rng), 3.0 * u(rng)}, deg(rng)));
  }
  return p;
}

}  // namespace

TEST_CASE("monomial integrals match quadrature for every degree") {
  for (int d = 0; d <= kMaxDegree; ++d) {
    for (Complex rate : {Complex{0, 0}, Complex{1e-9, 0}, Complex{0.3, 2.0}, Complex{-1.5, -4.0},
                         Complex{0.0, 1.0}}) {
      const auto f = [&](double s) { return std::pow(s, d) * std::exp(rate * s); };
      const Complex exact = integrate_monomial(rate, d, -1.7, 0.4);
      const Complex ref = oracle::simpson(f, -1.7, 0.4);
      CHECK(oracle::rel_err(exact, ref) < 1e-11);
    }
  }
}

TEST_CASE("monomial integral over an interval not containing zero") {
  const Complex rate{0.2, 1.1};
  for (int d = 0; d <= 3; ++d) {
    const auto f = [&](double s) { return std::pow(s, d) * std::exp(rate * s); };
    CHECK(oracle::rel_err(integrate_monomial(rate, d, 1.0, 2.5), oracle::simpson(f, 1.0, 2.5)) <
          1e-11);
  }
}

TEST_CASE("expm1 and its ratio stay accurate near zero") {
  const Complex z{1e-10, -2e-10};
  CHECK(std::abs(expm1(z) - z) < 1e-19);
  CHECK(std::abs(expm1_ratio(Complex{0, 0}) - 1.0) == 0.0);
  CHECK(std::abs(expm1_ratio(Complex{2.0, 0.0}) - (std::exp(2.0) - 1.0) / 2.0) < 1e-14);
}

TEST_CASE("property: closed-form integral, product and derivative agree with pointwise oracles") {
  std::mt19937_64 rng(20240611);
  const Interval dom{-1.3, 0.0};
  for (int trial = 0; trial < 100; ++trial) {
    const ExpPoly p = random_poly(rng, dom);
    const ExpPoly q = random_poly(rng, dom);
    CHECK(oracle::rel_err(integrate(p, dom.lo, dom.hi), oracle::integrate(p, dom.lo, dom.hi)) <
          1e-10);

    const ExpPoly pq = p * q;
    const ExpPoly dp = derivative(p);
    for (double s : {-1.2, -0.7, -0.1}) {
      CHECK(oracle::rel_err(pq(s), p(s) * q(s)) < 1e-12);
      const double h = 1e-4;
      const Complex fd = (-p(s + 2 * h) + 8.0 * p(s + h) - 8.0 * p(s - h) + p(s - 2 * h)) / (12 * h);
      CHECK(oracle::rel_err(dp(s), fd) < 1e-7);
      CHECK(oracle::rel_err(conjugate(p)(s), std::conj(p(s))) < 1e-15);
      CHECK(oracle::rel_err((p - q)(s), p(s) - q(s)) < 1e-13);
    }
  }
}

TEST_CASE("property: shift_argument moves the domain and evaluates at s + delta") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const ExpPoly p = random_poly(rng, Interval{0.0, 1.5});
    const ExpPoly q = shift_argument(p, 1.5);
    CHECK(q.domain().lo == doctest::Approx(-1.5));
    CHECK(q.domain().hi == doctest::Approx(0.0));
    for (double s : {-1.4, -0.6, 0.0}) CHECK(oracle::rel_err(q(s), p(s + 1.5)) < 1e-12);
  }
}

TEST_CASE("property: solve_linear_ode satisfies the equation and the initial value") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  const Interval dom{-1.0, 0.0};
  for (int trial = 0; trial < 60; ++trial) {
    const ExpPoly forcing = random_poly(rng, dom, 3);
    // Every fourth case is resonant with the first forcing rate.
    const Complex kappa =
        trial % 4 == 0 ? forcing.terms()[0].rate() : Complex{u(rng), 3.0 * u(rng)};
    const Complex w0{u(rng), u(rng)};
    const ExpPoly w = solve_linear_ode(kappa, forcing, w0);
    CHECK(oracle::rel_err(w(0.0), w0) < 1e-13);
    for (double s : {-0.8, -0.5, -0.2}) {
      CHECK(oracle::ode_residual(w, kappa, forcing, s) < 1e-7 * (1.0 + std::abs(w(s))));
    }
    const Complex part = linear_ode_particular_at(kappa, forcing, -1.0);
    CHECK(oracle::rel_err(part, w(-1.0) - std::exp(-kappa) * w0) < 1e-11);
  }
}

TEST_CASE("particular solution is exact for nearly resonant rates") {
  const Interval dom{-2.0, 0.0};
  const ExpPoly forcing = ExpPoly::monomial(dom, 1.0, Complex{1e-9, 1.0});
  const Complex kappa{0.0, 1.0};
  const auto integrand = [&](double t) { return std::exp(-kappa * t) * forcing(t); };
  const Complex ref = std::exp(-2.0 * kappa) * oracle::simpson(integrand, 0.0, -2.0);
  CHECK(oracle::rel_err(linear_ode_particular_at(kappa, forcing, -2.0), ref) < 1e-12);
}

TEST_CASE("property: expm1-weighted integrals match quadrature as delta shrinks") {
  std::mt19937_64 rng(5);
  const Interval dom{0.0, 1.2};
  for (int trial = 0; trial < 30; ++trial) {
    const ExpPoly p = random_poly(rng, dom, 2);
    for (Complex delta : {Complex{0.5, 0.2}, Complex{1e-4, 0}, Complex{1e-9, 1e-9}, Complex{0, 0}}) {
      const auto f = [&](double s) {
        const Complex wgt = std::abs(delta) == 0.0 ? Complex{s, 0} : expm1(delta * s) / delta;
        return p(s) * wgt;
      };
      CHECK(oracle::rel_err(integrate_expm1_weighted(p, delta, 0.0, 1.2), oracle::simpson(f, 0.0, 1.2)) <
            1e-10);
      CHECK(oracle::rel_err(eval_expm1_weighted(p, delta, 0.7), f(0.7)) < 1e-12);
    }
  }
}

TEST_CASE("add_term merges equal rates and evaluation outside the domain is rejected") {
  ExpPoly p(Interval{-1.0, 0.0});
  p.add_term(ExpMonomial(1.0, Complex{0, 1}));
  p.add_term(ExpMonomial(2.0, Complex{0, 1}));
  CHECK(p.terms().size() == 1);
  CHECK(std::abs(p.terms()[0].coeff() - 3.0) < 1e-15);
  p.add_term(ExpMonomial(-3.0, Complex{0, 1}));
  CHECK(p.is_zero());
  CHECK_THROWS_AS(p(0.5), Error);
  try {
    p(0.5);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Domain);
  }
}
