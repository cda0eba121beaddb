#pragma once

// Exact algebra for exponential polynomials: finite sums of c * s^k * e^{rate*s}
// on a closed interval. Every function handled by the library (eigenfunctions,
// adjoint eigenfunctions, center-manifold coefficient profiles, the resonant
// weights) lives in this representation so that products, shifts and
// definite integrals stay in closed form.

#include <complex>
#include <span>
#include <vector>

namespace cmdde {

using Complex = std::complex<double>;

inline constexpr Complex kI{0.0, 1.0};

namespace funcalg {

inline constexpr int kMaxDegree = 4;
inline constexpr double kMergeRateTol = 1e-14;

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi - lo; }
  bool contains(double s) const;
  bool same_as(const Interval& other) const;
};

class ExpMonomial {
 public:
  ExpMonomial(Complex coeff, Complex rate, int degree = 0);

  Complex coeff() const { return coeff_; }
  Complex rate() const { return rate_; }
  int degree() const { return degree_; }

  Complex operator()(double s) const;

 private:
  Complex coeff_;
  Complex rate_;
  int degree_;
};

class ExpPoly {
 public:
  explicit ExpPoly(Interval domain);
  ExpPoly(Interval domain, std::span<const ExpMonomial> terms);

  static ExpPoly monomial(Interval domain, Complex coeff, Complex rate,
                          int degree = 0);

  const Interval& domain() const { return domain_; }
  std::span<const ExpMonomial> terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  // Adds a term, merging with an existing term of equal (rate, degree).
  void add_term(const ExpMonomial& term);

  // Throws Domain error when s is outside the interval.
  Complex operator()(double s) const;

  // Largest |coeff| among stored terms; 0 for the zero function.
  double max_abs_coeff() const;

 private:
  Interval domain_;
  std::vector<ExpMonomial> terms_;
};

Complex eval(const ExpPoly& p, double s);

/// Definite integral over [a, b] in closed form.
Complex integrate(const ExpPoly& p, double a, double b);

ExpPoly conjugate(const ExpPoly& p);
ExpPoly add(const ExpPoly& p, const ExpPoly& q);
ExpPoly scale(const ExpPoly& p, Complex c);
ExpPoly multiply(const ExpPoly& p, const ExpPoly& q);
ExpPoly derivative(const ExpPoly& p);

/// Returns s -> p(s + delta), defined on domain(p) - delta.
ExpPoly shift_argument(const ExpPoly& p, double delta);

// Same function, reinterpreted on a sub- or super-interval.
ExpPoly with_domain(const ExpPoly& p, Interval domain);

ExpPoly operator+(const ExpPoly& p, const ExpPoly& q);
ExpPoly operator-(const ExpPoly& p, const ExpPoly& q);
ExpPoly operator*(const ExpPoly& p, const ExpPoly& q);
ExpPoly operator*(Complex c, const ExpPoly& p);

/// Solves w'(s) = kappa * w(s) + forcing(s), w(0) = initial, in closed form.
/// Forcing terms whose rate coincides with kappa (within resonance_tol) raise
/// the polynomial degree by one, which is how secular terms s*e^{kappa s}
/// appear. The domain of the result is that of the forcing, which must
/// contain 0.
ExpPoly solve_linear_ode(Complex kappa, const ExpPoly& forcing,
                         Complex initial, double resonance_tol = 1e-12);

/// Value at s of the solution of w' = kappa w + forcing with w(0) = 0,
/// evaluated as e^{kappa s} int_0^s e^{-kappa t} forcing(t) dt so that nearly
/// resonant rates lose no accuracy.
Complex linear_ode_particular_at(Complex kappa, const ExpPoly& forcing, double s);

// Scalar primitives shared by the closed-form integrals.

/// (e^z - 1) computed without cancellation for small |z|.
Complex expm1(Complex z);

/// (e^z - 1) / z, equal to 1 at z = 0.
Complex expm1_ratio(Complex z);

/// int_a^b s^degree e^{rate s} ds for any nonnegative degree.
Complex integrate_monomial(Complex rate, int degree, double a, double b);

/// int_a^b p(s) * (e^{delta s} - 1)/delta ds, stable as delta -> 0 (where the
/// weight tends to s).
Complex integrate_expm1_weighted(const ExpPoly& p, Complex delta, double a,
                                 double b);

/// p(s) * (e^{delta s} - 1)/delta.
Complex eval_expm1_weighted(const ExpPoly& p, Complex delta, double s);

}  // namespace funcalg
}  // namespace cmdde
