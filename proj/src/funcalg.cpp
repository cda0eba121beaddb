#include "cmdde/funcalg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "cmdde/errors.hpp"

namespace cmdde::funcalg {

namespace {

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

double binomial(int n, int k) {
  double b = 1.0;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

bool same_rate(Complex a, Complex b) {
  return std::abs(a - b) <= kMergeRateTol * std::max(1.0, std::abs(a));
}

// phi_n(z) = sum_{m>=0} z^m / (m+n)!, for n = 0..n_max.
std::vector<Complex> phi_functions(int n_max, Complex z) {
  std::vector<Complex> phi(n_max + 1);
  const double az = std::abs(z);
  // Upward recurrence from e^z while |z| dominates the index, power series
  // beyond (its terms then decrease monotonically).
  int n = 0;
  if (az > 1.0) {
    phi[0] = std::exp(z);
    double inv_fact = 1.0;  // 1/(n-1)!
    for (n = 1; n <= n_max && n < az; ++n) {
      phi[n] = (phi[n - 1] - inv_fact) / z;
      inv_fact /= n;
    }
  }
  for (; n <= n_max; ++n) {
    Complex term = 1.0 / factorial(n);
    Complex sum = term;
    for (int m = 1; m < 200; ++m) {
      term *= z / double(m + n);
      sum += term;
      if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
    }
    phi[n] = sum;
  }
  return phi;
}

}  // namespace

bool Interval::contains(double s) const {
  const double tol = 1e-12 * std::max({1.0, std::abs(lo), std::abs(hi)});
  return s >= lo - tol && s <= hi + tol;
}

bool Interval::same_as(const Interval& other) const {
  const double tol = 1e-12 * std::max({1.0, std::abs(lo), std::abs(hi)});
  return std::abs(lo - other.lo) <= tol && std::abs(hi - other.hi) <= tol;
}

ExpMonomial::ExpMonomial(Complex coeff, Complex rate, int degree)
    : coeff_(coeff), rate_(rate), degree_(degree) {
  if (!finite(coeff) || !finite(rate)) {
    throw Error(ErrorKind::InvalidArgument, "exp-monomial: non-finite coefficient or rate");
  }
  if (degree < 0 || degree > kMaxDegree) {
    std::ostringstream os;
    os << "exp-monomial: degree " << degree << " outside [0, " << kMaxDegree << "]";
    throw Error(ErrorKind::InvalidArgument, os.str());
  }
}

Complex ExpMonomial::operator()(double s) const {
  double power = 1.0;
  for (int i = 0; i < degree_; ++i) power *= s;
  return coeff_ * power * std::exp(rate_ * s);
}

ExpPoly::ExpPoly(Interval domain) : domain_(domain) {
  if (!(domain.lo <= domain.hi) || !std::isfinite(domain.lo) || !std::isfinite(domain.hi)) {
    throw Error(ErrorKind::InvalidArgument, "exp-poly: invalid domain");
  }
}

ExpPoly::ExpPoly(Interval domain, std::span<const ExpMonomial> terms) : ExpPoly(domain) {
  for (const auto& t : terms) add_term(t);
}

ExpPoly ExpPoly::monomial(Interval domain, Complex coeff, Complex rate, int degree) {
  ExpPoly p(domain);
  p.add_term(ExpMonomial(coeff, rate, degree));
  return p;
}

void ExpPoly::add_term(const ExpMonomial& term) {
  if (term.coeff() == Complex{}) return;
  for (auto it = terms_.begin(); it != terms_.end(); ++it) {
    if (it->degree() == term.degree() && same_rate(it->rate(), term.rate())) {
      const Complex merged = it->coeff() + term.coeff();
      if (merged == Complex{}) {
        terms_.erase(it);
      } else {
        *it = ExpMonomial(merged, it->rate(), it->degree());
      }
      return;
    }
  }
  terms_.push_back(term);
}

Complex ExpPoly::operator()(double s) const {
  if (!domain_.contains(s)) {
    std::ostringstream os;
    os << "exp-poly: evaluation point " << s << " outside [" << domain_.lo << ", "
       << domain_.hi << "]";
    throw Error(ErrorKind::Domain, os.str());
  }
  Complex sum{};
  for (const auto& t : terms_) sum += t(s);
  return sum;
}

double ExpPoly::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& t : terms_) m = std::max(m, std::abs(t.coeff()));
  return m;
}

Complex eval(const ExpPoly& p, double s) { return p(s); }

Complex integrate_monomial(Complex rate, int degree, double a, double b) {
  if (a == b) return {};
  if (a > b) return -integrate_monomial(rate, degree, b, a);
  const double h = b - a;
  if (std::abs(rate) * h <= 1e-12) {
    const int n = degree + 1;
    return (std::pow(b, n) - std::pow(a, n)) / double(n);
  }
  // Expand about the endpoint closest to zero: s = c + sigma*t, t in [0, h],
  // using int_0^1 u^j e^{z u} du = j! e^z phi_{j+1}(-z).
  const bool from_a = std::abs(a) <= std::abs(b);
  const double c = from_a ? a : b;
  const double far = from_a ? b : a;
  const double sigma = from_a ? 1.0 : -1.0;
  const auto phi = phi_functions(degree + 1, -sigma * rate * h);
  Complex sum{};
  double h_pow = h;  // h^{j+1}
  double sigma_pow = 1.0;
  for (int j = 0; j <= degree; ++j) {
    const double weight = binomial(degree, j) * std::pow(c, degree - j) * sigma_pow * h_pow *
                          factorial(j);
    sum += weight * phi[j + 1];
    h_pow *= h;
    sigma_pow *= sigma;
  }
  return std::exp(rate * far) * sum;
}

Complex integrate(const ExpPoly& p, double a, double b) {
  if (!p.domain().contains(a) || !p.domain().contains(b)) {
    throw Error(ErrorKind::Domain, "integrate: limits outside the function domain");
  }
  Complex sum{};
  for (const auto& t : p.terms()) {
    sum += t.coeff() * integrate_monomial(t.rate(), t.degree(), a, b);
  }
  return sum;
}

ExpPoly conjugate(const ExpPoly& p) {
  ExpPoly out(p.domain());
  for (const auto& t : p.terms()) {
    out.add_term(ExpMonomial(std::conj(t.coeff()), std::conj(t.rate()), t.degree()));
  }
  return out;
}

ExpPoly add(const ExpPoly& p, const ExpPoly& q) {
  if (!p.domain().same_as(q.domain())) {
    throw Error(ErrorKind::Domain, "add: domain mismatch");
  }
  ExpPoly out = p;
  for (const auto& t : q.terms()) out.add_term(t);
  return out;
}

ExpPoly scale(const ExpPoly& p, Complex c) {
  ExpPoly out(p.domain());
  if (c == Complex{}) return out;
  for (const auto& t : p.terms()) out.add_term(ExpMonomial(c * t.coeff(), t.rate(), t.degree()));
  return out;
}

ExpPoly multiply(const ExpPoly& p, const ExpPoly& q) {
  if (!p.domain().same_as(q.domain())) {
    throw Error(ErrorKind::Domain, "multiply: domain mismatch");
  }
  ExpPoly out(p.domain());
  for (const auto& s : p.terms()) {
    for (const auto& t : q.terms()) {
      out.add_term(ExpMonomial(s.coeff() * t.coeff(), s.rate() + t.rate(),
                               s.degree() + t.degree()));
    }
  }
  return out;
}

ExpPoly derivative(const ExpPoly& p) {
  ExpPoly out(p.domain());
  for (const auto& t : p.terms()) {
    out.add_term(ExpMonomial(t.coeff() * t.rate(), t.rate(), t.degree()));
    if (t.degree() > 0) {
      out.add_term(ExpMonomial(t.coeff() * double(t.degree()), t.rate(), t.degree() - 1));
    }
  }
  return out;
}

ExpPoly shift_argument(const ExpPoly& p, double delta) {
  ExpPoly out(Interval{p.domain().lo - delta, p.domain().hi - delta});
  for (const auto& t : p.terms()) {
    const Complex base = t.coeff() * std::exp(t.rate() * delta);
    for (int j = 0; j <= t.degree(); ++j) {
      const double w = binomial(t.degree(), j) * std::pow(delta, t.degree() - j);
      if (w != 0.0) out.add_term(ExpMonomial(base * w, t.rate(), j));
    }
  }
  return out;
}

ExpPoly with_domain(const ExpPoly& p, Interval domain) {
  return ExpPoly(domain, p.terms());
}

ExpPoly operator+(const ExpPoly& p, const ExpPoly& q) { return add(p, q); }
ExpPoly operator-(const ExpPoly& p, const ExpPoly& q) { return add(p, scale(q, -1.0)); }
ExpPoly operator*(const ExpPoly& p, const ExpPoly& q) { return multiply(p, q); }
ExpPoly operator*(Complex c, const ExpPoly& p) { return scale(p, c); }

ExpPoly solve_linear_ode(Complex kappa, const ExpPoly& forcing, Complex initial,
                         double resonance_tol) {
  if (!forcing.domain().contains(0.0)) {
    throw Error(ErrorKind::Domain, "solve_linear_ode: domain must contain 0");
  }
  ExpPoly out(forcing.domain());
  Complex at_zero{};
  for (const auto& t : forcing.terms()) {
    const Complex d = t.rate() - kappa;
    const int k = t.degree();
    if (std::abs(d) <= resonance_tol * (1.0 + std::abs(kappa))) {
      // Secular term: c s^{k+1}/(k+1) e^{kappa s}, vanishing at 0.
      out.add_term(ExpMonomial(t.coeff() / double(k + 1), kappa, k + 1));
      continue;
    }
    // Particular solution e^{rate s} sum_j a_j s^j.
    std::array<Complex, kMaxDegree + 1> a{};
    a[k] = t.coeff() / d;
    for (int j = k - 1; j >= 0; --j) a[j] = -double(j + 1) * a[j + 1] / d;
    for (int j = 0; j <= k; ++j) out.add_term(ExpMonomial(a[j], t.rate(), j));
    at_zero += a[0];
  }
  out.add_term(ExpMonomial(initial - at_zero, kappa, 0));
  return out;
}

Complex linear_ode_particular_at(Complex kappa, const ExpPoly& forcing, double s) {
  if (!forcing.domain().contains(0.0) || !forcing.domain().contains(s)) {
    throw Error(ErrorKind::Domain, "linear_ode_particular_at: point outside the domain");
  }
  Complex sum{};
  for (const auto& t : forcing.terms()) {
    sum += t.coeff() * integrate_monomial(t.rate() - kappa, t.degree(), 0.0, s);
  }
  return std::exp(kappa * s) * sum;
}

Complex expm1(Complex z) {
  const double x = z.real();
  const double y = z.imag();
  const double s = std::sin(0.5 * y);
  return {std::expm1(x) * std::cos(y) - 2.0 * s * s, std::exp(x) * std::sin(y)};
}

Complex expm1_ratio(Complex z) {
  if (std::abs(z) < 1e-9) return 1.0 + 0.5 * z;
  return expm1(z) / z;
}

Complex integrate_expm1_weighted(const ExpPoly& p, Complex delta, double a, double b) {
  if (!p.domain().contains(a) || !p.domain().contains(b)) {
    throw Error(ErrorKind::Domain, "integrate_expm1_weighted: limits outside the domain");
  }
  const double reach = std::max(std::abs(a), std::abs(b));
  Complex total{};
  for (const auto& t : p.terms()) {
    Complex value{};
    if (std::abs(delta) * reach <= 0.5) {
      // (e^{ds}-1)/d = sum_m d^m s^{m+1}/(m+1)!
      Complex dm = 1.0;
      double inv_fact = 1.0;
      for (int m = 0; m < 80; ++m) {
        inv_fact /= double(m + 1);
        const Complex term =
            dm * inv_fact * integrate_monomial(t.rate(), t.degree() + m + 1, a, b);
        value += term;
        if (m > 0 && std::abs(term) <= 1e-18 * std::abs(value)) break;
        dm *= delta;
        if (dm == Complex{}) break;
      }
    } else {
      value = (integrate_monomial(t.rate() + delta, t.degree(), a, b) -
               integrate_monomial(t.rate(), t.degree(), a, b)) /
              delta;
    }
    total += t.coeff() * value;
  }
  return total;
}

Complex eval_expm1_weighted(const ExpPoly& p, Complex delta, double s) {
  return p(s) * s * expm1_ratio(delta * s);
}

}  // namespace cmdde::funcalg
