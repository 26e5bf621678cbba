#include "imbessel/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/bernoulli.hpp>

#include "imbessel/bounds.hpp"
#include "imbessel/errors.hpp"

namespace imbessel::oracle {
namespace {

template <typename Real>
constexpr int working_digits() {
  return std::numeric_limits<Real>::digits10;
}

// Fifteen guard digits absorb the loss in Stirling's series, the shift product
// and ordinary summation.
template <typename Real>
constexpr int guaranteed_digits() {
  return working_digits<Real>() - 15;
}

template <typename Real>
Real pow10(int e) {
  return boost::multiprecision::pow(Real(10), e);
}

template <typename Real>
Real pi() {
  return boost::math::constants::pi<Real>();
}

template <typename Real>
int digits_lost(const Real& largest_term, const Real& result) {
  using boost::multiprecision::log10;
  if (result == 0) return guaranteed_digits<Real>();
  const Real ratio = largest_term / result;
  if (ratio <= 1) return 0;
  return static_cast<int>(std::ceil(static_cast<double>(log10(ratio))));
}

// ln Γ(w) for Re w >= working digits.  At that distance from the origin the
// smallest term of the asymptotic series is about exp(-2π|w|), far below the
// working precision, so the series is cut where terms fall under it.
template <typename Real>
Complex<Real> log_gamma_stirling(const Complex<Real>& w) {
  using boost::multiprecision::abs;
  using boost::multiprecision::log;
  const Real threshold = pow10<Real>(-(working_digits<Real>() + 5));
  Complex<Real> result = (w - Real(0.5)) * log(w) - w + log(2 * pi<Real>()) / 2;
  const Complex<Real> w2 = w * w;
  Complex<Real> w_power = w;  // w^{2k-1}
  for (int k = 1; k < 400; ++k) {
    const Real b2k = boost::math::bernoulli_b2n<Real>(k);
    const Complex<Real> term = b2k / (Real(2 * k) * Real(2 * k - 1) * w_power);
    result += term;
    if (abs(term) < threshold) break;
    w_power *= w2;
  }
  return result;
}

template <typename Real>
struct ComplexSeries {
  Complex<Real> sum;
  Complex<Real> x_derivative;  // d/dx of sum(u(x))
  Real largest_term;
};

// Σ_n s^n u^n / (n! (1+iν)_n), s = -1 (J) or +1 (I), u = (x/2)^2.
template <typename Real>
ComplexSeries<Real> pochhammer_series(Kind kind, double nu, double x) {
  using boost::multiprecision::abs;
  int min_terms = 0;
  try {
    min_terms = 2 * required_terms(nu, x, 1e-40);
  } catch (const ToleranceError&) {
    min_terms = 0;  // fall back on the convergence test alone
  }

  const Real half = Real(x) / 2;
  const Real u = half * half;
  const Real sign = kind == Kind::Oscillatory ? Real(-1) : Real(1);
  const Complex<Real> inu(Real(0), Real(nu));
  const Real threshold = pow10<Real>(-(working_digits<Real>() + 5));

  ComplexSeries<Real> s{Complex<Real>(1), Complex<Real>(0), Real(1)};
  Complex<Real> term(1);
  Real largest_derivative_term = 0;
  for (int n = 1; n < 100000; ++n) {
    term *= sign * u / (Real(n) * (Real(n) + inu));
    s.sum += term;
    const Complex<Real> dterm = term * Real(2 * n) / Real(x);
    s.x_derivative += dterm;
    s.largest_term = std::max(s.largest_term, Real(abs(term)));
    largest_derivative_term = std::max(largest_derivative_term, Real(abs(dterm)));
    if (n >= min_terms && Real(n) * Real(n) > 2 * u && abs(term) < threshold * abs(s.sum) &&
        abs(dterm) < threshold * (abs(s.x_derivative) + abs(s.sum)))
      break;
  }
  s.largest_term = std::max(s.largest_term, largest_derivative_term);
  return s;
}

template <typename Real>
void check_point(double nu, double x) {
  if (!std::isfinite(nu)) throw DomainError("nu must be finite");
  if (!std::isfinite(x) || !(x > 0)) throw DomainError("x must be > 0");
}

// Gauss-Legendre nodes and weights on [-1, 1], computed once per precision.
template <typename Real>
struct GaussLegendre {
  static constexpr int kOrder = 24;
  std::array<Real, kOrder> nodes;
  std::array<Real, kOrder> weights;

  GaussLegendre() {
    using boost::multiprecision::abs;
    using boost::multiprecision::cos;
    const Real tol = pow10<Real>(-(working_digits<Real>() + 2));
    for (int i = 0; i < kOrder; ++i) {
      Real z = cos(pi<Real>() * (Real(i) + Real(0.75)) / (Real(kOrder) + Real(0.5)));
      Real dp = 0;
      for (int iter = 0; iter < 100; ++iter) {
        Real p0 = 1, p1 = z;
        for (int k = 2; k <= kOrder; ++k) {
          const Real p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = kOrder * (z * p1 - p0) / (z * z - 1);
        const Real step = p1 / dp;
        z -= step;
        if (abs(step) < tol) break;
      }
      // Refresh the derivative at the converged node.
      Real p0 = 1, p1 = z;
      for (int k = 2; k <= kOrder; ++k) {
        const Real p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = kOrder * (z * p1 - p0) / (z * z - 1);
      nodes[i] = z;
      weights[i] = 2 / ((1 - z * z) * dp * dp);
    }
  }

  template <typename F>
  Real integrate(const F& f, const Real& a, const Real& b) const {
    const Real mid = (a + b) / 2;
    const Real half = (b - a) / 2;
    Real sum = 0;
    for (int i = 0; i < kOrder; ++i) sum += weights[i] * f(mid + half * nodes[i]);
    return sum * half;
  }
};

template <typename Real>
const GaussLegendre<Real>& gauss_legendre() {
  static const GaussLegendre<Real> rule;
  return rule;
}

template <typename Real, typename F>
Real adaptive(const F& f, const Real& a, const Real& b, const Real& whole, const Real& tol,
              int depth) {
  using boost::multiprecision::abs;
  const auto& rule = gauss_legendre<Real>();
  const Real mid = (a + b) / 2;
  const Real left = rule.integrate(f, a, mid);
  const Real right = rule.integrate(f, mid, b);
  if (abs(left + right - whole) <= tol || depth >= 30) return left + right;
  return adaptive(f, a, mid, left, tol / 2, depth + 1) +
         adaptive(f, mid, b, right, tol / 2, depth + 1);
}

}  // namespace

template <typename Real>
OracleValue<Real> hp_gamma(const Real& re, const Real& im) {
  using boost::multiprecision::exp;
  using boost::multiprecision::floor;
  if (im == 0 && re <= 0 && re == floor(re))
    throw DomainError("Gamma has a pole at nonpositive integers");

  const Complex<Real> z(re, im);
  const Real target = Real(working_digits<Real>());
  int shift = 0;
  if (re < target) shift = static_cast<int>(std::ceil(static_cast<double>(target - re)));

  Complex<Real> product(1);
  for (int m = 0; m < shift; ++m) product *= z + Real(m);
  const Complex<Real> g = exp(log_gamma_stirling<Real>(z + Real(shift))) / product;
  return {g.real(), g.imag(), guaranteed_digits<Real>()};
}

template <typename Real>
OracleValue<Real> hp_bessel_imag(double nu, double x, Kind kind) {
  using boost::multiprecision::abs;
  using boost::multiprecision::exp;
  using boost::multiprecision::log;
  check_point<Real>(nu, x);
  const ComplexSeries<Real> s = pochhammer_series<Real>(kind, nu, x);
  const Complex<Real> inu(Real(0), Real(nu));
  const Complex<Real> gamma = hp_gamma<Real>(Real(1), Real(nu)).value();
  const Complex<Real> j = exp(inu * log(Real(x) / 2)) / gamma * s.sum;
  const int digits = guaranteed_digits<Real>() - digits_lost(s.largest_term, Real(abs(s.sum)));
  return {j.real(), j.imag(), digits};
}

template <typename Real>
NormalizedPair<Real> normalized_pair(Kind kind, double nu, double x) {
  using boost::multiprecision::abs;
  using boost::multiprecision::exp;
  using boost::multiprecision::log;
  check_point<Real>(nu, x);
  const ComplexSeries<Real> s = pochhammer_series<Real>(kind, nu, x);
  const Complex<Real> inu(Real(0), Real(nu));
  const Complex<Real> gamma = hp_gamma<Real>(Real(1), Real(nu)).value();
  const Complex<Real> half_power = exp(inu * log(Real(x) / 2));  // (x/2)^{iν}

  // J = (x/2)^{iν} S / Γ(1+iν),  J' = (x/2)^{iν} (iν S / x + dS/dx) / Γ(1+iν).
  const Complex<Real> j = half_power / gamma * s.sum;
  const Complex<Real> dj = half_power / gamma * (inu * s.sum / Real(x) + s.x_derivative);

  const Complex<Real> scale = gamma * exp(inu * log(Real(2)));  // Γ(1+iν) 2^{iν}
  const Complex<Real> value = scale * j;
  const Complex<Real> derivative = scale * dj;

  const int value_digits =
      guaranteed_digits<Real>() - digits_lost(s.largest_term, Real(abs(s.sum)));
  const int derivative_digits =
      guaranteed_digits<Real>() -
      digits_lost(s.largest_term, Real(abs(inu * s.sum / Real(x) + s.x_derivative)));
  return {{value.real(), value.imag(), value_digits},
          {derivative.real(), derivative.imag(), derivative_digits}};
}

template <typename Real>
OracleValue<Real> kl_macdonald(double tau, double x) {
  using boost::multiprecision::abs;
  using boost::multiprecision::acosh;
  using boost::multiprecision::cos;
  using boost::multiprecision::cosh;
  using boost::multiprecision::exp;
  using boost::multiprecision::log;
  if (!std::isfinite(tau)) throw DomainError("tau must be finite");
  if (!std::isfinite(x) || !(x > 0)) throw DomainError("x must be > 0");
  if (x < 0.05) throw ToleranceError("Kantorovich-Lebedev quadrature is unreliable for x < 0.05");

  const Real rx(x);
  const Real rtau(tau);
  // exp(-x cosh T) <= 10^{-(digits+5)} exp(-x)
  const Real drop = log(Real(10)) * (working_digits<Real>() + 5);
  const Real upper = acosh(1 + drop / rx);
  const Real width = pi<Real>() / (4 * std::max(std::abs(tau), 1.0));
  const int panels = static_cast<int>(std::ceil(static_cast<double>(upper / width)));
  const Real step = upper / panels;

  const auto f = [&](const Real& t) { return exp(-rx * cosh(t)) * cos(rtau * t); };
  const Real scale = exp(-rx);
  const Real tol = pow10<Real>(-(working_digits<Real>() - 8)) * scale / panels;
  const auto& rule = gauss_legendre<Real>();

  Real sum = 0;
  for (int p = 0; p < panels; ++p) {
    const Real a = step * p;
    const Real b = step * (p + 1);
    sum += adaptive(f, a, b, rule.integrate(f, a, b), tol, 0);
  }
  // Digits are counted against exp(-x), the size of the integrand near t = 0.
  const int digits = guaranteed_digits<Real>() - digits_lost(scale, Real(abs(sum)));
  return {sum, Real(0), digits};
}

template <typename Real>
Real macdonald_from_series(double tau, double x) {
  using boost::multiprecision::sinh;
  if (tau == 0) throw DomainError("the series connection needs tau != 0");
  const OracleValue<Real> i = hp_bessel_imag<Real>(tau, x, Kind::Modified);
  return -pi<Real>() * i.im / sinh(Real(tau) * pi<Real>());
}

template <typename Real>
Real bessel_j_integer(int n, const Real& x) {
  using boost::multiprecision::abs;
  using boost::multiprecision::pow;
  if (n < 0) return (n % 2 == 0 ? 1 : -1) * bessel_j_integer<Real>(-n, x);
  const Real half = x / 2;
  const Real u = half * half;
  Real factorial_n = 1;
  for (int k = 2; k <= n; ++k) factorial_n *= k;
  Real term = 1 / factorial_n;
  Real sum = term;
  const Real threshold = pow10<Real>(-(working_digits<Real>() + 5));
  for (int k = 1; k < 100000; ++k) {
    term *= -u / (Real(k) * Real(n + k));
    sum += term;
    if (Real(k) * Real(k) > u && abs(term) < threshold * abs(sum)) break;
  }
  return pow(half, n) * sum;
}

std::pair<double, double> oracle_pair(Kind kind, double nu, double x) {
  const auto p = normalized_pair<Real50>(kind, nu, x);
  return {p.value.re.convert_to<double>(), p.value.im.convert_to<double>()};
}

PairErrors pair_errors(Kind kind, double nu, double x, const PairResult& computed) {
  using boost::multiprecision::abs;
  const auto p = normalized_pair<Real50>(kind, nu, x);
  const auto err = [](double got, const Real50& exact) {
    return Real50(abs(Real50(got) - exact)).convert_to<double>();
  };
  return {err(computed.cos_part, p.value.re), err(computed.sin_part, p.value.im),
          err(computed.d_cos, p.derivative.re), err(computed.d_sin, p.derivative.im)};
}

#define IMBESSEL_INSTANTIATE(Real)                                                   \
  template OracleValue<Real> hp_gamma<Real>(const Real&, const Real&);              \
  template OracleValue<Real> hp_bessel_imag<Real>(double, double, Kind);            \
  template NormalizedPair<Real> normalized_pair<Real>(Kind, double, double);        \
  template OracleValue<Real> kl_macdonald<Real>(double, double);                    \
  template Real macdonald_from_series<Real>(double, double);                        \
  template Real bessel_j_integer<Real>(int, const Real&);

IMBESSEL_INSTANTIATE(Real50)
IMBESSEL_INSTANTIATE(Real100)

#undef IMBESSEL_INSTANTIATE

}  // namespace imbessel::oracle
