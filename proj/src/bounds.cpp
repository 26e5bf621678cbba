#include "imbessel/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "imbessel/errors.hpp"

namespace imbessel {
namespace {

// Σ_{n>=2} 1/n^2 and Σ_{n>=2} 1/n^3 to four decimals.
constexpr double kZeta2Minus1 = 0.6449;
constexpr double kZeta3Minus1 = 0.2021;

// Slack applied to sums whose last digits come from lgamma/exp/log.
constexpr double kSummationSlack = 1.01;

void check_nu(double nu) {
  if (!std::isfinite(nu)) throw DomainError("nu must be finite");
}

void check_x(double x) {
  if (!std::isfinite(x)) throw DomainError("x must be finite");
  if (!(x > 0)) throw DomainError("x must be > 0");
}

void check_last(int last) {
  if (last < 1) throw DomainError("number of terms must be >= 1");
}

double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

// Σ_{n>=first} exp(log_m + |ν| ln n + ln w(n) - 2 ln n! + n ln u).
//
// The term ratio is a product of positive factors that all decrease in n, so
// once it drops below 1 the remainder after the current term is bounded by the
// geometric series term * r / (1 - r).  Summation stops once that remainder
// is below 0.1% of the partial sum; the remainder is then added, not dropped.
template <typename Weight>
double majorant_tail_sum(double nu, double x, int first, Weight weight) {
  const double abs_nu = std::abs(nu);
  const double log_m = log_m_of_nu(nu);
  const double u = (x / 2) * (x / 2);
  const double log_u = std::log(u);

  double sum = 0;
  for (int n = first;; ++n) {
    const double dn = n;
    const double log_term = log_m + abs_nu * std::log(dn) + std::log(weight(dn)) -
                            2 * log_factorial(n) + dn * log_u;
    const double term = std::exp(log_term);
    sum += term;
    if (std::isinf(sum)) return sum;

    const double ratio = std::pow((dn + 1) / dn, abs_nu) * (weight(dn + 1) / weight(dn)) *
                         u / ((dn + 1) * (dn + 1));
    if (ratio < 1) {
      const double rest = term * ratio / (1 - ratio);
      if (rest <= 1e-3 * sum || rest == 0) return (sum + rest) * kSummationSlack;
    }
    if (n - first > 1000000) break;
  }
  return std::numeric_limits<double>::infinity();
}

}  // namespace

double factor_F(double nu) {
  check_nu(nu);
  const double a = std::abs(nu);
  const double spread = std::abs(a - 1);
  if (a <= 2) return nu * nu * spread * std::exp2(1 - a);
  if (a <= 3) return a * spread * (3 * a + (a - 2) * (1 + a / 2) * std::exp2(3 - a)) / 6;
  return a * spread * (nu * nu / 2 + 3 * a - 2) / 6;
}

double log_m_of_nu(double nu) {
  check_nu(nu);
  const double a = std::abs(nu);
  return std::log1p(a) - std::log1p(nu * nu) + kZeta2Minus1 * nu * nu +
         kZeta3Minus1 * factor_F(nu);
}

double m_of_nu(double nu) {
  check_nu(nu);
  const double a = std::abs(nu);
  return (1 + a) / (1 + nu * nu) * std::exp(kZeta2Minus1 * nu * nu + kZeta3Minus1 * factor_F(nu));
}

double majorant_bound(double nu, int n) {
  check_nu(nu);
  if (n < 1) throw DomainError("majorant bound needs n >= 1");
  const double a = std::abs(nu);
  if (n <= 20) {
    double fact = 1;
    for (int k = 2; k <= n; ++k) fact *= k;
    return m_of_nu(nu) * std::pow(static_cast<double>(n), a) / (fact * fact);
  }
  return std::exp(log_m_of_nu(nu) + a * std::log(static_cast<double>(n)) - 2 * log_factorial(n));
}

double bessel_i1_upper(double x) {
  if (!(x >= 0) || !std::isfinite(x)) throw DomainError("I1 bound needs finite x >= 0");
  if (x == 0) return 0;
  const double half = x / 2;
  const double u = half * half;
  double term = half;  // k = 0
  double sum = term;
  for (int k = 0;; ++k) {
    const double ratio = u / ((k + 1.0) * (k + 2.0));
    term *= ratio;
    sum += term;
    if (std::isinf(sum)) return sum;
    const double next_ratio = u / ((k + 2.0) * (k + 3.0));
    if (next_ratio < 1) {
      const double rest = term * next_ratio / (1 - next_ratio);
      if (rest <= 1e-13 * sum) return (sum + rest) * 1.0001;
    }
  }
}

double tail_bound(double nu, double x, int last) {
  check_nu(nu);
  check_x(x);
  check_last(last);
  if (std::abs(nu) <= 2) {
    // The closed form bounds every tail from N+1 on, and tails are nested, so
    // the smaller of its values at 1 and N (it is unimodal in N) is kept.
    // This only matters for x/2 > N, where the closed form still grows.
    const double log_base = log_m_of_nu(nu) + std::log(bessel_i1_upper(x));
    const auto closed = [&](int k) {
      return std::exp(log_base + (2.0 * k + 1) * std::log(x / 2) - 2 * log_factorial(k));
    };
    return std::min(closed(1), closed(last)) * kSummationSlack;
  }
  return majorant_tail_sum(nu, x, last + 1, [](double) { return 1.0; });
}

double derivative_tail_bound(double nu, double x, int last) {
  check_nu(nu);
  check_x(x);
  check_last(last);
  const double abs_nu = std::abs(nu);
  return majorant_tail_sum(nu, x, last + 1,
                           [abs_nu](double n) { return 2 * n + abs_nu; }) /
         x;
}

namespace {

template <typename Bound>
int smallest_last(double nu, double x, double tol, Bound bound, const char* what) {
  check_nu(nu);
  check_x(x);
  if (!(tol > 0)) throw DomainError("tolerance must be > 0");
  for (int last = 1; last <= kMaxTerms; ++last)
    if (bound(nu, x, last) <= tol) return last;
  throw ToleranceError(std::string("tolerance unreachable: ") + what + " needs more than " +
                       std::to_string(kMaxTerms) + " terms");
}

}  // namespace

int required_terms(double nu, double x, double tol) {
  return smallest_last(nu, x, tol, tail_bound, "truncation bound");
}

int required_derivative_terms(double nu, double x, double tol) {
  return smallest_last(nu, x, tol, derivative_tail_bound, "derivative truncation bound");
}

BoundReport bound_report(double nu, double x, int last) {
  return {factor_F(nu), m_of_nu(nu), last, tail_bound(nu, x, last)};
}

}  // namespace imbessel
