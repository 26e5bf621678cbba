#pragma once

// Residual checks shared by the unit tests and the acceptance runner.

#include <cmath>
#include <functional>
#include <utility>

#include "imbessel/kind.hpp"
#include "imbessel/lommel.hpp"
#include "imbessel/oracle.hpp"
#include "imbessel/series.hpp"

namespace imbessel::checks {

// Value and first derivative of one solution at a point.
using ValueSlope = std::function<std::pair<double, double>(double)>;

// y'' from central differences of the analytic first derivative at steps h
// and h/2, Richardson-combined so the O(h^2) truncation drops out.  Going
// through y' instead of y keeps the h^-2 amplification of rounding away.
inline double second_derivative(const ValueSlope& f, double x, double h = 1e-4) {
  const auto central = [&](double step) {
    return (f(x + step).second - f(x - step).second) / (2 * step);
  };
  return (4 * central(h / 2) - central(h)) / 3;
}

inline ValueSlope series_solution(Kind kind, double nu, bool sin_type, double tol = 1e-11) {
  return [=](double x) {
    const PairResult r = eval_pair(kind, nu, x, tol);
    return sin_type ? std::pair{r.sin_part, r.d_sin} : std::pair{r.cos_part, r.d_cos};
  };
}

// x^2 y'' + x y' + (±x^2 + ν^2) y for a solution of imaginary order.
inline double bessel_residual(Kind kind, double nu, bool sin_type, double x) {
  const ValueSlope f = series_solution(kind, nu, sin_type);
  const auto [y, dy] = f(x);
  const double d2y = second_derivative(f, x);
  const double s = kind == Kind::Oscillatory ? 1.0 : -1.0;
  return x * x * d2y + x * dy + (s * x * x + nu * nu) * y;
}

// Z and Z' for the Bessel factor of a classified equation.
using BesselFactor = std::function<std::pair<double, double>(double)>;

inline BesselFactor imaginary_factor(double nu, bool sin_type) {
  return series_solution(Kind::Oscillatory, nu, sin_type);
}

// J_n and J_n' in extended precision, rounded.
inline BesselFactor integer_factor(int n) {
  return [n](double t) {
    using oracle::Real50;
    const Real50 tt(t);
    const Real50 jn = oracle::bessel_j_integer<Real50>(n, tt);
    const Real50 jp = oracle::bessel_j_integer<Real50>(n + 1, tt);
    const Real50 jm = n == 0 ? Real50(-jp) : oracle::bessel_j_integer<Real50>(n - 1, tt);
    return std::pair{static_cast<double>(jn), static_cast<double>((jm - jp) / 2)};
  };
}

// y(x) = x^p Z(γ x^β) with its analytic derivative.
inline ValueSlope lommel_solution(const LommelSolution& sol, BesselFactor z) {
  return [sol, z](double x) {
    const double t = sol.argument(x);
    const auto [zv, zd] = z(t);
    const double p = sol.prefactor_exponent;
    const double xp = std::pow(x, p);
    const double dt = sol.gamma * sol.beta * std::pow(x, sol.beta - 1);
    return std::pair{xp * zv, p * std::pow(x, p - 1) * zv + xp * zd * dt};
  };
}

struct Residual {
  double value = 0;
  double y = 0;
};

inline Residual lommel_residual(const LommelInput& in, const ValueSlope& f, double x) {
  const auto [y, dy] = f(x);
  const double d2y = second_derivative(f, x);
  return {x * x * d2y + in.a * x * dy + (in.b + in.c * std::pow(x, 2 * in.beta)) * y, y};
}

}  // namespace imbessel::checks
