#pragma once

// Independent extended-precision reference values.  Nothing here shares code
// with the double-precision recurrence: the Bessel functions are summed as
// complex power series with complex Gamma prefactors, and K_{iτ} comes from
// quadrature of its integral representation.
//
// Instantiated for Real50 and Real100 (50 and 100 decimal digits of working
// precision).

#include <utility>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

#include "imbessel/kind.hpp"
#include "imbessel/series.hpp"

namespace imbessel::oracle {

using Real50 = boost::multiprecision::cpp_bin_float_50;
using Real100 = boost::multiprecision::cpp_bin_float_100;

template <typename Real>
using Complex = typename boost::multiprecision::complex_result_from_scalar<Real>::type;

template <typename Real>
struct OracleValue {
  Real re;
  Real im;
  int digits = 0;  // correct significant decimal digits

  Complex<Real> value() const { return Complex<Real>(re, im); }
};

// Γ(z) by Stirling's series at Re z >= working digits, shifted back with
// Γ(z) = Γ(z+K) / (z (z+1) ... (z+K-1)).  DomainError at nonpositive integers.
template <typename Real>
OracleValue<Real> hp_gamma(const Real& re, const Real& im);

// J_{iν}(x) (Oscillatory) or I_{iν}(x) (Modified) by direct complex summation.
template <typename Real>
OracleValue<Real> hp_bessel_imag(double nu, double x, Kind kind);

template <typename Real>
struct NormalizedPair {
  OracleValue<Real> value;       // Cf + i Sf  (or Cd + i Sd)
  OracleValue<Real> derivative;  // its x-derivative
};

// Γ(1+iν) 2^{iν} J_{iν}(x), resp. Γ(1+iν) 2^{iν} I_{iν}(x), with derivative.
template <typename Real>
NormalizedPair<Real> normalized_pair(Kind kind, double nu, double x);

// ∫_0^∞ exp(-x cosh t) cos(τ t) dt by adaptive Gauss-Legendre on panels of
// width <= π / (4 max(|τ|, 1)).  DomainError for x <= 0, ToleranceError for
// x < 0.05 where the representation is declared unreliable.
template <typename Real>
OracleValue<Real> kl_macdonald(double tau, double x);

// -π Im I_{iτ}(x) / sinh(τπ): the same K_{iτ}(x) from the series side.
template <typename Real>
Real macdonald_from_series(double tau, double x);

// J_n(x) for integer n.
template <typename Real>
Real bessel_j_integer(int n, const Real& x);

// Gold (cos_part, sin_part) rounded to double, at 50 working digits.
std::pair<double, double> oracle_pair(Kind kind, double nu, double x);

struct PairErrors {
  double cos_err = 0;
  double sin_err = 0;
  double d_cos_err = 0;
  double d_sin_err = 0;

  double value_max() const { return cos_err > sin_err ? cos_err : sin_err; }
  double derivative_max() const { return d_cos_err > d_sin_err ? d_cos_err : d_sin_err; }
};

// |computed - exact| for each output of a PairResult, formed in extended
// precision before rounding.
PairErrors pair_errors(Kind kind, double nu, double x, const PairResult& computed);

extern template OracleValue<Real50> hp_gamma<Real50>(const Real50&, const Real50&);
extern template OracleValue<Real100> hp_gamma<Real100>(const Real100&, const Real100&);
extern template OracleValue<Real50> hp_bessel_imag<Real50>(double, double, Kind);
extern template OracleValue<Real100> hp_bessel_imag<Real100>(double, double, Kind);
extern template NormalizedPair<Real50> normalized_pair<Real50>(Kind, double, double);
extern template NormalizedPair<Real100> normalized_pair<Real100>(Kind, double, double);
extern template OracleValue<Real50> kl_macdonald<Real50>(double, double);
extern template OracleValue<Real100> kl_macdonald<Real100>(double, double);
extern template Real50 macdonald_from_series<Real50>(double, double);
extern template Real100 macdonald_from_series<Real100>(double, double);
extern template Real50 bessel_j_integer<Real50>(int, const Real50&);
extern template Real100 bessel_j_integer<Real100>(int, const Real100&);

}  // namespace imbessel::oracle
