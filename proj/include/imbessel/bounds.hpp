#pragma once

// A-priori truncation control for the imaginary-order series.
//
// The coefficient pairs obey |a_n| + |b_n| <= m(ν) n^{|ν|} / (n!)^2 for
// n >= 1 when seeded with (1,0) or (0,1).  Summing n = 0..N leaves the tail
//
//   ε_N = Σ_{n>N} m(ν) n^{|ν|} / (n!)^2 (x/2)^{2n},
//
// which for |ν| <= 2 is bounded in closed form by
// m(ν) (x/2)^{2N+1} I_1(x) / (N!)^2.

namespace imbessel {

inline constexpr int kMaxTerms = 400;

// Piecewise growth factor F(ν) entering m(ν).
double factor_F(double nu);

// m(ν) = (1+|ν|)/(1+ν^2) exp(0.6449 ν^2 + 0.2021 F(ν)).
double m_of_nu(double nu);
double log_m_of_nu(double nu);

// m(ν) n^{|ν|} / (n!)^2, n >= 1.
double majorant_bound(double nu, int n);

// Upper bound on I_1(x), x >= 0: classical series to relative 1e-13 plus its
// geometric remainder, inflated by 1.0001.
double bessel_i1_upper(double x);

// Bound on |P_true - P_N| + |Q_true - Q_N| when n = 0..N are summed (N >= 1).
// Closed form for |ν| <= 2, direct majorant summation beyond.
double tail_bound(double nu, double x, int last);

// Bound on the truncation error of d/dx [P cos(ν ln x) + Q sin(ν ln x)]:
// (1/x) Σ_{n>N} m(ν) n^{|ν|} (2n + |ν|) / (n!)^2 (x/2)^{2n}.
double derivative_tail_bound(double nu, double x, int last);

// Smallest N in [1, kMaxTerms] with tail_bound(ν, x, N) <= tol.
int required_terms(double nu, double x, double tol);
int required_derivative_terms(double nu, double x, double tol);

struct BoundReport {
  double F = 0;
  double m_nu = 0;
  int N = 0;
  double tail = 0;
};

BoundReport bound_report(double nu, double x, int last);

}  // namespace imbessel
