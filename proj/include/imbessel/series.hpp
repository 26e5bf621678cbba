#pragma once

// Real-valued solutions of Bessel's equation of pure imaginary order iν,
// built on the ansatz
//
//   y(x) = P(x) cos(ν ln x) + Q(x) sin(ν ln x),
//   P(x) = Σ a_n (x/2)^{2n},  Q(x) = Σ b_n (x/2)^{2n}.
//
// Seeding (a_0, b_0) = (1, 0) gives Cf_ν / Cd_ν, seeding (0, 1) gives
// Sf_ν / Sd_ν.  With that normalization
//
//   Cf_ν(x) + i Sf_ν(x) = Γ(1+iν) 2^{iν} J_{iν}(x),
//   Cd_ν(x) + i Sd_ν(x) = Γ(1+iν) 2^{iν} I_{iν}(x).

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "imbessel/errors.hpp"
#include "imbessel/kind.hpp"

namespace imbessel {

template <typename Scalar>
struct CoeffPair {
  Scalar a{0};  // A_{2n} (oscillatory) or C_{2n} (modified)
  Scalar b{0};  // B_{2n} or D_{2n}
  int n = 0;    // half-index: the pair multiplies (x/2)^{2n}
};

// (A_{2n-2}, B_{2n-2}) -> (A_{2n}, B_{2n}).  The denominator n(n^2+ν^2) is at
// least 1, so ν = 0 needs no special case.
template <typename Scalar>
CoeffPair<Scalar> advance_oscillatory(const CoeffPair<Scalar>& prev, Scalar nu) {
  const int n = prev.n + 1;
  const Scalar sn = static_cast<Scalar>(n);
  const Scalar denom = sn * (sn * sn + nu * nu);
  return {-(sn * prev.a - nu * prev.b) / denom,
          -(nu * prev.a + sn * prev.b) / denom, n};
}

// (C_{2n-2}, D_{2n-2}) -> (C_{2n}, D_{2n}).
template <typename Scalar>
CoeffPair<Scalar> advance_modified(const CoeffPair<Scalar>& prev, Scalar nu) {
  const int n = prev.n + 1;
  const Scalar sn = static_cast<Scalar>(n);
  const Scalar denom = sn * (sn * sn + nu * nu);
  return {(sn * prev.a - nu * prev.b) / denom,
          (nu * prev.a + sn * prev.b) / denom, n};
}

template <typename Scalar>
CoeffPair<Scalar> advance(Kind kind, const CoeffPair<Scalar>& prev, Scalar nu) {
  return kind == Kind::Oscillatory ? advance_oscillatory(prev, nu)
                                   : advance_modified(prev, nu);
}

// Immutable table of coefficient pairs for n = 0..N.
template <typename Scalar>
class CoeffTable {
 public:
  CoeffTable(Kind kind, Scalar nu, std::vector<CoeffPair<Scalar>> entries)
      : kind_(kind), nu_(nu), entries_(std::move(entries)) {}

  Kind kind() const { return kind_; }
  Scalar nu() const { return nu_; }
  std::pair<Scalar, Scalar> seed() const { return {entries_[0].a, entries_[0].b}; }
  std::size_t size() const { return entries_.size(); }
  int last() const { return static_cast<int>(entries_.size()) - 1; }
  const CoeffPair<Scalar>& operator[](std::size_t n) const { return entries_[n]; }
  std::span<const CoeffPair<Scalar>> entries() const { return entries_; }

 private:
  Kind kind_;
  Scalar nu_;
  std::vector<CoeffPair<Scalar>> entries_;
};

template <typename Scalar>
CoeffTable<Scalar> build_table(Kind kind, std::pair<Scalar, Scalar> seed, Scalar nu,
                               int last) {
  using std::isfinite;
  if (last < 0) throw DomainError("coefficient table: N must be >= 0");
  if (!isfinite(seed.first) || !isfinite(seed.second))
    throw DomainError("coefficient table: seed must be finite");
  if (!isfinite(nu)) throw DomainError("coefficient table: nu must be finite");

  std::vector<CoeffPair<Scalar>> entries;
  entries.reserve(static_cast<std::size_t>(last) + 1);
  entries.push_back({seed.first, seed.second, 0});
  for (int n = 1; n <= last; ++n) entries.push_back(advance(kind, entries.back(), nu));
  return CoeffTable<Scalar>(kind, nu, std::move(entries));
}

// P, Q and their x-derivatives, summed forward over n = 0..N, together with a
// running bound on the rounding error committed by each sum.
template <typename Scalar>
struct SeriesSum {
  Scalar p{0}, q{0};
  Scalar dp{0}, dq{0};
  Scalar p_err{0}, q_err{0};
  Scalar dp_err{0}, dq_err{0};
};

// The recurrence is run on the scaled terms α_n = a_n u^n, β_n = b_n u^n with
// u = (x/2)^2, so no power of u is ever formed on its own (no overflow for
// large x, no underflow of u^n while α_n is still representable).
//
// Error model: every basic operation is correctly rounded with unit roundoff
// eps.  The exact reference is the series for the given (double) x and ν.
template <typename Scalar>
SeriesSum<Scalar> sum_series(Kind kind, Scalar nu, std::pair<Scalar, Scalar> seed, Scalar x,
                             int last) {
  using std::abs;
  constexpr Scalar eps = std::numeric_limits<Scalar>::epsilon() / 2;
  constexpr Scalar tiny = std::numeric_limits<Scalar>::denorm_min();
  const Scalar sign = step_sign<Scalar>(kind);
  const Scalar half = x / 2;
  const Scalar u = half * half;
  const Scalar abs_nu = abs(nu);

  Scalar alpha = seed.first;
  Scalar beta = seed.second;
  Scalar alpha_err = 0;
  Scalar beta_err = 0;

  SeriesSum<Scalar> s;
  s.p = alpha;
  s.q = beta;
  // x P'(x) = Σ 2n α_n
  Scalar xdp = 0, xdq = 0, xdp_err = 0, xdq_err = 0;

  for (int n = 1; n <= last; ++n) {
    const Scalar sn = static_cast<Scalar>(n);
    // u carries eps, the denominator 3 eps, the quotient one more rounding.
    const Scalar w = u / (sn * (sn * sn + nu * nu));
    const Scalar na = sn * alpha, vb = nu * beta;
    const Scalar va = nu * alpha, nb = sn * beta;
    const Scalar num_a = na - vb;
    const Scalar num_b = va + nb;
    const Scalar next_alpha = sign * (num_a * w);
    const Scalar next_beta = sign * (num_b * w);

    const Scalar next_alpha_err =
        (sn * alpha_err + abs_nu * beta_err + eps * (abs(na) + abs(vb) + abs(num_a))) *
            abs(w) +
        7 * eps * abs(next_alpha) + tiny;
    const Scalar next_beta_err =
        (abs_nu * alpha_err + sn * beta_err + eps * (abs(va) + abs(nb) + abs(num_b))) *
            abs(w) +
        7 * eps * abs(next_beta) + tiny;

    alpha = next_alpha;
    beta = next_beta;
    alpha_err = next_alpha_err;
    beta_err = next_beta_err;

    s.p += alpha;
    s.q += beta;
    s.p_err += alpha_err + eps * abs(s.p);
    s.q_err += beta_err + eps * abs(s.q);

    const Scalar two_n = 2 * sn;
    const Scalar ta = two_n * alpha, tb = two_n * beta;
    xdp += ta;
    xdq += tb;
    xdp_err += two_n * alpha_err + eps * abs(ta) + eps * abs(xdp);
    xdq_err += two_n * beta_err + eps * abs(tb) + eps * abs(xdq);
  }

  s.dp = xdp / x;
  s.dq = xdq / x;
  s.dp_err = xdp_err / x + eps * abs(s.dp);
  s.dq_err = xdq_err / x + eps * abs(s.dq);
  return s;
}

// Evaluated (cos-type, sin-type) pair: Cf/Sf or Cd/Sd with first derivatives.
struct PairResult {
  double cos_part = 0;
  double sin_part = 0;
  double d_cos = 0;
  double d_sin = 0;
  int terms_used = 0;      // N: coefficients n = 0..N were summed
  double tail_bound = 0;   // encloses |error| of cos_part and sin_part
  double d_tail_bound = 0; // encloses |error| of d_cos and d_sin
  double truncation = 0;   // truncation share of tail_bound
};

// Chooses N from the truncation bounds so that both values and derivatives
// meet tol.  Throws DomainError for x <= 0 or non-finite input, ToleranceError
// if the term cap is hit or rounding alone exceeds tol.
PairResult eval_pair(Kind kind, double nu, double x, double tol);

// Same, with the number of summed coefficients fixed (n = 0..terms).
PairResult eval_pair_terms(Kind kind, double nu, double x, int terms);

// Cf Sf' - Sf Cf' - ν/x (resp. Cd/Sd); zero in exact arithmetic.
double wronskian_residual(Kind kind, double nu, double x, double tol);

// |Γ(iν)| = sqrt(π / (|ν| sinh(π|ν|))); DomainError at ν = 0.
double gamma_modulus_imag(double nu);

}  // namespace imbessel
