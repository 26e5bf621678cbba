#include "imbessel/series.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>

#include "imbessel/bounds.hpp"

namespace imbessel {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon() / 2;

// Second-order terms of the running error analysis.
constexpr double kRoundingSlack = 1.01;

// Truncation below this is invisible next to double rounding of O(1) values.
constexpr double kResolutionTarget = 1e-17;

void check_inputs(double nu, double x) {
  if (!std::isfinite(nu)) throw DomainError("nu must be finite");
  if (!std::isfinite(x)) throw DomainError("x must be finite");
  if (!(x > 0)) throw DomainError("x must be > 0");
}

struct Combined {
  double value, value_err;
  double deriv, deriv_err;
};

// y = P c + Q s and y' = P' c + Q' s + (ν/x)(Q c - P s), with the rounding of
// each step added to the errors carried in from the sums and the trig values.
Combined combine(const SeriesSum<double>& s, double c, double sn, double trig_err, double k) {
  using std::abs;
  Combined out{};
  const double pc = s.p * c, qs = s.q * sn;
  out.value = pc + qs;
  out.value_err = s.p_err * abs(c) + s.q_err * abs(sn) + (abs(s.p) + abs(s.q)) * trig_err +
                  kEps * (abs(pc) + abs(qs)) + kEps * abs(out.value);

  const double qc = s.q * c, ps = s.p * sn;
  const double r = qc - ps;
  const double r_err = s.q_err * abs(c) + s.p_err * abs(sn) +
                       (abs(s.p) + abs(s.q)) * trig_err + kEps * (abs(qc) + abs(ps)) +
                       kEps * abs(r);

  const double dpc = s.dp * c, dqs = s.dq * sn;
  const double g = dpc + dqs;
  const double g_err = s.dp_err * abs(c) + s.dq_err * abs(sn) +
                       (abs(s.dp) + abs(s.dq)) * trig_err + kEps * (abs(dpc) + abs(dqs)) +
                       kEps * abs(g);

  const double kr = k * r;
  out.deriv = g + kr;
  // k = ν/x itself carries one rounding.
  out.deriv_err = g_err + abs(k) * r_err + 2 * kEps * abs(kr) + kEps * abs(out.deriv);
  return out;
}

struct Evaluated {
  PairResult result;
  double value_rounding = 0;
};

Evaluated evaluate(Kind kind, double nu, double x, int last) {
  const auto cos_sum = sum_series<double>(kind, nu, {1.0, 0.0}, x, last);
  const auto sin_sum = sum_series<double>(kind, nu, {0.0, 1.0}, x, last);

  const double theta = nu * std::log(x);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  // log within one ulp, the product one rounding, cos/sin within one ulp.
  const double trig_err = 3 * kEps * std::abs(theta) + 2 * kEps;
  const double k = nu / x;

  const Combined cf = combine(cos_sum, c, s, trig_err, k);
  const Combined sf = combine(sin_sum, c, s, trig_err, k);

  Evaluated ev;
  PairResult& r = ev.result;
  r.cos_part = cf.value;
  r.sin_part = sf.value;
  r.d_cos = cf.deriv;
  r.d_sin = sf.deriv;
  r.terms_used = last;
  r.truncation = tail_bound(nu, x, last);
  ev.value_rounding = kRoundingSlack * std::max(cf.value_err, sf.value_err);
  r.tail_bound = r.truncation + ev.value_rounding;
  r.d_tail_bound = derivative_tail_bound(nu, x, last) +
                   kRoundingSlack * std::max(cf.deriv_err, sf.deriv_err);
  return ev;
}

}  // namespace

PairResult eval_pair(Kind kind, double nu, double x, double tol) {
  check_inputs(nu, x);
  if (!(tol > 0) || !std::isfinite(tol)) throw DomainError("tol must be > 0");
  // Extra terms are cheap: go down to double resolution when the term cap
  // allows it, and never below what tol demands.
  const auto terms_for = [&](double target) {
    return std::max(required_terms(nu, x, target), required_derivative_terms(nu, x, target));
  };
  int last = 0;
  try {
    last = terms_for(std::min(tol, kResolutionTarget));
  } catch (const ToleranceError&) {
    last = terms_for(tol);
  }
  const Evaluated ev = evaluate(kind, nu, x, last);
  if (ev.value_rounding > tol)
  {
    char msg[160];
    std::snprintf(msg, sizeof msg,
                  "tolerance %g is below the rounding error bound %g at nu = %g, x = %g", tol,
                  ev.value_rounding, nu, x);
    throw ToleranceError(msg);
  }
  return ev.result;
}

PairResult eval_pair_terms(Kind kind, double nu, double x, int terms) {
  check_inputs(nu, x);
  if (terms < 1) throw DomainError("number of terms must be >= 1");
  return evaluate(kind, nu, x, terms).result;
}

double wronskian_residual(Kind kind, double nu, double x, double tol) {
  const PairResult r = eval_pair(kind, nu, x, tol);
  return r.cos_part * r.d_sin - r.sin_part * r.d_cos - nu / x;
}

double gamma_modulus_imag(double nu) {
  if (!std::isfinite(nu)) throw DomainError("nu must be finite");
  if (nu == 0) throw DomainError("Gamma(i nu) has a pole at nu = 0");
  const double a = std::abs(nu);
  const double t = std::numbers::pi * a;
  // ln sinh t without overflow for large t.
  const double log_sinh = t < 1 ? std::log(std::sinh(t))
                                : t + std::log1p(-std::exp(-2 * t)) - std::numbers::ln2;
  return std::exp(0.5 * (std::log(std::numbers::pi) - std::log(a) - log_sinh));
}

}  // namespace imbessel
