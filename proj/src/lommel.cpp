#include "imbessel/lommel.hpp"

#include <cmath>

#include "imbessel/errors.hpp"

namespace imbessel {

double LommelSolution::argument(double x) const { return gamma * std::pow(x, beta); }

LommelSolution classify(const LommelInput& in) {
  if (!std::isfinite(in.a) || !std::isfinite(in.b) || !std::isfinite(in.c) ||
      !std::isfinite(in.beta))
    throw DomainError("Lommel coefficients must be finite");
  if (in.beta == 0) throw DomainError("beta must be nonzero");
  if (in.c < 0) throw DomainError("c must be >= 0");

  const double half_shift = (in.a - 1) / 2;
  const double discriminant = half_shift * half_shift - in.b;  // (β ν)^2
  const double abs_beta = std::abs(in.beta);

  LommelSolution out;
  out.prefactor_exponent = -half_shift;
  out.gamma = std::sqrt(in.c) / abs_beta;
  out.beta = in.beta;
  if (discriminant >= 0)
    out.order = RealOrder{std::sqrt(discriminant) / abs_beta};
  else
    out.order = ImaginaryOrder{std::sqrt(-discriminant) / abs_beta};
  return out;
}

}  // namespace imbessel
