#pragma once

// Classification of x^2 y'' + a x y' + (b + c x^{2β}) y = 0.
//
// Every such equation is solved by x^p Z(γ x^β) with p = -(a-1)/2,
// γ = sqrt(c)/|β| and Z a solution of Bessel's equation whose squared order is
// (((a-1)/2)^2 - b) / β^2.  A negative squared order means the order is pure
// imaginary and Z is a combination of Cf_ν and Sf_ν.

#include <variant>

namespace imbessel {

struct LommelInput {
  double a = 0;
  double b = 0;
  double c = 0;     // >= 0
  double beta = 0;  // != 0, either sign
};

struct RealOrder {
  double nu = 0;  // >= 0
};

struct ImaginaryOrder {
  double nu = 0;  // > 0; the order is iν
};

using BesselOrder = std::variant<RealOrder, ImaginaryOrder>;

struct LommelSolution {
  double prefactor_exponent = 0;  // p in x^p Z(γ x^β)
  double gamma = 0;
  double beta = 0;
  BesselOrder order;

  bool imaginary() const { return std::holds_alternative<ImaginaryOrder>(order); }
  double nu() const {
    return std::visit([](auto o) { return o.nu; }, order);
  }
  // Argument γ x^β handed to the Bessel-type function.
  double argument(double x) const;
};

// Throws DomainError for β = 0, c < 0 or non-finite coefficients.  A zero
// discriminant is reported as RealOrder{0}.
LommelSolution classify(const LommelInput& input);

}  // namespace imbessel
