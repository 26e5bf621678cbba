#pragma once

#include <optional>
#include <string_view>

namespace imbessel {

// Oscillatory:  x^2 y'' + x y' + ( x^2 + nu^2) y = 0   (Cf, Sf)
// Modified:     x^2 y'' + x y' + (-x^2 + nu^2) y = 0   (Cd, Sd)
enum class Kind { Oscillatory, Modified };

constexpr std::string_view to_string(Kind kind) {
  return kind == Kind::Oscillatory ? "osc" : "mod";
}

constexpr std::optional<Kind> parse_kind(std::string_view text) {
  if (text == "osc") return Kind::Oscillatory;
  if (text == "mod") return Kind::Modified;
  return std::nullopt;
}

// Sign applied to each recurrence step: the modified coefficients are the
// oscillatory ones times (-1)^n.
template <typename Scalar>
constexpr Scalar step_sign(Kind kind) {
  return kind == Kind::Oscillatory ? Scalar(-1) : Scalar(1);
}

}  // namespace imbessel
