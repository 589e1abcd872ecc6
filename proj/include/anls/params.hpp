#pragma once

#include <limits>
#include <string>

#include "anls/field.hpp"

namespace anls {

/// Existence threshold p_s = 2(1+s)/(1-s); +inf at s = 1.
inline double p_star(double s) {
  if (s >= 1.0) return std::numeric_limits<double>::infinity();
  return 2.0 * (1.0 + s) / (1.0 - s);
}

/// Mass-critical stability threshold p_m = (6s+2)/(s+1).
inline double p_mass(double s) { return (6.0 * s + 2.0) / (s + 1.0); }

enum class ExponentClass { Subcritical, Critical, Supercritical, NoSolitons };

inline std::string to_string(ExponentClass c) {
  switch (c) {
    case ExponentClass::Subcritical: return "Subcritical";
    case ExponentClass::Critical: return "Critical";
    case ExponentClass::Supercritical: return "Supercritical";
    case ExponentClass::NoSolitons: return "NoSolitons";
  }
  return "?";
}

inline ExponentClass classify_exponents(double s, double p) {
  if (!(s > 0.0) || !(s <= 1.0)) fail_validation("classify_exponents: s must lie in (0, 1]");
  if (!(p > 2.0)) fail_validation("classify_exponents: p must exceed 2");
  if (p >= p_star(s)) return ExponentClass::NoSolitons;
  double pm = p_mass(s);
  if (std::abs(p - pm) <= 1e-9 * pm) return ExponentClass::Critical;
  return p < pm ? ExponentClass::Subcritical : ExponentClass::Supercritical;
}

struct ProblemParams {
  double s = 0.5;
  double p = 3.0;
  double omega = 1.0;

  void validate() const {
    if (!(s > 0.0) || !(s <= 1.0)) fail_validation("s must lie in (0, 1]");
    if (!(p > 2.0)) fail_validation("p must exceed 2");
    if (!(omega > 0.0)) fail_validation("omega must be positive");
  }
  ExponentClass classify() const { return classify_exponents(s, p); }
};

}  // namespace anls
