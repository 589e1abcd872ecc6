#pragma once

#include <vector>

#include "anls/field.hpp"

namespace anls {

/// Radial ground state of -Delta u + u = u^(p-1) on R^2, computed by
/// shooting on the center amplitude with adaptive bisection. Independent of
/// every grid-based path; serves as the isotropic-limit oracle.
struct RadialProfile {
  double p = 0.0;
  double amplitude = 0.0;  // u(0)
  double h = 0.0;          // sample spacing of the stored profile
  std::vector<double> u;   // u(k h), k = 0..n-1
  double tail_r = 0.0;     // matching radius of the asymptotic tail
  double tail_c = 0.0;     // u ~ tail_c exp(-r)/sqrt(r) beyond tail_r

  double eval(double r) const;

  /// max |u'' + u'/r - u + u^(p-1)| / max|u| over the resolved range, with
  /// derivatives from high-order differences of the stored samples.
  double ode_residual() const;
};

RadialProfile radial_ground_state(double p, double r_max = 24.0, double h = 1e-3);

/// Sample the radial profile on a periodic grid (centered).
RealField radial_to_grid(const RadialProfile& prof, const GridSpec& grid);

}  // namespace anls
