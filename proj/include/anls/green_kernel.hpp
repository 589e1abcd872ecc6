#pragma once

#include <utility>
#include <vector>

#include "anls/field.hpp"

namespace anls {

/// Order of the anisotropic constant-coefficient operator whose fundamental
/// solution is evaluated: Full = (-dxx) + (-dyy)^s + 1 with the Gaussian
/// x-factor, Half = (-dxx)^(1/2) + (-dyy)^(s/2) + 1 with the Poisson
/// x-factor. Symbols follow the e^{-2 pi i x.xi} transform convention of the
/// subordination identity K = int_0^inf e^{-t} H1(x,t) Hs(y,t) dt.
enum class KernelOrder { Full, Half };

struct GreenQuadrature {
  int n_nodes = 48;       // Gauss-Laguerre nodes for the t-integral
  double osc_step = 0.02; // log-grid step of the rotated-contour quadrature
};

/// K(x, y) > 0 away from the origin; node-doubling must agree to 1e-6
/// relative or an accuracy error is thrown.
double green_kernel(double x, double y, double s, KernelOrder order,
                    const GreenQuadrature& quad = {});

/// Single evaluation without the doubling check (used by the check itself
/// and by bulk decay studies that verify convergence once).
double green_kernel_unchecked(double x, double y, double s, KernelOrder order,
                              const GreenQuadrature& quad = {});

struct KernelDecayFit {
  double slope = 0.0;  // d log K(0, y) / d log y over the window
  double r2 = 0.0;
  std::vector<std::pair<double, double>> samples;  // (y, K(0, y))
};

/// log-log slope of y -> K(0, y) over [y_min, y_max]; the Full-order slope
/// approaches -(1 + 2s) for large y.
KernelDecayFit green_kernel_decay_fit(double s, KernelOrder order, double y_min, double y_max,
                                      int n_points, const GreenQuadrature& quad = {});

/// One-dimensional heat-type factor H_beta(v, t) = int e^{-t |w|^beta}
/// e^{-2 pi i v w} dw, evaluated by rotated-contour quadrature. Exposed for
/// the oracle tests.
double heat_factor(double v, double t, double beta, double osc_step = 0.02);

}  // namespace anls
