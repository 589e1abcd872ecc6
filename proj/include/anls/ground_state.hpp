#pragma once

#include <optional>

#include "anls/params.hpp"
#include "anls/spectral_ops.hpp"
#include "anls/symmetry.hpp"

namespace anls {

/// Scale and energy identity residuals every localized solution satisfies,
/// plus the integrals they are built from.
struct PohozaevReport {
  double r_scale = 0.0;   // s*T = (s+1)(p-2)/(2p) * V
  double r_energy = 0.0;  // T + omega*M = V
  double r_mass = 0.0;    // omega*M = (1 - (s+1)(p-2)/(2ps)) * V
  double mass = 0.0;      // M = int u^2
  double kinetic = 0.0;   // T = int |u_x|^2 + int |D_y^s u|^2
  double potential = 0.0; // V = int |u|^p
  double max_residual() const { return std::max(r_scale, std::max(r_energy, r_mass)); }
};

struct DecayFitReport {
  double theta_x = 0.0;  // exponential rate along x
  double alpha_y = 0.0;  // algebraic exponent along y (negative)
  double x_window[2] = {0.0, 0.0};
  double y_window[2] = {0.0, 0.0};
  double r2_x = 0.0;
  double r2_y = 0.0;
};

struct SolverConfig {
  double gamma = 0.0;  // 0 = use (p-1)/(p-2)
  double tol = 1e-7;
  int max_iter = 3000;
  int symmetrize_every = 10;
  bool dealias = true;
  double tail_tol_y = 5e-4;   // max boundary value / max value, y edges
  double tail_tol_x = 1e-8;   // same for x edges
  bool auto_grow = false;     // double ly (and ny) until the y tail fits
  int max_ny = 4096;
  double time_budget_sec = 0.0;  // 0 = unlimited
};

struct GroundStateSolution {
  ProblemParams params;
  RealField phi;                 // normalized soliton, solves (L + omega) phi = phi^(p-1)
  RealField capital_phi;         // Weinstein minimizer with unit L^p norm
  double j_value = 0.0;          // Weinstein quotient at the minimizer
  double lagrange_c = 0.0;       // Euler-Lagrange constant; phi = C^(1/(p-2)) Phi
  PohozaevReport residuals;
  DecayFitReport decay;
  int iterations = 0;
  double tol = 0.0;
  double final_residual = 0.0;   // |L phi - phi^(p-1)|_2 / |phi|_2
  double final_m = 0.0;          // stabilizing factor at the last step
  bool symmetry_certified = false;
};

/// (|u_x|^2 + |D_y^s u|^2 + omega |u|^2) / |u|_p^2 by grid quadrature.
double weinstein_J(const RealField& u, const ProblemParams& params);

/// Euler-Lagrange constant of the unit-p-norm minimizer.
double lagrange_constant(const RealField& capital_phi, const ProblemParams& params);

PohozaevReport pohozaev_residuals(const RealField& u, const ProblemParams& params);

/// Power-normalized fixed-point iteration on u = M^gamma R[u^(p-1)] with
/// M = <Lu,u>/<u^(p-1),u>; periodic axial symmetrization; converges on both
/// successive change and equation residual.
GroundStateSolution petviashvili_solve(const ProblemParams& params, const GridSpec& grid,
                                       const std::optional<RealField>& init = std::nullopt,
                                       const SolverConfig& cfg = {});

/// omega-scaling family: same samples on a box shrunk by omega^(-1/2) in x
/// and omega^(-1/(2s)) in y, amplitude scaled by omega^(1/(p-2)).
GroundStateSolution scale_soliton(const GroundStateSolution& phi_1, double omega_target);

struct DecayWindows {
  double x_min = 0.0, x_max = 0.0;  // |x| range for the exponential fit
  double y_min = 0.0, y_max = 0.0;  // |y| range for the log-log fit
};

DecayWindows default_decay_windows(const GridSpec& g);

DecayFitReport decay_fit(const RealField& phi, const ProblemParams& params,
                         const DecayWindows& windows);

/// Anisotropic Gagliardo-Nirenberg quotient at exponent q; scale-free in
/// amplitude and under anisotropic dilations.
double gn_quotient(const RealField& u, double q, double s);

/// Default periodic box and resolution for a solve at the given parameters.
GridSpec default_grid(const ProblemParams& params);

}  // namespace anls
