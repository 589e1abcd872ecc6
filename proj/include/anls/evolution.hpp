#pragma once

#include <functional>
#include <optional>

#include "anls/ground_state.hpp"

namespace anls {

struct EvolutionState {
  ComplexField u;
  double t = 0.0;
  double mass = 0.0;
  double energy = 0.0;
};

struct PropagatorConfig {
  double dt = 1e-3;
  double t_end = 1.0;
  bool dealias = false;
  int record_every = 0;  // 0 = no snapshots
};

struct Conserved {
  double mass = 0.0;
  double energy = 0.0;
};

/// mass = int |u|^2, energy = (|u_x|^2 + |D_y^s u|^2)/2 - int |u|^p / p.
Conserved conserved_quantities(const ComplexField& u, const ProblemParams& params);

/// One Strang step: exact half nonlinear phase, exact linear phase
/// e^{i dt sigma}, half nonlinear phase. dt may be negative.
EvolutionState split_step(const EvolutionState& state, const ProblemParams& params, double dt,
                          bool dealias = false);

/// March to cfg.t_end; calls on_snapshot every record_every accepted steps
/// (and at the final time). Throws on non-finite values, preserving the
/// blow-up time in the message.
EvolutionState propagate(EvolutionState state, const ProblemParams& params,
                         const PropagatorConfig& cfg,
                         const std::function<void(const EvolutionState&)>& on_snapshot = nullptr);

EvolutionState make_state(const ComplexField& u0, const ProblemParams& params, double t0 = 0.0);

struct PerturbationSpec {
  enum class Mode { Eigvec, Random } mode = Mode::Random;
  double amplitude_rel = 1e-5;  // relative to |phi|_2; must stay <= 1e-3
  std::uint64_t seed = 7;
  // eigvec perturbation: the real pair (z1, z2) combined as z1 + i z2
  std::optional<std::pair<RealField, RealField>> eig_pair;
};

struct GrowthReport {
  double lambda_est = 0.0;
  bool growth_detected = false;
  double window_t0 = 0.0, window_t1 = 0.0;
  double fit_r2 = 0.0;
  double max_deviation = 0.0;
  std::vector<std::pair<double, double>> deviation;  // (t, d(t))
};

/// Evolves phi + perturbation, tracks the gauge-aligned deviation
/// d(t) = min_theta |u e^{i theta} - phi|_2, and fits log d over the window
/// 10*amplitude <= d <= 1e-2 |phi|_2. lambda_est = 0 with no growth flag
/// when the window is never reached.
GrowthReport measure_growth_rate(const GroundStateSolution& sol, const PerturbationSpec& pert,
                                 const PropagatorConfig& cfg);

}  // namespace anls
