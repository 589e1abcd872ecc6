#pragma once

#include "anls/linearization.hpp"
#include "anls/radial_oracle.hpp"

namespace anls {

struct BranchPoint {
  double s = 0.0;
  RealField field;
  double xp_norm = 0.0;  // |u|_2 + |u|_p
  PohozaevReport apriori;
  double kernel_min = 0.0;       // smallest |eig| of L+ on even-even, negative direction excluded
  double newton_residual = 0.0;  // |F(u)|_2 / |u|_2
  int newton_steps = 0;
};

enum class BranchEnd { ReachedTarget, KernelCollapse, SolverFailure };

inline std::string to_string(BranchEnd e) {
  switch (e) {
    case BranchEnd::ReachedTarget: return "ReachedTarget";
    case BranchEnd::KernelCollapse: return "KernelCollapse";
    case BranchEnd::SolverFailure: return "SolverFailure";
  }
  return "?";
}

struct BranchTrace {
  double p = 0.0;
  std::vector<BranchPoint> points;  // s strictly increasing
  BranchEnd terminated = BranchEnd::SolverFailure;
};

struct ContinuationConfig {
  double ds_init = 0.02;
  double ds_min = 1e-4;
  double ds_max = 0.05;
  double tol = 1e-10;      // Newton residual target
  int max_newton = 12;
  bool track_kernel = true;
};

/// Newton iteration on F(u) = u - R_s[|u|^(p-2) u] at omega = 1; each step
/// solves L+ delta = -L F(u) on the even-even sector.
BranchPoint newton_correct(const RealField& guess, double s, double p, double tol,
                           int max_newton = 12, bool track_kernel = true);

/// Secant-predictor / Newton-corrector march from the starting solution's s
/// up to s_target, halving ds on corrector failure.
BranchTrace continue_branch(const GroundStateSolution& start, double s_target, double p,
                            const ContinuationConfig& cfg = {});

struct AprioriRatios {
  double m = 0.0, t = 0.0, v = 0.0;
  double ratio_scale = 0.0;   // residual of s T = (1+s)(p-2)/(2p) V
  double ratio_energy = 0.0;  // residual of T + M = V
};

AprioriRatios apriori_ratios(const BranchPoint& point, double p);

/// Smallest |eigenvalue| of L+ on the even-even sector with the single
/// negative direction excluded; meaningful only when newton_residual <= tol.
double kernel_monitor(const BranchPoint& point, double p);

struct IsotropicComparison {
  double l2_distance = 0.0;
  double linf_distance = 0.0;
  double l2_relative = 0.0;
  double oracle_residual = 0.0;  // shooting self-test
  int shift_x = 0, shift_y = 0;  // translation alignment applied
};

/// Endpoint (s >= 0.99) against the radial shooting oracle for the s = 1
/// classical ground state, after integer-shift alignment.
IsotropicComparison compare_isotropic_limit(const BranchPoint& endpoint, double p);

}  // namespace anls
