#pragma once

#include "anls/field.hpp"

namespace anls {

struct SymmetrizedField {
  RealField field;
  bool certified = false;   // passed bell-shape checks on both axes
  double clipped_l2 = 0.0;  // L2 mass of the truncated negative part
};

/// Placement order for the center-out 1-D rearrangement on an even-length
/// periodic line: center, then alternating right/left, ending at the
/// antipodal point. positions[r] is the line index of rank r.
std::vector<int> rearrangement_order(int n);

/// Line-by-line symmetric decreasing rearrangement, x-pass then y-pass.
/// Values are permuted, never altered, so every per-line L^q norm is exact.
/// Negative entries are clipped to zero first.
SymmetrizedField axial_symmetrize(const RealField& f);

/// True when every row and column is non-increasing along the placement
/// order and even about the center within tol * max|f|.
bool is_bell_certified(const RealField& f, double tol = 1e-12);

}  // namespace anls
