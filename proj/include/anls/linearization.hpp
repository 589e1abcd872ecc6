#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include "anls/ground_state.hpp"

namespace anls {

enum class Parity { Even, Odd };

/// Reflection-parity sector about the grid center; projections are averages
/// over the four signed reflections, idempotent and self-adjoint.
struct ParitySector {
  Parity x = Parity::Even;
  Parity y = Parity::Even;
};

inline ParitySector even_even() { return {Parity::Even, Parity::Even}; }
inline ParitySector odd_even() { return {Parity::Odd, Parity::Even}; }
inline ParitySector even_odd() { return {Parity::Even, Parity::Odd}; }

RealField project_sector(const RealField& f, const ParitySector& sector);

enum class Which { Plus, Minus };

/// Matrix-free realization of the linearized operators about phi:
///   L+ = -dxx + (-dyy)^s + omega - (p-1) phi^(p-2)
///   L- = -dxx + (-dyy)^s + omega -       phi^(p-2)
struct LinearizedPair {
  ProblemParams params;
  RealField phi;
  RealField potential;  // phi^(p-2), >= 0
  double op_scale = 0.0;

  static LinearizedPair make(const GroundStateSolution& base);
  /// Build from a bare profile; used by small-grid oracles.
  static LinearizedPair from_field(const RealField& phi, const ProblemParams& params);

  RealField apply(Which which, const RealField& v) const;
};

inline RealField apply_Lplus(const LinearizedPair& pair, const RealField& v) {
  return pair.apply(Which::Plus, v);
}
inline RealField apply_Lminus(const LinearizedPair& pair, const RealField& v) {
  return pair.apply(Which::Minus, v);
}

struct EigResult {
  double value = 0.0;
  RealField vector;
  double residual = 0.0;  // |A v - lambda v|_2 / |v|_2
  std::optional<ParitySector> sector;
};

struct EigOptions {
  double tol = 1e-9;      // absolute residual target in operator units
  int max_iter = 400;
  int block_extra = 2;
  std::uint64_t seed = 20240901;
};

/// k algebraically smallest eigenpairs of L+/L- on the chosen sector
/// (nullopt = full space), by a preconditioned locally-optimal block
/// iteration using only operator applications.
std::vector<EigResult> lowest_eigs(const LinearizedPair& pair, Which which,
                                   std::optional<ParitySector> sector, int k,
                                   const EigOptions& opts = {});

/// Number of negative eigenvalues, multiplicities counted.
int morse_index(const LinearizedPair& pair, Which which, std::optional<ParitySector> sector,
                const EigOptions& opts = {});

/// Analytic omega-derivative of the scaling family at the solution's omega:
/// (1/omega) [ phi/(p-2) + x phi_x / 2 + y phi_y / (2s) ], the coordinate
/// weights windowed near the periodic boundary.
RealField d_omega_phi(const GroundStateSolution& sol);

/// Solve L+ v = rhs on the even-even sector by preconditioned MINRES.
/// rhs must be even-even (odd component below 1e-10 relative).
RealField solve_Lplus(const LinearizedPair& pair, const RealField& rhs, double tol = 1e-9,
                      int max_iter = 20000);

enum class Verdict { Stable, Unstable, Marginal };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Stable: return "Stable";
    case Verdict::Unstable: return "Unstable";
    case Verdict::Marginal: return "Marginal";
  }
  return "?";
}

struct StabilityReport {
  int n_plus = 0;
  int n_minus = 0;
  double gap_minus = 0.0;        // second eigenvalue of L-
  double d11_closed = 0.0;       // from the omega-power of the mass
  double d11_scaling = 0.0;      // -<d_omega phi, phi>
  double d11_solve = 0.0;        // <L+^{-1} phi, phi>
  double marginal_band = 0.0;    // 1e-4 |phi|_2 |d_omega phi|_2
  int k_ham = 0;                 // n(L) - n(D); k_c = k_i^- = 0 since n(L) = 1
  std::optional<double> lambda_unstable;
  double lambda_residual = 0.0;  // block-system residual of the unstable pair
  Verdict verdict = Verdict::Stable;
};

StabilityReport vk_report(const LinearizedPair& pair, bool compute_lambda = true);

struct UnstableMode {
  double lambda = 0.0;
  RealField z1, z2;
  double block_residual = 0.0;  // |JL z - lambda z| / |z|
};

/// Real unstable eigenvalue of the block problem via the composition
/// L- L+ z1 = -lambda^2 z1 on the even-even sector orthogonal to phi.
/// Returns nullopt (after verifying the smallest mu is non-negative) in the
/// stable range.
std::optional<UnstableMode> unstable_eigenvalue(const LinearizedPair& pair,
                                                const EigOptions& opts = {});

// Generic building blocks shared with the continuation module.
using OpFn = std::function<RealField(const RealField&)>;

struct PencilEig {
  double value = 0.0;
  RealField vector;
  double residual = 0.0;
};

/// Locally-optimal block iteration for A x = theta B x (A symmetric, B SPD
/// on the constrained subspace), with preconditioner T and a projection
/// applied to every new direction.
std::vector<PencilEig> lobpcg(const OpFn& A, const OpFn& B, const OpFn& T, const OpFn& constrain,
                              const GridSpec& grid, int k, const EigOptions& opts);

/// Preconditioned MINRES for symmetric (possibly indefinite) A with SPD
/// preconditioner M; returns x with |Ax - b| <= tol |b|.
RealField minres(const OpFn& A, const OpFn& M, const RealField& b, double tol, int max_iter);

}  // namespace anls
