#include "anls/linearization.hpp"

#include <Eigen/Dense>

#include <random>

namespace anls {

RealField project_sector(const RealField& f, const ParitySector& sector) {
  const GridSpec& g = f.grid;
  double sx = sector.x == Parity::Even ? 1.0 : -1.0;
  double sy = sector.y == Parity::Even ? 1.0 : -1.0;
  RealField out(g);
  for (int i = 0; i < g.nx; ++i) {
    int ir = (g.nx - i) % g.nx;
    for (int j = 0; j < g.ny; ++j) {
      int jr = (g.ny - j) % g.ny;
      out.v[g.index(i, j)] = 0.25 * (f.v[g.index(i, j)] + sx * f.v[g.index(ir, j)] +
                                     sy * f.v[g.index(i, jr)] + sx * sy * f.v[g.index(ir, jr)]);
    }
  }
  return out;
}

LinearizedPair LinearizedPair::make(const GroundStateSolution& base) {
  return from_field(base.phi, base.params);
}

LinearizedPair LinearizedPair::from_field(const RealField& phi, const ProblemParams& params) {
  params.validate();
  LinearizedPair pair;
  pair.params = params;
  pair.phi = phi;
  pair.potential = RealField(phi.grid);
  for (std::size_t k = 0; k < phi.v.size(); ++k) {
    double u = std::max(phi.v[k], 0.0);
    pair.potential.v[k] = u == 0.0 ? 0.0 : std::pow(u, params.p - 2.0);
  }
  const GridSpec& g = phi.grid;
  double xmax = M_PI * g.nx / g.lx, ymax = M_PI * g.ny / g.ly;
  double sigma_max = xmax * xmax + std::pow(ymax, 2.0 * params.s) + params.omega;
  pair.op_scale = sigma_max + (params.p - 1.0) * norm_linf(pair.potential);
  return pair;
}

RealField LinearizedPair::apply(Which which, const RealField& v) const {
  check_same_grid(v.grid, phi.grid);
  RealField out = apply_L(v, params.s, params.omega);
  double coeff = which == Which::Plus ? params.p - 1.0 : 1.0;
  for (std::size_t k = 0; k < out.v.size(); ++k) out.v[k] -= coeff * potential.v[k] * v.v[k];
  return out;
}

// ---------------------------------------------------------------------------
// block eigensolver
// ---------------------------------------------------------------------------

namespace {

using Block = std::vector<RealField>;

Eigen::MatrixXd gram(const Block& a, const Block& b) {
  Eigen::MatrixXd G(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) G(i, j) = inner(a[i], b[j]);
  return G;
}

Block combine(const Block& s, const Eigen::MatrixXd& c) {
  Block out;
  out.reserve(c.cols());
  for (int j = 0; j < c.cols(); ++j) {
    RealField f(s[0].grid);
    for (std::size_t i = 0; i < s.size(); ++i) axpy(f, c(static_cast<int>(i), j), s[i]);
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace

std::vector<PencilEig> lobpcg(const OpFn& A, const OpFn& B, const OpFn& T, const OpFn& constrain,
                              const GridSpec& grid, int k, const EigOptions& opts) {
  const int m = k + opts.block_extra;
  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> gauss;

  auto constrained = [&](RealField f) { return constrain ? constrain(std::move(f)) : f; };
  auto b_apply = [&](const RealField& f) { return B ? B(f) : f; };

  Block X;
  for (int i = 0; i < m; ++i) {
    RealField f(grid);
    for (double& x : f.v) x = gauss(rng);
    // smooth, admissible start
    f = constrained(T ? T(f) : f);
    X.push_back(std::move(f));
  }

  Block P, AP, BP;
  Block AX, BX;
  auto apply_block = [&](const Block& src, Block& dstA, Block& dstB) {
    dstA.clear();
    dstB.clear();
    for (const RealField& f : src) {
      dstA.push_back(A(f));
      dstB.push_back(b_apply(f));
    }
  };
  apply_block(X, AX, BX);

  double best_res = std::numeric_limits<double>::infinity();
  std::vector<double> theta(m, 0.0);

  for (int it = 0; it < opts.max_iter; ++it) {
    // assemble trial subspace
    Block S = X, AS = AX, BS = BX;
    // residual-based search directions
    Block W;
    {
      // Ritz values in the current X block
      Eigen::MatrixXd gb = gram(X, BX);
      Eigen::MatrixXd ga = gram(X, AX);
      Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(ga, gb);
      Eigen::VectorXd lam = es.eigenvalues();
      Eigen::MatrixXd C = es.eigenvectors();
      X = combine(X, C);
      AX = combine(AX, C);
      BX = combine(BX, C);
      for (int i = 0; i < m; ++i) theta[i] = lam(i);

      bool done = true;
      best_res = 0.0;
      for (int i = 0; i < k; ++i) {
        RealField r = AX[i];
        axpy(r, -theta[i], BX[i]);
        double rn = norm_l2(r) / std::max(norm_l2(X[i]), 1e-300);
        best_res = std::max(best_res, rn);
        if (rn > opts.tol) done = false;
        RealField w = constrained(T ? T(r) : r);
        W.push_back(std::move(w));
      }
      if (done) {
        std::vector<PencilEig> out;
        for (int i = 0; i < k; ++i) {
          PencilEig e;
          e.value = theta[i];
          RealField r = AX[i];
          axpy(r, -theta[i], BX[i]);
          e.residual = norm_l2(r) / std::max(norm_l2(X[i]), 1e-300);
          e.vector = X[i];
          double nv = norm_l2(e.vector);
          if (nv > 0) e.vector *= 1.0 / nv;
          out.push_back(std::move(e));
        }
        return out;
      }
      S = X;
      AS = AX;
      BS = BX;
    }
    Block AW, BW;
    apply_block(W, AW, BW);
    for (std::size_t i = 0; i < W.size(); ++i) {
      S.push_back(W[i]);
      AS.push_back(AW[i]);
      BS.push_back(BW[i]);
    }
    for (std::size_t i = 0; i < P.size(); ++i) {
      S.push_back(P[i]);
      AS.push_back(AP[i]);
      BS.push_back(BP[i]);
    }

    // Rayleigh-Ritz on S with rank filtering of the B-Gram matrix
    Eigen::MatrixXd GB = gram(S, BS);
    GB = 0.5 * (GB + GB.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> gb_es(GB);
    Eigen::VectorXd d = gb_es.eigenvalues();
    double dmax = d.maxCoeff();
    std::vector<int> keep;
    for (int i = 0; i < d.size(); ++i)
      if (d(i) > 1e-12 * dmax) keep.push_back(i);
    Eigen::MatrixXd Y(GB.rows(), keep.size());
    for (std::size_t c = 0; c < keep.size(); ++c)
      Y.col(c) = gb_es.eigenvectors().col(keep[c]) / std::sqrt(d(keep[c]));

    Eigen::MatrixXd GA = gram(S, AS);
    GA = 0.5 * (GA + GA.transpose());
    Eigen::MatrixXd H = Y.transpose() * GA * Y;
    H = 0.5 * (H + H.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> h_es(H);

    int take = std::min<int>(m, static_cast<int>(keep.size()));
    Eigen::MatrixXd C = Y * h_es.eigenvectors().leftCols(take);

    Block Xn = combine(S, C), AXn = combine(AS, C), BXn = combine(BS, C);

    // correction directions: the W/P part of the new Ritz vectors
    Eigen::MatrixXd Cp = C;
    Cp.topRows(m).setZero();
    P = combine(S, Cp);
    AP = combine(AS, Cp);
    BP = combine(BS, Cp);

    X = std::move(Xn);
    AX = std::move(AXn);
    BX = std::move(BXn);
  }
  fail_convergence("lobpcg: no convergence in budgeted iterations (best residual " +
                   std::to_string(best_res) + ")");
}

// ---------------------------------------------------------------------------

namespace {

OpFn resolvent_op(const GridSpec& grid, double s, double omega) {
  MultiplierSymbol r = MultiplierSymbol::resolvent(s, omega);
  (void)grid;
  return [r](const RealField& f) { return apply_symbol(f, r); };
}

OpFn sector_projector(std::optional<ParitySector> sector) {
  if (!sector) return nullptr;
  ParitySector sec = *sector;
  return [sec](const RealField& f) { return project_sector(f, sec); };
}

}  // namespace

std::vector<EigResult> lowest_eigs(const LinearizedPair& pair, Which which,
                                   std::optional<ParitySector> sector, int k,
                                   const EigOptions& opts) {
  if (k < 1 || k > 8) fail_validation("lowest_eigs: k must lie in [1, 8]");
  const GridSpec& g = pair.phi.grid;
  OpFn A = [&pair, which](const RealField& v) { return pair.apply(which, v); };
  OpFn T = resolvent_op(g, pair.params.s, pair.params.omega);
  OpFn constrain = sector_projector(sector);

  std::vector<PencilEig> eigs = lobpcg(A, nullptr, T, constrain, g, k, opts);
  std::vector<EigResult> out;
  for (PencilEig& e : eigs) {
    EigResult r;
    r.value = e.value;
    r.vector = std::move(e.vector);
    r.residual = e.residual;
    r.sector = sector;
    out.push_back(std::move(r));
  }
  return out;
}

int morse_index(const LinearizedPair& pair, Which which, std::optional<ParitySector> sector,
                const EigOptions& opts) {
  const double neg_tol = 1e-6 * pair.op_scale;
  int k = 2;
  for (;;) {
    std::vector<EigResult> eigs = lowest_eigs(pair, which, sector, k, opts);
    int count = 0;
    for (const EigResult& e : eigs)
      if (e.value < -neg_tol) ++count;
    if (count < k || k >= 8) return count;
    k = std::min(8, k + 2);
  }
}

RealField d_omega_phi(const GroundStateSolution& sol) {
  const GridSpec& g = sol.phi.grid;
  const double p = sol.params.p, s = sol.params.s, omega = sol.params.omega;
  RealField dx = deriv_x(sol.phi);
  RealField dy = deriv_y(sol.phi);
  RealField w = boundary_window(g, 0.08);

  RealField masked = sol.phi;
  for (std::size_t k = 0; k < masked.v.size(); ++k) masked.v[k] *= (1.0 - w.v[k]);
  if (norm_l2(masked) > 0.01 * norm_l2(sol.phi))
    fail_convergence("d_omega_phi: boundary window removes > 1% of the mass");

  RealField out(g);
  for (int i = 0; i < g.nx; ++i) {
    double x = g.x(i);
    for (int j = 0; j < g.ny; ++j) {
      std::size_t k = g.index(i, j);
      double y = g.y(j);
      out.v[k] = (sol.phi.v[k] / (p - 2.0) +
                  w.v[k] * (0.5 * x * dx.v[k] + y * dy.v[k] / (2.0 * s))) /
                 omega;
    }
  }
  return out;
}

RealField minres(const OpFn& A, const OpFn& M, const RealField& b, double tol, int max_iter) {
  // Paige-Saunders MINRES with an SPD preconditioner; true-residual checked.
  const double bnorm = norm_l2(b);
  RealField x(b.grid);
  if (bnorm == 0.0) return x;

  RealField r1 = b;
  RealField y = M ? M(r1) : r1;
  double beta1 = inner(r1, y);
  if (!(beta1 > 0)) fail_validation("minres: preconditioner is not positive definite");
  beta1 = std::sqrt(beta1);

  double oldb = 0.0, beta = beta1, dbar = 0.0, epsln = 0.0, phibar = beta1;
  double cs = -1.0, sn = 0.0;
  RealField r2 = r1;
  RealField w0(b.grid), w1(b.grid);

  for (int it = 0; it < max_iter; ++it) {
    RealField v = y;
    v *= 1.0 / beta;
    RealField yk = A(v);
    if (it >= 1) axpy(yk, -beta / oldb, r1);
    double alfa = inner(v, yk);
    axpy(yk, -alfa / beta, r2);
    r1 = r2;
    r2 = yk;
    y = M ? M(r2) : r2;
    oldb = beta;
    double bb = inner(r2, y);
    if (!(bb >= 0)) fail_validation("minres: preconditioner lost positivity");
    beta = std::sqrt(bb);

    double oldeps = epsln;
    double delta = cs * dbar + sn * alfa;
    double gbar = sn * dbar - cs * alfa;
    epsln = sn * beta;
    dbar = -cs * beta;
    double gamma = std::hypot(gbar, beta);
    gamma = std::max(gamma, 1e-300);
    cs = gbar / gamma;
    sn = beta / gamma;
    double phi = cs * phibar;
    phibar = sn * phibar;

    RealField w2 = v;
    axpy(w2, -oldeps, w0);
    axpy(w2, -delta, w1);
    w2 *= 1.0 / gamma;
    axpy(x, phi, w2);
    w0 = std::move(w1);
    w1 = std::move(w2);

    if (phibar <= 0.1 * tol * beta1 || (it + 1) % 50 == 0 || it + 1 == max_iter) {
      RealField res = A(x);
      res -= b;
      if (norm_l2(res) <= tol * bnorm) return x;
    }
  }
  RealField res = A(x);
  res -= b;
  fail_convergence("minres: stagnated with relative residual " +
                   std::to_string(norm_l2(res) / bnorm));
}

RealField solve_Lplus(const LinearizedPair& pair, const RealField& rhs, double tol, int max_iter) {
  check_same_grid(rhs.grid, pair.phi.grid);
  RealField odd = rhs;
  odd -= project_sector(rhs, even_even());
  if (norm_l2(odd) > 1e-10 * norm_l2(rhs))
    fail_validation("solve_Lplus: rhs has an odd component");

  OpFn A = [&pair](const RealField& v) {
    return project_sector(pair.apply(Which::Plus, v), even_even());
  };
  OpFn M = resolvent_op(rhs.grid, pair.params.s, pair.params.omega);
  RealField b = project_sector(rhs, even_even());
  return minres(A, M, b, tol, max_iter);
}

std::optional<UnstableMode> unstable_eigenvalue(const LinearizedPair& pair,
                                                const EigOptions& opts) {
  const GridSpec& g = pair.phi.grid;
  const double s = pair.params.s, omega = pair.params.omega;
  const RealField& phi = pair.phi;
  const double phi_sq = inner(phi, phi);

  // w-space formulation: A = L- L+ L-, B = L-, on even-even orthogonal to
  // phi; with z1 = L- w this is L- L+ z1 = mu z1, mu = -lambda^2.
  OpFn constrain = [&](const RealField& f) {
    RealField out = project_sector(f, even_even());
    axpy(out, -inner(out, phi) / phi_sq, phi);
    return out;
  };
  OpFn A = [&](const RealField& w) {
    RealField z = pair.apply(Which::Minus, w);
    z = pair.apply(Which::Plus, z);
    return pair.apply(Which::Minus, z);
  };
  OpFn B = [&](const RealField& w) { return pair.apply(Which::Minus, w); };
  OpFn T = [&](const RealField& f) {
    MultiplierSymbol r = MultiplierSymbol::resolvent(s, omega);
    return apply_symbol(apply_symbol(apply_symbol(f, r), r), r);
  };

  EigOptions eopts = opts;
  eopts.tol = std::max(opts.tol, 1e-9) * pair.op_scale * pair.op_scale;
  std::vector<PencilEig> eigs = lobpcg(A, B, T, constrain, g, 1, eopts);
  double mu = eigs[0].value;

  if (mu >= -1e-8 * std::max(1.0, pair.op_scale)) return std::nullopt;

  UnstableMode mode;
  mode.lambda = std::sqrt(-mu);
  mode.z1 = pair.apply(Which::Minus, eigs[0].vector);
  double n1 = norm_l2(mode.z1);
  if (n1 == 0.0) fail_convergence("unstable_eigenvalue: degenerate eigenvector");
  mode.z1 *= 1.0 / n1;
  mode.z2 = pair.apply(Which::Plus, mode.z1);
  mode.z2 *= 1.0 / mode.lambda;

  RealField r1 = pair.apply(Which::Plus, mode.z1);
  axpy(r1, -mode.lambda, mode.z2);
  RealField r2 = pair.apply(Which::Minus, mode.z2);
  axpy(r2, mode.lambda, mode.z1);
  double zn = std::sqrt(inner(mode.z1, mode.z1) + inner(mode.z2, mode.z2));
  mode.block_residual = std::sqrt(inner(r1, r1) + inner(r2, r2)) / zn;
  return mode;
}

StabilityReport vk_report(const LinearizedPair& pair, bool compute_lambda) {
  StabilityReport rep;
  rep.n_plus = morse_index(pair, Which::Plus, std::nullopt);
  rep.n_minus = morse_index(pair, Which::Minus, std::nullopt);
  {
    std::vector<EigResult> low = lowest_eigs(pair, Which::Minus, std::nullopt, 2);
    rep.gap_minus = low[1].value;
  }

  const double p = pair.params.p, s = pair.params.s, omega = pair.params.omega;
  const double e = 2.0 / (p - 2.0) - 0.5 - 1.0 / (2.0 * s);
  const double mass = inner(pair.phi, pair.phi);
  rep.d11_closed = -0.5 * e * mass / omega;

  GroundStateSolution shim;  // d_omega_phi needs only phi and params
  shim.params = pair.params;
  shim.phi = pair.phi;
  RealField dwphi = d_omega_phi(shim);
  rep.d11_scaling = -inner(dwphi, pair.phi);
  rep.marginal_band = 1e-4 * std::sqrt(mass) * norm_l2(dwphi);

  RealField inv = solve_Lplus(pair, pair.phi);
  rep.d11_solve = inner(inv, pair.phi);

  auto sgn = [](double x) { return x > 0 ? 1 : (x < 0 ? -1 : 0); };
  bool signs_agree = sgn(rep.d11_closed) == sgn(rep.d11_scaling) &&
                     sgn(rep.d11_scaling) == sgn(rep.d11_solve);
  double min_mag = std::min({std::abs(rep.d11_closed), std::abs(rep.d11_scaling),
                             std::abs(rep.d11_solve)});
  if (!signs_agree && min_mag > rep.marginal_band)
    fail_inconsistency("vk_report: the three D11 estimates disagree in sign");

  if (std::abs(rep.d11_solve) < rep.marginal_band)
    rep.verdict = Verdict::Marginal;
  else
    rep.verdict = rep.d11_solve < 0 ? Verdict::Stable : Verdict::Unstable;

  // Eq. (b:20) with n(L) = n(L+) + n(L-) and n(D) = [D11 < 0]
  rep.k_ham = rep.n_plus + rep.n_minus - (rep.d11_solve < 0 ? 1 : 0);

  if (compute_lambda && rep.verdict == Verdict::Unstable) {
    std::optional<UnstableMode> mode = unstable_eigenvalue(pair);
    if (mode) {
      rep.lambda_unstable = mode->lambda;
      rep.lambda_residual = mode->block_residual;
    }
  }
  return rep;
}

}  // namespace anls
