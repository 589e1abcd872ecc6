#include "anls/continuation.hpp"

namespace anls {

namespace {

RealField signed_power(const RealField& u, double p) {
  RealField out(u.grid);
  for (std::size_t k = 0; k < u.v.size(); ++k) {
    double a = std::abs(u.v[k]);
    out.v[k] = a == 0.0 ? 0.0 : std::copysign(std::pow(a, p - 1.0), u.v[k]);
  }
  return out;
}

RealField fixed_point_residual(const RealField& u, double s, double p) {
  RealField f = apply_symbol(signed_power(u, p), MultiplierSymbol::resolvent(s, 1.0));
  RealField out = u;
  out -= f;
  return out;  // F(u) = u - R[|u|^{p-2} u]
}

double branch_kernel_min(const RealField& field, double s, double p) {
  ProblemParams params{s, p, 1.0};
  LinearizedPair pair = LinearizedPair::from_field(field, params);
  std::vector<EigResult> eigs = lowest_eigs(pair, Which::Plus, even_even(), 2);
  return std::abs(eigs[1].value);
}

}  // namespace

BranchPoint newton_correct(const RealField& guess, double s, double p, double tol, int max_newton,
                           bool track_kernel) {
  if (classify_exponents(s, p) == ExponentClass::NoSolitons)
    fail_validation("newton_correct: (s, p) outside the existence range");
  RealField u = project_sector(guess, even_even());
  double un = norm_l2(u);
  if (un == 0.0) fail_validation("newton_correct: zero guess");

  ProblemParams params{s, p, 1.0};
  double res = norm_l2(fixed_point_residual(u, s, p)) / un;
  int grow_streak = 0;
  int step = 0;
  for (; step < max_newton && res > tol; ++step) {
    LinearizedPair pair = LinearizedPair::from_field(u, params);
    RealField g = apply_L(fixed_point_residual(u, s, p), s, 1.0);
    g *= -1.0;
    RealField delta = solve_Lplus(pair, g, std::max(1e-12, 1e-3 * tol));
    u += delta;
    u = project_sector(u, even_even());
    un = norm_l2(u);
    double next_res = norm_l2(fixed_point_residual(u, s, p)) / un;
    grow_streak = next_res > res ? grow_streak + 1 : 0;
    res = next_res;
    if (grow_streak >= 3)
      fail_convergence("newton_correct: residual grew over 3 consecutive steps (" +
                       std::to_string(res) + ")");
  }
  if (res > tol)
    fail_convergence("newton_correct: no convergence, residual " + std::to_string(res));

  BranchPoint pt;
  pt.s = s;
  pt.field = u;
  pt.newton_residual = res;
  pt.newton_steps = step;
  pt.xp_norm = norm_l2(u) + norm_lp(u, p);
  pt.apriori = pohozaev_residuals(u, params);
  pt.kernel_min = track_kernel ? branch_kernel_min(u, s, p) : 0.0;
  return pt;
}

BranchTrace continue_branch(const GroundStateSolution& start, double s_target, double p,
                            const ContinuationConfig& cfg) {
  if (start.params.omega != 1.0) fail_validation("continue_branch: branch runs at omega = 1");
  if (start.params.p != p) fail_validation("continue_branch: exponent mismatch");
  if (!(s_target > start.params.s) || !(s_target <= 1.0))
    fail_validation("continue_branch: target must satisfy s0 < s_target <= 1");

  BranchTrace trace;
  trace.p = p;

  BranchPoint base = newton_correct(start.phi, start.params.s, p, cfg.tol, cfg.max_newton,
                                    cfg.track_kernel);
  trace.points.push_back(base);

  double ds = cfg.ds_init;
  while (trace.points.back().s < s_target) {
    const BranchPoint& last = trace.points.back();
    double s_next = std::min(last.s + ds, s_target);

    // monotone admissibility: raising s only raises p_s, but check anyway
    if (classify_exponents(s_next, p) == ExponentClass::NoSolitons) {
      trace.terminated = BranchEnd::SolverFailure;
      return trace;
    }

    RealField guess = last.field;
    if (trace.points.size() >= 2) {
      const BranchPoint& prev = trace.points[trace.points.size() - 2];
      double h_old = last.s - prev.s;
      if (h_old > 0) {
        double w = (s_next - last.s) / h_old;
        RealField diff = last.field;
        diff -= prev.field;
        axpy(guess, w, diff);
      }
    }

    bool accepted = false;
    try {
      BranchPoint pt = newton_correct(guess, s_next, p, cfg.tol, cfg.max_newton, cfg.track_kernel);
      trace.points.push_back(std::move(pt));
      accepted = true;
    } catch (const Error&) {
      accepted = false;
    }

    if (accepted) {
      if (trace.points.back().newton_steps <= 3) ds = std::min(cfg.ds_max, 1.3 * ds);
    } else {
      ds *= 0.5;
      if (ds < cfg.ds_min) {
        trace.terminated = cfg.track_kernel && trace.points.back().kernel_min < 1e-6
                               ? BranchEnd::KernelCollapse
                               : BranchEnd::SolverFailure;
        return trace;
      }
    }
  }
  trace.terminated = BranchEnd::ReachedTarget;
  return trace;
}

AprioriRatios apriori_ratios(const BranchPoint& point, double p) {
  AprioriRatios r;
  ProblemParams params{point.s, p, 1.0};
  PohozaevReport rep = pohozaev_residuals(point.field, params);
  r.m = rep.mass;
  r.t = rep.kinetic;
  r.v = rep.potential;
  r.ratio_scale = rep.r_scale;
  r.ratio_energy = rep.r_energy;
  return r;
}

double kernel_monitor(const BranchPoint& point, double p) {
  return branch_kernel_min(point.field, point.s, p);
}

IsotropicComparison compare_isotropic_limit(const BranchPoint& endpoint, double p) {
  if (endpoint.s < 0.99) fail_validation("compare_isotropic_limit: endpoint must have s >= 0.99");
  RadialProfile prof = radial_ground_state(p);

  IsotropicComparison cmp;
  cmp.oracle_residual = prof.ode_residual();

  const GridSpec& g = endpoint.field.grid;
  RealField oracle = radial_to_grid(prof, g);

  // integer-shift alignment via the peak locations (both fields are centered
  // bell profiles, so the shift is normally zero)
  auto argmax = [&](const RealField& f) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < f.v.size(); ++k)
      if (f.v[k] > f.v[best]) best = k;
    return std::make_pair(static_cast<int>(best / g.ny), static_cast<int>(best % g.ny));
  };
  auto [pi, pj] = argmax(endpoint.field);
  auto [oi, oj] = argmax(oracle);
  cmp.shift_x = pi - oi;
  cmp.shift_y = pj - oj;

  double max_diff = 0.0, sum_sq = 0.0;
  for (int i = 0; i < g.nx; ++i) {
    int is = ((i - cmp.shift_x) % g.nx + g.nx) % g.nx;
    for (int j = 0; j < g.ny; ++j) {
      int js = ((j - cmp.shift_y) % g.ny + g.ny) % g.ny;
      double d = endpoint.field.at(i, j) - oracle.at(is, js);
      max_diff = std::max(max_diff, std::abs(d));
      sum_sq += d * d;
    }
  }
  cmp.l2_distance = std::sqrt(sum_sq * g.cell());
  cmp.linf_distance = max_diff;
  double on = norm_l2(oracle);
  cmp.l2_relative = on > 0 ? cmp.l2_distance / on : cmp.l2_distance;
  return cmp;
}

}  // namespace anls
