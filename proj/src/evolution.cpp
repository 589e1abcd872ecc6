#include "anls/evolution.hpp"

#include <random>

#include "anls/transform.hpp"

namespace anls {

namespace {

void nonlinear_phase(ComplexField& u, double p, double half_dt) {
  for (cdouble& z : u.v) {
    double a = std::abs(z);
    if (a == 0.0) continue;
    z *= std::polar(1.0, -half_dt * std::pow(a, p - 2.0));
  }
}

void apply_dealias(ComplexField& u) {
  SpectralField s = forward_transform(u);
  dealias_mask(s);
  u = inverse_transform(s);
}

}  // namespace

Conserved conserved_quantities(const ComplexField& u, const ProblemParams& params) {
  Conserved c;
  double m = 0.0, v = 0.0;
  for (const cdouble& z : u.v) {
    double a2 = std::norm(z);
    m += a2;
    v += std::pow(a2, params.p / 2.0);
  }
  double cell = u.grid.cell();
  c.mass = m * cell;
  if (c.mass == 0.0) {
    c.energy = 0.0;
    return c;
  }
  double kin = grad_x_sq(u) + frac_y_sq(u, params.s);
  c.energy = 0.5 * kin - v * cell / params.p;
  return c;
}

EvolutionState make_state(const ComplexField& u0, const ProblemParams& params, double t0) {
  EvolutionState st;
  st.u = u0;
  st.t = t0;
  Conserved c = conserved_quantities(u0, params);
  st.mass = c.mass;
  st.energy = c.energy;
  return st;
}

EvolutionState split_step(const EvolutionState& state, const ProblemParams& params, double dt,
                          bool dealias) {
  EvolutionState next = state;
  nonlinear_phase(next.u, params.p, 0.5 * dt);
  if (dealias) apply_dealias(next.u);

  SpectralField s = forward_transform(next.u);
  s = apply_multiplier(s, MultiplierSymbol::linear_phase(params.s, dt));
  next.u = inverse_transform(s);

  nonlinear_phase(next.u, params.p, 0.5 * dt);
  if (dealias) apply_dealias(next.u);

  next.t += dt;
  if (!next.u.finite()) {
    fail_convergence("split_step: non-finite state at t = " + std::to_string(state.t) +
                     " (blow-up)");
  }
  return next;
}

EvolutionState propagate(EvolutionState state, const ProblemParams& params,
                         const PropagatorConfig& cfg,
                         const std::function<void(const EvolutionState&)>& on_snapshot) {
  if (!(cfg.dt != 0.0)) fail_validation("propagate: dt must be nonzero");
  if (!(cfg.t_end > 0.0)) fail_validation("propagate: t_end must be positive");
  long n_steps = std::lround(cfg.t_end / std::abs(cfg.dt));
  if (n_steps < 1) fail_validation("propagate: t_end shorter than one step");

  for (long k = 0; k < n_steps; ++k) {
    state = split_step(state, params, cfg.dt, cfg.dealias);
    bool record = cfg.record_every > 0 && ((k + 1) % cfg.record_every == 0 || k + 1 == n_steps);
    if (record && on_snapshot) {
      Conserved c = conserved_quantities(state.u, params);
      state.mass = c.mass;
      state.energy = c.energy;
      on_snapshot(state);
    }
  }
  Conserved c = conserved_quantities(state.u, params);
  state.mass = c.mass;
  state.energy = c.energy;
  return state;
}

GrowthReport measure_growth_rate(const GroundStateSolution& sol, const PerturbationSpec& pert,
                                 const PropagatorConfig& cfg) {
  const RealField& phi = sol.phi;
  const GridSpec& g = phi.grid;
  const double phi_norm = norm_l2(phi);
  if (!(pert.amplitude_rel > 0) || pert.amplitude_rel > 1e-3)
    fail_validation("measure_growth_rate: amplitude must lie in (0, 1e-3] relative");
  const double amplitude = pert.amplitude_rel * phi_norm;

  // build the normalized perturbation direction
  ComplexField w(g);
  if (pert.mode == PerturbationSpec::Mode::Eigvec) {
    if (!pert.eig_pair) fail_validation("measure_growth_rate: eigvec mode needs the mode pair");
    const auto& [z1, z2] = *pert.eig_pair;
    check_same_grid(z1.grid, g);
    for (std::size_t k = 0; k < w.v.size(); ++k) w.v[k] = cdouble(z1.v[k], z2.v[k]);
  } else {
    std::mt19937_64 rng(pert.seed);
    std::normal_distribution<double> gauss;
    RealField re(g), im(g);
    for (std::size_t k = 0; k < re.v.size(); ++k) {
      re.v[k] = gauss(rng);
      im.v[k] = gauss(rng);
    }
    // low-pass to keep the perturbation in the resolved band
    re = apply_symbol(re, MultiplierSymbol::resolvent(sol.params.s, sol.params.omega));
    im = apply_symbol(im, MultiplierSymbol::resolvent(sol.params.s, sol.params.omega));
    for (std::size_t k = 0; k < w.v.size(); ++k) w.v[k] = cdouble(re.v[k], im.v[k]);
  }
  double wn = norm_l2(w);
  if (wn == 0.0) fail_validation("measure_growth_rate: zero perturbation");

  ComplexField u0(g);
  for (std::size_t k = 0; k < u0.v.size(); ++k)
    u0.v[k] = cdouble(phi.v[k], 0.0) + (amplitude / wn) * w.v[k];

  // gauge-aligned deviation: minimizing theta makes <u, phi> e^{i theta} real positive
  auto deviation = [&](const ComplexField& u) {
    cdouble ip = 0.0;
    for (std::size_t k = 0; k < u.v.size(); ++k) ip += std::conj(u.v[k]) * phi.v[k];
    double a = std::abs(ip) * g.cell();
    double un = norm_l2(u);
    double d2 = un * un + phi_norm * phi_norm - 2.0 * a;
    return std::sqrt(std::max(d2, 0.0));
  };

  GrowthReport rep;
  const double d_lo = 10.0 * amplitude, d_hi = 1e-2 * phi_norm;
  EvolutionState st = make_state(u0, sol.params, 0.0);
  long n_steps = std::lround(cfg.t_end / cfg.dt);
  int stride = cfg.record_every > 0 ? cfg.record_every : 20;
  rep.deviation.emplace_back(0.0, deviation(st.u));

  std::vector<double> ts, lds;
  for (long k = 0; k < n_steps; ++k) {
    st = split_step(st, sol.params, cfg.dt, cfg.dealias);
    if ((k + 1) % stride == 0 || k + 1 == n_steps) {
      double d = deviation(st.u);
      rep.deviation.emplace_back(st.t, d);
      rep.max_deviation = std::max(rep.max_deviation, d);
      if (d >= d_lo && d <= d_hi) {
        ts.push_back(st.t);
        lds.push_back(std::log(d));
      }
      if (d > d_hi && ts.size() >= 6) break;  // window fully crossed
    }
  }

  if (ts.size() < 6) {
    rep.lambda_est = 0.0;
    rep.growth_detected = false;
    return rep;
  }
  double n = ts.size(), sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    sx += ts[i];
    sy += lds[i];
    sxx += ts[i] * ts[i];
    sxy += ts[i] * lds[i];
    syy += lds[i] * lds[i];
  }
  double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  double intercept = (sy - slope * sx) / n;
  double ss_tot = syy - sy * sy / n, ss_res = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    double e = lds[i] - (intercept + slope * ts[i]);
    ss_res += e * e;
  }
  rep.lambda_est = slope;
  rep.growth_detected = slope > 0;
  rep.window_t0 = ts.front();
  rep.window_t1 = ts.back();
  rep.fit_r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  return rep;
}

}  // namespace anls
