#include "anls/radial_oracle.hpp"

namespace anls {

namespace {

struct OdeState {
  double u, du;
};

// u'' = -u'/r + u - u^(p-1), integrated with classical RK4
OdeState rk4_step(const OdeState& s, double r, double h, double p) {
  auto f = [p](double r, const OdeState& st) {
    double nl = st.u > 0 ? std::pow(st.u, p - 1.0) : -std::pow(-st.u, p - 1.0);
    return OdeState{st.du, -st.du / r + st.u - nl};
  };
  OdeState k1 = f(r, s);
  OdeState k2 = f(r + 0.5 * h, {s.u + 0.5 * h * k1.u, s.du + 0.5 * h * k1.du});
  OdeState k3 = f(r + 0.5 * h, {s.u + 0.5 * h * k2.u, s.du + 0.5 * h * k2.du});
  OdeState k4 = f(r + h, {s.u + h * k3.u, s.du + h * k3.du});
  return {s.u + h / 6.0 * (k1.u + 2 * k2.u + 2 * k3.u + k4.u),
          s.du + h / 6.0 * (k1.du + 2 * k2.du + 2 * k3.du + k4.du)};
}

enum class Shot { CrossedZero, TurnedUp, Decayed };

Shot classify_shot(double a, double p, double r_max, double h, std::vector<double>* store) {
  // series start: u = a + c r^2, 4c = a - a^(p-1)
  double c = 0.25 * (a - std::pow(a, p - 1.0));
  double r0 = h;
  OdeState s{a + c * r0 * r0, 2.0 * c * r0};
  if (store) {
    store->clear();
    store->push_back(a);    // r = 0
    store->push_back(s.u);  // r = h (series start)
  }
  double r = r0;
  while (r < r_max) {
    s = rk4_step(s, r, h, p);
    r += h;
    if (store) store->push_back(s.u);
    if (s.u <= 0.0) return Shot::CrossedZero;
    if (s.du > 0.0 && s.u < 0.8 * a) return Shot::TurnedUp;
  }
  return Shot::Decayed;
}

}  // namespace

RadialProfile radial_ground_state(double p, double r_max, double h) {
  if (!(p > 2.0)) fail_validation("radial_ground_state: p must exceed 2");

  // bracket: low amplitudes turn up, high amplitudes cross zero
  double lo = 1.0 + 1e-6, hi = 1.5;
  while (classify_shot(hi, p, r_max, h, nullptr) != Shot::CrossedZero) {
    hi *= 1.5;
    if (hi > 1e3) fail_convergence("radial_ground_state: failed to bracket from above");
  }
  if (classify_shot(lo, p, r_max, h, nullptr) == Shot::CrossedZero)
    fail_convergence("radial_ground_state: failed to bracket from below");

  for (int it = 0; it < 90 && (hi - lo) > 1e-15 * hi; ++it) {
    double mid = 0.5 * (lo + hi);
    if (classify_shot(mid, p, r_max, h, nullptr) == Shot::CrossedZero)
      hi = mid;
    else
      lo = mid;
  }

  RadialProfile prof;
  prof.p = p;
  prof.amplitude = 0.5 * (lo + hi);
  prof.h = h;
  classify_shot(prof.amplitude, p, r_max, h, &prof.u);

  // graft the e^{-r}/sqrt(r) tail where shooting drift sets in
  std::size_t cut = prof.u.size();
  for (std::size_t k = 1; k < prof.u.size(); ++k) {
    if (prof.u[k] < 1e-9 * prof.amplitude || prof.u[k] > prof.u[k - 1]) {
      cut = k;
      break;
    }
  }
  if (cut < prof.u.size()) {
    double r_cut = cut * h;
    prof.tail_r = r_cut;
    prof.tail_c = prof.u[cut] * std::exp(r_cut) * std::sqrt(r_cut);
    prof.u.resize(cut + 1);
  } else {
    prof.tail_r = (prof.u.size() - 1) * h;
    prof.tail_c = prof.u.back() * std::exp(prof.tail_r) * std::sqrt(prof.tail_r);
  }
  return prof;
}

double RadialProfile::eval(double r) const {
  r = std::abs(r);
  if (r >= tail_r) return tail_c * std::exp(-r) / std::sqrt(std::max(r, 1e-12));
  double q = r / h;
  std::size_t k = static_cast<std::size_t>(q);
  if (k + 1 >= u.size()) return u.back();
  // cubic interpolation on four neighbours where possible
  if (k >= 1 && k + 2 < u.size()) {
    double t = q - k;
    double m1 = u[k - 1], z0 = u[k], z1 = u[k + 1], z2 = u[k + 2];
    double a = z0;
    double b = 0.5 * (z1 - m1);
    double c2 = m1 - 2.5 * z0 + 2.0 * z1 - 0.5 * z2;
    double d = 0.5 * (z2 - m1) + 1.5 * (z0 - z1);
    return a + t * (b + t * (c2 + t * d));
  }
  double t = q - k;
  return (1.0 - t) * u[k] + t * u[k + 1];
}

double RadialProfile::ode_residual() const {
  // five-point fourth-order stencils on the stored samples
  double max_res = 0.0;
  std::size_t n = u.size();
  for (std::size_t k = 2; k + 2 < n; ++k) {
    double r = k * h;
    if (u[k] < 1e-7 * amplitude) break;  // below this the relative scale is meaningless
    double d1 = (-u[k + 2] + 8 * u[k + 1] - 8 * u[k - 1] + u[k - 2]) / (12.0 * h);
    double d2 = (-u[k + 2] + 16 * u[k + 1] - 30 * u[k] + 16 * u[k - 1] - u[k - 2]) /
                (12.0 * h * h);
    double res = d2 + d1 / r - u[k] + std::pow(u[k], p - 1.0);
    max_res = std::max(max_res, std::abs(res));
  }
  return max_res / amplitude;
}

RealField radial_to_grid(const RadialProfile& prof, const GridSpec& grid) {
  grid.validate();
  RealField out(grid);
  for (int i = 0; i < grid.nx; ++i) {
    double x = grid.x(i);
    for (int j = 0; j < grid.ny; ++j) {
      double y = grid.y(j);
      out.v[grid.index(i, j)] = prof.eval(std::hypot(x, y));
    }
  }
  return out;
}

}  // namespace anls
