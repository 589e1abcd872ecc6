#include "anls/spectral_ops.hpp"

#include <Eigen/Dense>

namespace anls {

SpectralField apply_multiplier(const SpectralField& f, const MultiplierSymbol& m) {
  f.grid.validate();
  SpectralField out(f.grid);
  const GridSpec& g = f.grid;
  if (m.is_phase()) {
    for (int i = 0; i < g.nx; ++i) {
      double xi = g.xi(i);
      for (int j = 0; j < g.ny; ++j)
        out.c[g.index(i, j)] = f.c[g.index(i, j)] * m.phase_value(xi, g.eta(j));
    }
    return out;
  }
  for (int i = 0; i < g.nx; ++i) {
    double xi = g.xi(i);
    for (int j = 0; j < g.ny; ++j) {
      double sigma = m.value(xi, g.eta(j));
      if (!std::isfinite(sigma)) fail_validation("multiplier symbol not finite at grid frequency");
      out.c[g.index(i, j)] = f.c[g.index(i, j)] * sigma;
    }
  }
  return out;
}

RealField apply_symbol(const RealField& f, const MultiplierSymbol& m) {
  return inverse_transform_real(apply_multiplier(forward_transform(f), m));
}

RealField apply_symbol_fn(const RealField& f, const std::function<double(double, double)>& sigma) {
  SpectralField u = forward_transform(f);
  const GridSpec& g = f.grid;
  for (int i = 0; i < g.nx; ++i) {
    double xi = g.xi(i);
    for (int j = 0; j < g.ny; ++j) u.c[g.index(i, j)] *= sigma(xi, g.eta(j));
  }
  return inverse_transform_real(u);
}

RealField apply_L(const RealField& f, double s, double omega) {
  if (!(omega > 0)) fail_validation("apply_L requires omega > 0");
  return apply_symbol(f, MultiplierSymbol::full_operator(s, omega));
}

namespace {

RealField deriv_impl(const RealField& f, bool along_x) {
  SpectralField u = forward_transform(f);
  const GridSpec& g = f.grid;
  for (int i = 0; i < g.nx; ++i) {
    for (int j = 0; j < g.ny; ++j) {
      int k = along_x ? g.kx(i) : g.ky(j);
      int n = along_x ? g.nx : g.ny;
      double coord = along_x ? g.xi(i) : g.eta(j);
      cdouble factor = (k == n / 2) ? cdouble(0.0, 0.0) : cdouble(0.0, 2.0 * M_PI * coord);
      u.c[g.index(i, j)] *= factor;
    }
  }
  return inverse_transform_real(u);
}

}  // namespace

RealField deriv_x(const RealField& f) { return deriv_impl(f, true); }
RealField deriv_y(const RealField& f) { return deriv_impl(f, false); }

namespace {

template <typename Field>
double weighted_spectral_sq(const Field& f, const std::function<double(double, double)>& w) {
  SpectralField u = forward_transform(f);
  const GridSpec& g = f.grid;
  double s = 0.0;
  for (int i = 0; i < g.nx; ++i) {
    double xi = g.xi(i);
    for (int j = 0; j < g.ny; ++j) s += w(xi, g.eta(j)) * std::norm(u.c[g.index(i, j)]);
  }
  return s * g.lx * g.ly;
}

double sq(double x) { return x * x; }

}  // namespace

double grad_x_sq(const RealField& f) {
  return weighted_spectral_sq(f, [](double xi, double) { return sq(2.0 * M_PI * xi); });
}

double frac_y_sq(const RealField& f, double s) {
  return weighted_spectral_sq(f, [s](double, double eta) {
    double y = std::abs(2.0 * M_PI * eta);
    return y == 0.0 ? 0.0 : std::pow(y, 2.0 * s);
  });
}

double grad_x_sq(const ComplexField& f) {
  return weighted_spectral_sq(f, [](double xi, double) { return sq(2.0 * M_PI * xi); });
}

double frac_y_sq(const ComplexField& f, double s) {
  return weighted_spectral_sq(f, [s](double, double eta) {
    double y = std::abs(2.0 * M_PI * eta);
    return y == 0.0 ? 0.0 : std::pow(y, 2.0 * s);
  });
}

double sobolev_norm(const RealField& f, SobolevSpace space, double s) {
  if (!(s > 0.0) || !(s <= 1.0)) fail_validation("sobolev_norm: s must lie in (0, 1]");
  int a = space == SobolevSpace::H1s ? 1 : 2;
  double v = weighted_spectral_sq(f, [s, a](double xi, double eta) {
    double y = std::abs(2.0 * M_PI * eta);
    double base = 1.0 + sq(2.0 * M_PI * xi) + (y == 0.0 ? 0.0 : std::pow(y, 2.0 * s));
    return a == 1 ? base : base * base;
  });
  return std::sqrt(v);
}

void dealias_mask(SpectralField& f) {
  const GridSpec& g = f.grid;
  for (int i = 0; i < g.nx; ++i) {
    bool kill_x = std::abs(g.kx(i)) > g.nx / 3;
    for (int j = 0; j < g.ny; ++j) {
      if (kill_x || std::abs(g.ky(j)) > g.ny / 3) f.c[g.index(i, j)] = 0.0;
    }
  }
}

RealField dealias(const RealField& f) {
  SpectralField u = forward_transform(f);
  dealias_mask(u);
  return inverse_transform_real(u);
}

RealField resample(const RealField& f, const GridSpec& target) {
  target.validate();
  const GridSpec& g = f.grid;
  SpectralField u = forward_transform(f);

  using Mat = Eigen::MatrixXcd;
  Mat coeff(g.nx, g.ny);
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j) coeff(i, j) = u.c[g.index(i, j)];

  // Evaluate the interpolant separately per axis: exp(2 pi i k jfrac / n)
  // with jfrac the fractional sample index of the target point. The Nyquist
  // column is split between +n/2 and -n/2 to keep real fields real.
  auto axis_matrix = [](int n, double l, int nt, double lt, double dt_step) {
    Mat E(nt, n);
    for (int t = 0; t < nt; ++t) {
      double coord = (t - nt / 2) * dt_step;
      double jfrac = coord / (l / n) + n / 2.0;  // fractional source index
      for (int i = 0; i < n; ++i) {
        int k = i <= n / 2 ? i : i - n;
        cdouble e = std::polar(1.0, 2.0 * M_PI * k * jfrac / n);
        if (std::abs(k) == n / 2) e = 0.5 * (e + std::polar(1.0, -2.0 * M_PI * k * jfrac / n));
        E(t, i) = e;
      }
    }
    (void)lt;
    return E;
  };

  Mat Ex = axis_matrix(g.nx, g.lx, target.nx, target.lx, target.dx());
  Mat Ey = axis_matrix(g.ny, g.ly, target.ny, target.ly, target.dy());
  Mat vals = Ex * coeff * Ey.transpose();

  RealField out(target);
  for (int i = 0; i < target.nx; ++i)
    for (int j = 0; j < target.ny; ++j) out.v[target.index(i, j)] = vals(i, j).real();
  return out;
}

RealField boundary_window(const GridSpec& g, double taper) {
  if (!(taper > 0.0) || !(taper < 0.5)) fail_validation("window taper must lie in (0, 0.5)");
  auto profile = [taper](double frac) {
    // frac = |coord| / (half box length), in [0, 1]
    double start = 1.0 - 2.0 * taper;
    if (frac <= start) return 1.0;
    double t = std::min(1.0, (frac - start) / (2.0 * taper));
    return sq(std::cos(0.5 * M_PI * t));
  };
  RealField w(g);
  for (int i = 0; i < g.nx; ++i) {
    double wx = profile(std::abs(g.x(i)) / (0.5 * g.lx));
    for (int j = 0; j < g.ny; ++j)
      w.v[g.index(i, j)] = wx * profile(std::abs(g.y(j)) / (0.5 * g.ly));
  }
  return w;
}

}  // namespace anls
