#include "anls/green_kernel.hpp"

#include <Eigen/Dense>

namespace anls {

namespace {

/// G_beta(z) = int_R e^{-|w|^beta} e^{-2 pi i z w} dw  (even in z).
/// The contour w = r e^{i theta} trades the oscillation for decay; on a log
/// grid in r the cost is uniform in z.
double stable_characteristic(double z, double beta, double du) {
  z = std::abs(z);
  if (beta >= 2.0) return std::sqrt(M_PI) * std::exp(-M_PI * M_PI * z * z);  // exact Gaussian

  const double theta = std::min(M_PI / 4.0, 0.45 * M_PI / beta);
  const double ca = std::cos(beta * theta);
  const cdouble eit = std::polar(1.0, theta);
  const cdouble ealpha = std::polar(1.0, beta * theta);

  const double r_max = std::pow(45.0 / ca, 1.0 / beta);
  const double u_lo = -42.0;
  const double u_hi = std::log(r_max);

  cdouble acc = 0.0;
  for (double u = u_lo; u <= u_hi; u += du) {
    double r = std::exp(u);
    cdouble arg = -std::pow(r, beta) * ealpha + cdouble(0.0, 2.0 * M_PI * z * r) * eit;
    acc += std::exp(arg) * r;  // dr = r du on the log grid
  }
  return 2.0 * (eit * acc).real() * du;
}

struct GaussLaguerre {
  std::vector<double> nodes, weights;
};

/// Golub-Welsch nodes/weights for weight t^a e^{-t} on (0, inf).
GaussLaguerre gauss_laguerre(int n, double a) {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    J(i, i) = 2.0 * i + a + 1.0;
    if (i > 0) {
      double b = std::sqrt(i * (i + a));
      J(i, i - 1) = b;
      J(i - 1, i) = b;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  GaussLaguerre out;
  double mu0 = std::tgamma(a + 1.0);
  for (int i = 0; i < n; ++i) {
    out.nodes.push_back(es.eigenvalues()(i));
    double v0 = es.eigenvectors()(0, i);
    out.weights.push_back(mu0 * v0 * v0);
  }
  return out;
}

}  // namespace

double heat_factor(double v, double t, double beta, double osc_step) {
  // int e^{-t|w|^beta} e^{-2 pi i v w} dw = t^(-1/beta) G_beta(v t^(-1/beta))
  double scale = std::pow(t, -1.0 / beta);
  return scale * stable_characteristic(v * scale, beta, osc_step);
}

double green_kernel_unchecked(double x, double y, double s, KernelOrder order,
                              const GreenQuadrature& quad) {
  if (!(s > 0.0) || !(s <= 1.0)) fail_validation("green_kernel: s must lie in (0, 1]");
  if (x == 0.0 && y == 0.0) fail_validation("green_kernel: singular at the origin");
  if (quad.n_nodes < 4) fail_validation("green_kernel: too few quadrature nodes");

  const double beta = order == KernelOrder::Full ? 2.0 * s : s;
  if (order == KernelOrder::Full) {
    // K = sqrt(pi) int t^(-1/2) e^{-t} [e^{-pi^2 x^2 / t} Hs(y,t)] dt
    GaussLaguerre gl = gauss_laguerre(quad.n_nodes, -0.5);
    double acc = 0.0;
    for (int i = 0; i < quad.n_nodes; ++i) {
      double t = gl.nodes[i];
      double fx = std::exp(-M_PI * M_PI * x * x / t);
      acc += gl.weights[i] * fx * heat_factor(y, t, beta, quad.osc_step);
    }
    return std::sqrt(M_PI) * acc;
  }
  // Half order: Poisson x-factor 2t / (t^2 + 4 pi^2 x^2)
  GaussLaguerre gl = gauss_laguerre(quad.n_nodes, 0.0);
  double acc = 0.0;
  for (int i = 0; i < quad.n_nodes; ++i) {
    double t = gl.nodes[i];
    double fx = 2.0 * t / (t * t + 4.0 * M_PI * M_PI * x * x);
    acc += gl.weights[i] * fx * heat_factor(y, t, beta, quad.osc_step);
  }
  return acc;
}

double green_kernel(double x, double y, double s, KernelOrder order, const GreenQuadrature& quad) {
  double coarse = green_kernel_unchecked(x, y, s, order, quad);
  GreenQuadrature fine = quad;
  fine.n_nodes *= 2;
  fine.osc_step *= 0.5;
  double refined = green_kernel_unchecked(x, y, s, order, fine);
  if (std::abs(refined - coarse) > 1e-6 * std::abs(refined))
    fail_convergence("green_kernel: quadrature not converged at (" + std::to_string(x) + ", " +
                     std::to_string(y) + ")");
  return refined;
}

KernelDecayFit green_kernel_decay_fit(double s, KernelOrder order, double y_min, double y_max,
                                      int n_points, const GreenQuadrature& quad) {
  if (!(y_max > y_min) || !(y_min > 0) || n_points < 4)
    fail_validation("green_kernel_decay_fit: bad window");
  // convergence certified once at the window ends
  green_kernel(0.0, y_min, s, order, quad);
  green_kernel(0.0, y_max, s, order, quad);

  KernelDecayFit fit;
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (int i = 0; i < n_points; ++i) {
    double ly = std::log(y_min) + (std::log(y_max) - std::log(y_min)) * i / (n_points - 1);
    double y = std::exp(ly);
    double k = green_kernel_unchecked(0.0, y, s, order, quad);
    if (!(k > 0)) fail_inconsistency("green_kernel_decay_fit: kernel not positive at y = " +
                                     std::to_string(y));
    fit.samples.emplace_back(y, k);
    double lk = std::log(k);
    sx += ly;
    sy += lk;
    sxx += ly * ly;
    sxy += ly * lk;
    syy += lk * lk;
  }
  double n = n_points;
  double den = n * sxx - sx * sx;
  fit.slope = (n * sxy - sx * sy) / den;
  double ss_tot = syy - sy * sy / n;
  double ss_res = 0.0;
  for (auto& [y, k] : fit.samples) {
    double pred = (sy - fit.slope * sx) / n + fit.slope * std::log(y);
    double e = std::log(k) - pred;
    ss_res += e * e;
  }
  fit.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

}  // namespace anls
