#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace anls {

using cdouble = std::complex<double>;

/// Error categories, mapped to distinct CLI exit codes.
enum class ErrorKind { Validation, NonConvergence, Inconsistency, Io };

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail_validation(const std::string& msg) {
  throw Error(ErrorKind::Validation, msg);
}
[[noreturn]] inline void fail_convergence(const std::string& msg) {
  throw Error(ErrorKind::NonConvergence, msg);
}
[[noreturn]] inline void fail_inconsistency(const std::string& msg) {
  throw Error(ErrorKind::Inconsistency, msg);
}
[[noreturn]] inline void fail_io(const std::string& msg) { throw Error(ErrorKind::Io, msg); }

inline bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

/// Periodic rectangle [-lx/2, lx/2) x [-ly/2, ly/2) sampled on nx x ny points,
/// x as the slow (row) index. nx, ny must be powers of two.
struct GridSpec {
  int nx = 0;
  int ny = 0;
  double lx = 0.0;
  double ly = 0.0;

  void validate() const {
    if (!is_pow2(nx) || !is_pow2(ny)) fail_validation("grid sizes must be positive powers of two");
    if (!(lx > 0.0) || !(ly > 0.0)) fail_validation("grid periods must be positive");
  }

  std::size_t size() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }
  double dx() const { return lx / nx; }
  double dy() const { return ly / ny; }
  double cell() const { return dx() * dy(); }
  double x(int i) const { return (i - nx / 2) * dx(); }
  double y(int j) const { return (j - ny / 2) * dy(); }

  // integer frequency of row/column index under the symmetric convention
  int kx(int i) const { return i <= nx / 2 ? i : i - nx; }
  int ky(int j) const { return j <= ny / 2 ? j : j - ny; }
  // frequency coordinates xi = kx/lx, eta = ky/ly (cycles per unit length)
  double xi(int i) const { return kx(i) / lx; }
  double eta(int j) const { return ky(j) / ly; }

  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(ny) + static_cast<std::size_t>(j);
  }

  bool operator==(const GridSpec& o) const {
    return nx == o.nx && ny == o.ny && lx == o.lx && ly == o.ly;
  }
  bool operator!=(const GridSpec& o) const { return !(*this == o); }
};

struct RealField {
  GridSpec grid;
  std::vector<double> v;

  RealField() = default;
  explicit RealField(const GridSpec& g, double fill = 0.0) : grid(g), v(g.size(), fill) {
    g.validate();
  }

  double& at(int i, int j) { return v[grid.index(i, j)]; }
  double at(int i, int j) const { return v[grid.index(i, j)]; }
  bool finite() const {
    for (double x : v)
      if (!std::isfinite(x)) return false;
    return true;
  }
};

struct ComplexField {
  GridSpec grid;
  std::vector<cdouble> v;

  ComplexField() = default;
  explicit ComplexField(const GridSpec& g, cdouble fill = {}) : grid(g), v(g.size(), fill) {
    g.validate();
  }

  cdouble& at(int i, int j) { return v[grid.index(i, j)]; }
  cdouble at(int i, int j) const { return v[grid.index(i, j)]; }
  bool finite() const {
    for (const cdouble& z : v)
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
  }
};

/// Discrete Fourier coefficients under the e^{-2 pi i x.xi} convention,
/// normalized so the (0,0) coefficient equals the field mean.
struct SpectralField {
  GridSpec grid;
  std::vector<cdouble> c;

  SpectralField() = default;
  explicit SpectralField(const GridSpec& g) : grid(g), c(g.size()) { g.validate(); }

  cdouble& at(int i, int j) { return c[grid.index(i, j)]; }
  cdouble at(int i, int j) const { return c[grid.index(i, j)]; }
};

// --- quadrature-weighted algebra on real fields ---

inline void check_same_grid(const GridSpec& a, const GridSpec& b) {
  if (a != b) fail_validation("grid mismatch");
}

inline double inner(const RealField& f, const RealField& g) {
  check_same_grid(f.grid, g.grid);
  double s = 0.0;
  for (std::size_t k = 0; k < f.v.size(); ++k) s += f.v[k] * g.v[k];
  return s * f.grid.cell();
}

inline double norm_l2(const RealField& f) { return std::sqrt(inner(f, f)); }

inline double norm_lp(const RealField& f, double p) {
  double s = 0.0;
  for (double x : f.v) s += std::pow(std::abs(x), p);
  return std::pow(s * f.grid.cell(), 1.0 / p);
}

inline double norm_linf(const RealField& f) {
  double m = 0.0;
  for (double x : f.v) m = std::max(m, std::abs(x));
  return m;
}

inline double norm_l2(const ComplexField& f) {
  double s = 0.0;
  for (const cdouble& z : f.v) s += std::norm(z);
  return std::sqrt(s * f.grid.cell());
}

inline cdouble inner(const ComplexField& f, const ComplexField& g) {
  check_same_grid(f.grid, g.grid);
  cdouble s = 0.0;
  for (std::size_t k = 0; k < f.v.size(); ++k) s += std::conj(f.v[k]) * g.v[k];
  return s * f.grid.cell();
}

inline RealField& operator+=(RealField& f, const RealField& g) {
  check_same_grid(f.grid, g.grid);
  for (std::size_t k = 0; k < f.v.size(); ++k) f.v[k] += g.v[k];
  return f;
}

inline RealField& operator-=(RealField& f, const RealField& g) {
  check_same_grid(f.grid, g.grid);
  for (std::size_t k = 0; k < f.v.size(); ++k) f.v[k] -= g.v[k];
  return f;
}

inline RealField& operator*=(RealField& f, double a) {
  for (double& x : f.v) x *= a;
  return f;
}

inline RealField operator+(RealField f, const RealField& g) { return f += g; }
inline RealField operator-(RealField f, const RealField& g) { return f -= g; }
inline RealField operator*(double a, RealField f) { return f *= a; }

/// f += a*g
inline void axpy(RealField& f, double a, const RealField& g) {
  check_same_grid(f.grid, g.grid);
  for (std::size_t k = 0; k < f.v.size(); ++k) f.v[k] += a * g.v[k];
}

inline double rel_l2_distance(const RealField& a, const RealField& b) {
  RealField d = a;
  d -= b;
  double nb = norm_l2(b);
  return nb > 0 ? norm_l2(d) / nb : norm_l2(d);
}

}  // namespace anls
