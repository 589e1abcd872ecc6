#pragma once

#include "anls/field.hpp"

namespace anls {

/// Fourier symbols of the constant-coefficient operators, evaluated at the
/// frequency coordinates (xi, eta). Derivatives follow the 2 pi convention:
/// -dxx has symbol (2 pi xi)^2 and (-dyy)^s has symbol (2 pi |eta|)^(2s),
/// so the fractional symbol reduces exactly to the classical one at s = 1.
struct MultiplierSymbol {
  enum class Kind {
    SecondX,       // (2 pi xi)^2
    FracY,         // (2 pi |eta|)^(2s)
    HalfX,         // 2 pi |xi|
    HalfFracY,     // (2 pi |eta|)^s
    FullOperator,  // (2 pi xi)^2 + (2 pi |eta|)^(2s) + omega
    Resolvent,     // inverse of FullOperator, omega > 0
    HalfResolvent, // 1 / (2 pi |xi| + (2 pi |eta|)^s + omega), omega > 0
    SobolevWeight, // (1 + (2 pi xi)^2 + (2 pi |eta|)^(2s))^order
    LinearPhase,   // exp(i dt ((2 pi xi)^2 + (2 pi |eta|)^(2s))), unit modulus
  };

  Kind kind = Kind::SecondX;
  double s = 1.0;
  double omega = 0.0;
  double dt = 0.0;
  int order = 1;

  static MultiplierSymbol second_x() { return {Kind::SecondX}; }
  static MultiplierSymbol frac_y(double s) {
    require_s(s);
    return {Kind::FracY, s};
  }
  static MultiplierSymbol half_x() { return {Kind::HalfX}; }
  static MultiplierSymbol half_frac_y(double s) {
    require_s(s);
    return {Kind::HalfFracY, s};
  }
  static MultiplierSymbol full_operator(double s, double omega) {
    require_s(s);
    if (!(omega > 0)) fail_validation("FullOperator requires omega > 0");
    return {Kind::FullOperator, s, omega};
  }
  static MultiplierSymbol resolvent(double s, double omega) {
    require_s(s);
    if (!(omega > 0)) fail_validation("Resolvent requires omega > 0");
    return {Kind::Resolvent, s, omega};
  }
  static MultiplierSymbol half_resolvent(double s, double omega) {
    require_s(s);
    if (!(omega > 0)) fail_validation("HalfResolvent requires omega > 0");
    return {Kind::HalfResolvent, s, omega};
  }
  static MultiplierSymbol sobolev_weight(int order, double s) {
    require_s(s);
    if (order < 1 || order > 2) fail_validation("SobolevWeight order must be 1 or 2");
    MultiplierSymbol m{Kind::SobolevWeight, s};
    m.order = order;
    return m;
  }
  static MultiplierSymbol linear_phase(double s, double dt) {
    require_s(s);
    MultiplierSymbol m{Kind::LinearPhase, s};
    m.dt = dt;
    return m;
  }

  bool is_phase() const { return kind == Kind::LinearPhase; }

  /// Real multiplicative factor at (xi, eta); >= 0 for every non-phase kind.
  double value(double xi, double eta) const {
    const double X2 = square(2.0 * M_PI * xi);
    const double Ya = std::abs(2.0 * M_PI * eta);
    switch (kind) {
      case Kind::SecondX: return X2;
      case Kind::FracY: return frac_pow(Ya, 2.0 * s);
      case Kind::HalfX: return std::abs(2.0 * M_PI * xi);
      case Kind::HalfFracY: return frac_pow(Ya, s);
      case Kind::FullOperator: return X2 + frac_pow(Ya, 2.0 * s) + omega;
      case Kind::Resolvent: return 1.0 / (X2 + frac_pow(Ya, 2.0 * s) + omega);
      case Kind::HalfResolvent:
        return 1.0 / (std::abs(2.0 * M_PI * xi) + frac_pow(Ya, s) + omega);
      case Kind::SobolevWeight: {
        double base = 1.0 + X2 + frac_pow(Ya, 2.0 * s);
        return order == 1 ? base : base * base;
      }
      case Kind::LinearPhase: fail_validation("LinearPhase has no real value");
    }
    fail_validation("unknown multiplier kind");
  }

  cdouble phase_value(double xi, double eta) const {
    if (kind != Kind::LinearPhase) fail_validation("phase_value on a non-phase kind");
    const double X2 = square(2.0 * M_PI * xi);
    const double Ya = std::abs(2.0 * M_PI * eta);
    return std::polar(1.0, dt * (X2 + frac_pow(Ya, 2.0 * s)));
  }

private:
  static void require_s(double s) {
    if (!(s > 0.0) || !(s <= 1.0)) fail_validation("fractional order must lie in (0, 1]");
  }
  static double square(double x) { return x * x; }
  static double frac_pow(double base, double e) { return base == 0.0 ? 0.0 : std::pow(base, e); }
};

SpectralField apply_multiplier(const SpectralField& f, const MultiplierSymbol& m);

}  // namespace anls
