#pragma once

#include <functional>

#include "anls/multiplier.hpp"
#include "anls/transform.hpp"

namespace anls {

/// transform -> multiply -> inverse, verifying the result stays real.
RealField apply_symbol(const RealField& f, const MultiplierSymbol& m);

/// Same pipeline with an arbitrary real symbol sigma(xi, eta); internal
/// helper for preconditioners and diagnostics.
RealField apply_symbol_fn(const RealField& f, const std::function<double(double, double)>& sigma);

/// (-dxx + (-dyy)^s + omega) f, computed spectrally.
RealField apply_L(const RealField& f, double s, double omega);

/// Spectral partial derivatives (Nyquist row zeroed for the odd symbol).
RealField deriv_x(const RealField& f);
RealField deriv_y(const RealField& f);

/// Parseval values of |df/dx|_2^2 and |D_y^s f|_2^2.
double grad_x_sq(const RealField& f);
double frac_y_sq(const RealField& f, double s);
double grad_x_sq(const ComplexField& f);
double frac_y_sq(const ComplexField& f, double s);

enum class SobolevSpace { H1s, H22s };

/// (sum (1 + |2 pi xi|^2 + |2 pi eta|^(2s))^a |u_hat|^2)^(1/2), Parseval
/// normalized so a constant c has norm c * sqrt(lx*ly).
double sobolev_norm(const RealField& f, SobolevSpace space, double s);

/// Two-thirds rule: zero every coefficient with |kx| > nx/3 or |ky| > ny/3.
void dealias_mask(SpectralField& f);
RealField dealias(const RealField& f);

/// Trigonometric interpolation of a periodic field onto another grid. Target
/// points are taken modulo the source box.
RealField resample(const RealField& f, const GridSpec& target);

/// Smooth window equal to 1 on the inner (1-2*taper) fraction of the box,
/// rolling to 0 at the boundary with a cosine profile.
RealField boundary_window(const GridSpec& g, double taper = 0.1);

}  // namespace anls
