#pragma once

#include "anls/field.hpp"

namespace anls {

/// Forward DFT under the e^{-2 pi i x.xi} convention; carries the 1/(nx*ny)
/// factor so the (0,0) coefficient equals the mean. Rejects non-finite input.
SpectralField forward_transform(const RealField& f);
SpectralField forward_transform(const ComplexField& f);

ComplexField inverse_transform(const SpectralField& f);

/// Inverse transform of Hermitian-symmetric coefficients. Verifies the
/// imaginary residue is below imag_tol * max|f| and discards it; a larger
/// residue indicates symmetry corruption upstream.
RealField inverse_transform_real(const SpectralField& f, double imag_tol = 1e-10);

}  // namespace anls
