#pragma once

#include "nmx/field.hpp"

namespace nmx {

// Componentwise complex 3-d DFT.  Forward kernel is exp(-i*2*pi*m*j/n)
// and is unnormalized; the inverse carries the 1/n^3 factor, so
// to_physical(to_spectral(f)) == f up to roundoff.
SpectralVectorField to_spectral(const VectorField& f);

// Inverse transform.  Throws std::runtime_error if the imaginary residue
// after inversion exceeds 1e-9 relative to the field magnitude, which
// means the coefficients did not describe a real field.
VectorField to_physical(const SpectralVectorField& c);

// scalar-field versions sharing the same plans and conventions
Eigen::ArrayXcd scalar_to_spectral(const ScalarField& s);
ScalarField scalar_to_physical(const Eigen::ArrayXcd& c, const GridSpec& g);

}  // namespace nmx
