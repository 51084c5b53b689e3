#pragma once

#include "nmx/field.hpp"

namespace nmx {

// Differential operators realized as Fourier multipliers.  All of them
// use the grid's differentiation wavenumbers (Nyquist mode treated as
// zero), so the usual vector-calculus identities hold exactly in floating
// point: div(curl f) = 0, curl(curl f) = grad(div f) - Lap f,
// div(helmholtz_project f) = 0.

VectorField curl(const VectorField& f);
VectorField curl_curl(const VectorField& f);
ScalarField divergence(const VectorField& f);
VectorField gradient(const ScalarField& s);

// -Lap as the multiplier |k|^2
VectorField neg_laplacian(const VectorField& f);

// L^2-orthogonal projection onto divergence-free fields:
// c(k) -> c(k) - (k.c(k)) k / |k|^2.  Modes with |k| = 0 (the mean and
// the unpaired Nyquist modes) are annihilated.
VectorField helmholtz_project(const VectorField& f);

// (-Lap)^{-1} as the multiplier 1/|k|^2 with the |k| = 0 modes mapped
// to zero (pseudoinverse on the mean-free subspace)
VectorField inv_laplacian(const VectorField& f);

// h^3 * sum over points of the pointwise dot product; both arguments
// must live on the same grid
double l2_inner(const VectorField& a, const VectorField& b);
double l2_norm(const VectorField& f);
double l2_norm(const ScalarField& s);
double linf_norm(const VectorField& f);

}  // namespace nmx
