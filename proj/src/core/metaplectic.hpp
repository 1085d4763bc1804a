#pragma once

#include "core/fft.hpp"
#include "core/grid.hpp"
#include "core/symplectic.hpp"

namespace mpk {

/// Unit-frequency Fourier transform; sign = -1 analysis kernel
/// e^{-2 pi i xi.x}, sign = +1 the conjugate. Output on the natural dual grid.
GridFunction fourier_transform(const GridFunction& f, int sign = -1);

/// Pointwise multiplication by the chirp e^{i pi Q x.x}, Q symmetric.
GridFunction chirp_multiply(const GridFunction& f, const Matrix& q,
                            WarningSink* warnings = nullptr);

/// (T_E f)(t) = |det E|^{1/2} f(E t) by band-limited interpolation
/// (factor-4 zero-padding, cubic sampling).
GridFunction rescale(const GridFunction& f, const Matrix& e,
                     WarningSink* warnings = nullptr);

/// Fourier multiplier F^{-1}(Phi_{-P} f^): frequency-side chirp.
GridFunction multiplier(const GridFunction& f, const Matrix& p,
                        WarningSink* warnings = nullptr);

/// Apply the metaplectic operator with projection S to f, up to one global
/// unimodular phase. Route depends on rank(B): invertible B runs
/// chirp -> FFT -> rescale -> chirp; B = 0 runs chirp -> rescale; otherwise
/// the partial-Fourier fiber quadrature over ker(B)^perp.
GridFunction apply_metaplectic(const SymplecticMatrix& s, const GridFunction& f,
                               WarningSink* warnings = nullptr,
                               double tol_rank = -1.0);

/// Cross-Wigner distribution W(f,g) on the product grid (lag transform on a
/// doubled lag window; xi axes carry 2n bins).
PhaseSpaceGrid wigner(const GridFunction& f, const GridFunction& g);

/// Relative L2 discrepancy between W(Sf, Sf) and W(f, f) o S^{-1} over a
/// probe lattice in phase space; small values certify metaplecticity.
/// probes_per_axis <= 0 picks a dimension-dependent default.
double check_covariance(const SymplecticMatrix& s, const GridFunction& f,
                        int probes_per_axis = 0,
                        WarningSink* warnings = nullptr);

}  // namespace mpk
