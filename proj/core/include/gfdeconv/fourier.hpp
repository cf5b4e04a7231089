#pragma once

#include "gfdeconv/grid.hpp"

namespace gfd {

/// Continuous-convention forward transform F(s) = integral f(x) e^{+i x.s} dx,
/// discretized with node weights spacing^dim and the phase correction for the
/// grid origin at -L. Output lives on f.grid.dual().
GriddedFunction forward_ft(const GriddedFunction& f);

/// Inverse transform f(x) = (2 pi)^{-dim} integral F(s) e^{-i x.s} ds.
/// Output lives on F.grid.dual(); inverse_ft(forward_ft(f)) == f to round-off.
GriddedFunction inverse_ft(const GriddedFunction& F);

/// Convolution via the spectral product: inverse_ft(forward_ft(f) * forward_ft(g)).
/// Inputs must share a grid and decay inside it; if either input is not
/// negligible on the outer 5% of the box (relative to its max, threshold
/// 1e-6) a warning is printed to stderr (aliasing risk).
GriddedFunction convolve(const GriddedFunction& f, const GriddedFunction& g);

/// Partial derivative along `axis` by second-order central differences
/// (one-sided second-order stencils at the endpoints).
GriddedFunction spectral_derivative(const GriddedFunction& g, int axis = 0);

/// True when sup |f| over the outer 5% of the grid box is below
/// rel_threshold times sup |f| overall — the aliasing precondition for
/// spectral convolution.
bool boundary_negligible(const GriddedFunction& f, double rel_threshold = 1e-6);

}  // namespace gfd
