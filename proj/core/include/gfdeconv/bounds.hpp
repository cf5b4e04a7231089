#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "gfdeconv/grid.hpp"

namespace gfd {

/// Polynomial envelope V * prod_i (1 + t_i^2)^{m_i}: the parameter of the
/// bounded classes used for clipping and well-posedness checks. A
/// single-entry m applies to every axis.
struct PolyBound {
  std::vector<int> m{0};
  double V = 1.0;
};

void validate(const PolyBound& bound, int dim);

/// Envelope value at a grid node.
double envelope(const PolyBound& bound, const Grid& g, std::size_t flat_index);

/// Magnitude clip preserving phase: values with |b| < envelope are kept,
/// larger ones are pulled just inside the envelope along b/|b|, so the
/// result always satisfies check_uniform_bound. Idempotent.
GriddedFunction clip_to_bound(const GriddedFunction& b, const PolyBound& bound);

struct BoundCheck {
  bool holds = true;
  std::optional<std::size_t> witness;  // first violating node, scanning outward from the origin
};

/// Does |b(t)| < V * prod (1+t_i^2)^{m_i} hold at every node? The witness is
/// the first violating node in order of increasing distance from the origin.
BoundCheck check_uniform_bound(const GriddedFunction& b, const PolyBound& bound);

struct CondsResult {
  double value = 0.0;
  bool converged = false;
};

/// Quadrature of |b(t)| * prod (1+t_i^2)^{-m_i} over the grid, with a tail
/// test: converged when the outer 10% of the box contributes less than 1%
/// of the total (numerical surrogate for integrability).
CondsResult check_conds_integral(const GriddedFunction& b, const std::vector<int>& m);

}  // namespace gfd
