#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace gfd {

using cplx = std::complex<double>;

/// Uniform symmetric grid on [-L, L)^dim with N nodes per axis.
///
/// Node j on an axis sits at x_j = -L + j * spacing(), so the origin is the
/// node with index N/2. The frequency grid induced by the Fourier transform
/// is dual(): same N, half-width pi*N/(2L), node spacing pi/L, covering
/// [-pi/spacing, pi/spacing). dual() is an involution up to rounding.
class Grid {
public:
  Grid() = default;
  Grid(double half_width, std::size_t points, int dim = 1);

  double half_width() const { return half_width_; }
  std::size_t points() const { return points_; }
  int dim() const { return dim_; }

  double spacing() const { return 2.0 * half_width_ / static_cast<double>(points_); }
  std::size_t size() const;
  double node(std::size_t j) const { return -half_width_ + spacing() * static_cast<double>(j); }
  std::vector<double> axis_nodes() const;
  std::size_t origin_index() const { return points_ / 2; }

  Grid dual() const;

  bool operator==(const Grid&) const = default;

private:
  double half_width_ = 20.0;
  std::size_t points_ = 1024;
  int dim_ = 1;
};

/// Grids that agree structurally; half-widths may differ by rounding from
/// dual() round trips.
bool same_grid(const Grid& a, const Grid& b);

/// Complex-valued function sampled on a Grid. For dim == 2 the values are
/// row-major: index = i0 * N + i1, axis-0 node i0, axis-1 node i1.
struct GriddedFunction {
  Grid grid;
  std::vector<cplx> values;

  GriddedFunction() = default;
  explicit GriddedFunction(const Grid& g) : grid(g), values(g.size(), cplx{}) {}
  GriddedFunction(const Grid& g, std::vector<cplx> v);

  cplx& at(std::size_t i0) { return values[i0]; }
  const cplx& at(std::size_t i0) const { return values[i0]; }
  cplx& at(std::size_t i0, std::size_t i1) { return values[i0 * grid.points() + i1]; }
  const cplx& at(std::size_t i0, std::size_t i1) const { return values[i0 * grid.points() + i1]; }
};

/// Sample a callable x -> value on a 1-d grid.
template <class F>
GriddedFunction tabulate(const Grid& g, F&& f) {
  if (g.dim() != 1) throw std::invalid_argument("tabulate: grid must be 1-d");
  GriddedFunction out(g);
  for (std::size_t j = 0; j < g.points(); ++j) out.values[j] = cplx(f(g.node(j)));
  return out;
}

/// Sample a callable (x0, x1) -> value on a 2-d grid.
template <class F>
GriddedFunction tabulate2(const Grid& g, F&& f) {
  if (g.dim() != 2) throw std::invalid_argument("tabulate2: grid must be 2-d");
  GriddedFunction out(g);
  const std::size_t n = g.points();
  for (std::size_t i0 = 0; i0 < n; ++i0)
    for (std::size_t i1 = 0; i1 < n; ++i1) out.values[i0 * n + i1] = cplx(f(g.node(i0), g.node(i1)));
  return out;
}

/// Trapezoid-rule integral over the grid box (spacing^dim times the value
/// sum; the two conventions coincide for functions that decay inside the box).
cplx quadrature(const GriddedFunction& f);

/// Discrete delta: mass-1 spike at the origin node (value 1/spacing^dim).
GriddedFunction grid_dirac(const Grid& g);

bool all_finite(const GriddedFunction& f);

}  // namespace gfd
