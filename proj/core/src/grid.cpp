#include "gfdeconv/grid.hpp"

#include <cmath>
#include <numbers>

namespace gfd {

namespace {

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace

Grid::Grid(double half_width, std::size_t points, int dim)
    : half_width_(half_width), points_(points), dim_(dim) {
  if (!(half_width > 0.0) || !std::isfinite(half_width))
    throw std::invalid_argument("Grid: half_width must be positive and finite");
  if (points < 8 || !is_pow2(points))
    throw std::invalid_argument("Grid: points must be a power of two, at least 8");
  if (dim != 1 && dim != 2) throw std::invalid_argument("Grid: dim must be 1 or 2");
}

std::size_t Grid::size() const {
  std::size_t s = points_;
  for (int k = 1; k < dim_; ++k) s *= points_;
  return s;
}

std::vector<double> Grid::axis_nodes() const {
  std::vector<double> out(points_);
  for (std::size_t j = 0; j < points_; ++j) out[j] = node(j);
  return out;
}

Grid Grid::dual() const {
  const double ls = std::numbers::pi * static_cast<double>(points_) / (2.0 * half_width_);
  return Grid(ls, points_, dim_);
}

bool same_grid(const Grid& a, const Grid& b) {
  if (a.dim() != b.dim() || a.points() != b.points()) return false;
  const double tol = 8.0 * 2.220446049250313e-16 * a.half_width();
  return std::abs(a.half_width() - b.half_width()) <= tol;
}

GriddedFunction::GriddedFunction(const Grid& g, std::vector<cplx> v) : grid(g), values(std::move(v)) {
  if (values.size() != grid.size())
    throw std::invalid_argument("GriddedFunction: values length must equal N^dim");
}

cplx quadrature(const GriddedFunction& f) {
  cplx sum{};
  for (const cplx& v : f.values) sum += v;
  double w = f.grid.spacing();
  if (f.grid.dim() == 2) w *= f.grid.spacing();
  return sum * w;
}

GriddedFunction grid_dirac(const Grid& g) {
  GriddedFunction out(g);
  double w = g.spacing();
  if (g.dim() == 2) w *= g.spacing();
  const std::size_t c = g.origin_index();
  if (g.dim() == 1)
    out.values[c] = 1.0 / w;
  else
    out.at(c, c) = 1.0 / w;
  return out;
}

bool all_finite(const GriddedFunction& f) {
  for (const cplx& v : f.values)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

}  // namespace gfd
